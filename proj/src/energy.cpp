#include "fracmin/energy.hpp"

#include <cmath>

namespace fracmin {

double potential_integral(const Field& u, const NonlinearitySpec& spec) {
    const Grid& g = u.grid();
    double sum = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
        sum += eval_F(spec, g.node(j), u[j]);
    return g.cell_volume() * sum;
}

double energy_value(const Field& u, const NonlinearitySpec& spec) {
    bind_check(spec, u.grid());
    return 0.5 * frac_kinetic(u) - potential_integral(u, spec);
}

Field gradient(const Field& u, const NonlinearitySpec& spec) {
    bind_check(spec, u.grid());
    const Grid& g = u.grid();
    Field lap = frac_laplacian_apply(u);
    std::vector<double> values(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
        values[j] = lap[j] - eval_dF(spec, g.node(j), u[j]);
    return Field(g, std::move(values));
}

double lagrange_multiplier(const Field& u, const NonlinearitySpec& spec) {
    const double m = mass(u);
    if (!(m > 0.0)) throw ZeroField("lagrange_multiplier requires mass(u) > 0");
    return inner(gradient(u, spec), u) / m;
}

double hs_norm(const Field& u) { return std::sqrt(mass(u) + frac_kinetic(u)); }

double el_residual(const Field& u, const NonlinearitySpec& spec) {
    const double m = mass(u);
    if (!(m > 0.0)) throw ZeroField("el_residual requires mass(u) > 0");
    Field grad = gradient(u, spec);
    const double lambda = inner(grad, u) / m;
    return l2_norm(axpy(-lambda, u, grad)) / hs_norm(u);
}

EnergyReport energy(const Field& u, const NonlinearitySpec& spec) {
    const double m = mass(u);
    if (!(m > 0.0)) throw ZeroField("energy report requires mass(u) > 0");
    EnergyReport rep;
    rep.kinetic = 0.5 * frac_kinetic(u);
    rep.potential = potential_integral(u, spec);
    rep.total = rep.kinetic - rep.potential;
    rep.mass = m;
    Field grad = gradient(u, spec);
    rep.lambda = inner(grad, u) / m;
    rep.el_residual = l2_norm(axpy(-rep.lambda, u, grad)) / hs_norm(u);
    rep.hminus_gradient_norm = hminus_norm(grad);
    return rep;
}

nlohmann::json EnergyReport::to_json() const {
    return nlohmann::json{
        {"kinetic", kinetic},
        {"potential", potential},
        {"total", total},
        {"mass", mass},
        {"lambda", lambda},
        {"el_residual", el_residual},
        {"hminus_gradient_norm", hminus_gradient_norm},
    };
}

}  // namespace fracmin
