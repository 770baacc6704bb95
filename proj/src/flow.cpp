#include "fracmin/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <random>
#include <sstream>

#include "fracmin/profiles.hpp"
#include "fracmin/spectral.hpp"

namespace fracmin {

namespace {

std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    return std::mt19937_64(seq);
}

// A smooth positive bump at a random center with a random width; building
// block for both the random init and the perturbations that differentiate
// restarts of the deterministic strategies.
Field random_bump_field(const Grid& g, std::mt19937_64& rng) {
    const double L = g.box_length();
    std::uniform_real_distribution<double> center(-L / 2.0, L / 2.0);
    std::uniform_real_distribution<double> width(L / 16.0, L / 6.0);
    std::uniform_real_distribution<double> amp(0.25, 1.0);
    const int bumps = 2;
    std::vector<std::array<double, 4>> params;  // cx, cy, w, a
    for (int b = 0; b < bumps; ++b)
        params.push_back({center(rng), g.dim() == 2 ? center(rng) : 0.0,
                          width(rng), amp(rng)});
    return Field::sample(g, [&](const Point& x) {
        double v = 0.0;
        for (const auto& p : params) {
            const double d = g.torus_distance(x, {p[0], p[1]});
            v += p[3] * std::exp(-(d * d) / (p[2] * p[2]));
        }
        return v;
    });
}

Field dilation_ladder_seed(const NonlinearitySpec& spec, const Grid& g, double c2) {
    const Profile phi = gaussian_profile();
    std::optional<Field> best;
    double best_J = 0.0;
    for (int k = 0; k <= 8; ++k) {
        const double lambda = std::pow(2.0, -k);
        if (phi.support_radius / lambda > g.box_length() / 2.0) break;
        Field cand = normalize_mass(dilate(phi, lambda, g), c2);
        const double J = energy_value(cand, spec);
        if (!best || J < best_J) {
            best = std::move(cand);
            best_J = J;
        }
    }
    if (!best)
        throw ProfileOverflow("dilation ladder has no feasible rung on this box");
    return *best;
}

Field initial_iterate(const NonlinearitySpec& spec, const Grid& g,
                      const FlowConfig& cfg, int restart) {
    auto rng = restart_rng(cfg.seed, restart);
    Field base = [&]() -> Field {
        switch (cfg.init) {
            case InitStrategy::warm_start:
                return *cfg.warm_field;
            case InitStrategy::random_bump:
                return random_bump_field(g, rng);
            case InitStrategy::gaussian_dilation_scan:
            default:
                return dilation_ladder_seed(spec, g, cfg.c2);
        }
    }();
    if (restart > 0 && cfg.init != InitStrategy::random_bump) {
        // deterministic per-restart diversification around the common seed field
        Field noise = random_bump_field(g, rng);
        const double level = 0.05 * l2_norm(base) / std::max(l2_norm(noise), 1e-300);
        base = axpy(level, noise, base);
    }
    return normalize_mass(base, cfg.c2);
}

struct FlowOutcome {
    Field u;
    EnergyReport report;
    int iterations = 0;
    std::vector<double> energy_trace;
    std::vector<double> hs_trace;
    std::vector<double> residual_trace;
    bool converged = false;
    double hs_sup = 0.0;
};

FlowOutcome run_single(const NonlinearitySpec& spec, const Grid& g,
                       const FlowConfig& cfg, int restart) {
    Field u = initial_iterate(spec, g, cfg, restart);
    double kin = frac_kinetic(u);
    double J = 0.5 * kin - potential_integral(u, spec);

    FlowOutcome out{u, {}, 0, {}, {}, {}, false, 0.0};
    auto hs_of = [&](double kinetic) { return std::sqrt(cfg.c2 + kinetic); };
    out.energy_trace.push_back(J);
    out.hs_trace.push_back(hs_of(kin));
    out.hs_sup = out.hs_trace.back();

    const double tau_cap = 10.0 * cfg.step_init;
    const double tau_floor = 1e-18 * cfg.step_init;
    double tau = cfg.step_init;

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        Field grad = gradient(u, spec);
        const double lambda = inner(grad, u) / cfg.c2;
        const double resid = l2_norm(axpy(-lambda, u, grad)) / hs_of(kin);
        out.residual_trace.push_back(resid);
        if (resid <= cfg.el_tol) {
            out.converged = true;
            break;
        }

        bool accepted = false;
        while (tau >= tau_floor) {
            std::optional<Field> cand;
            try {
                cand = normalize_mass(axpy(-tau, grad, u), cfg.c2);
            } catch (const ZeroField&) {
                // step annihilated the field; treat as a rejected trial
            }
            if (cand) {
                const double kin_c = frac_kinetic(*cand);
                const double J_c = 0.5 * kin_c - potential_integral(*cand, spec);
                if (J_c < J) {
                    u = std::move(*cand);
                    kin = kin_c;
                    J = J_c;
                    accepted = true;
                    break;
                }
            }
            tau *= cfg.backtrack_factor;
        }
        if (!accepted) break;  // flat to roundoff: no descent direction left

        ++out.iterations;
        out.energy_trace.push_back(J);
        out.hs_trace.push_back(hs_of(kin));
        out.hs_sup = std::max(out.hs_sup, out.hs_trace.back());
        if (J < cfg.energy_floor) {
            std::ostringstream msg;
            msg << "energy " << J << " fell below the floor " << cfg.energy_floor
                << "; the problem looks mass-supercritical on this grid";
            throw DivergentEnergy(msg.str());
        }
        tau = std::min(tau * 1.25, tau_cap);
    }

    out.u = u;
    out.report = energy(u, spec);
    // the definitive convergence statement comes from the final report
    out.converged = out.report.el_residual <= cfg.el_tol;
    while (out.residual_trace.size() < out.energy_trace.size())
        out.residual_trace.push_back(out.report.el_residual);
    return out;
}

}  // namespace

std::string init_strategy_name(InitStrategy s) {
    switch (s) {
        case InitStrategy::gaussian_dilation_scan: return "gaussian_dilation_scan";
        case InitStrategy::random_bump: return "random_bump";
        case InitStrategy::warm_start: return "warm_start";
    }
    return "gaussian_dilation_scan";
}

InitStrategy init_strategy_from_name(const std::string& name) {
    for (InitStrategy s : {InitStrategy::gaussian_dilation_scan, InitStrategy::random_bump,
                           InitStrategy::warm_start})
        if (init_strategy_name(s) == name) return s;
    throw ConfigError("flow rule violated: unknown init_strategy '" + name + "'");
}

void validate(const FlowConfig& cfg, const Grid& grid) {
    auto need = [](bool ok, const char* rule) {
        if (!ok) throw ConfigError(std::string("flow rule violated: ") + rule);
    };
    need(cfg.c2 > 0.0, "c2 > 0");
    need(cfg.step_init > 0.0, "step_init > 0");
    need(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0,
         "backtrack_factor in (0, 1)");
    need(cfg.max_iters >= 1, "max_iters >= 1");
    need(cfg.el_tol > 0.0, "el_tol > 0");
    need(cfg.restarts >= 1, "restarts >= 1");
    if (cfg.init == InitStrategy::warm_start) {
        need(cfg.warm_field.has_value(), "warm_start requires a warm field");
        need(cfg.warm_field->grid() == grid, "warm field grid must match the run grid");
    }
}

MinimizerResult minimize(const NonlinearitySpec& spec, const Grid& grid,
                         const FlowConfig& cfg) {
    bind_check(spec, grid);
    validate(cfg, grid);

    std::vector<FlowOutcome> outcomes;
    outcomes.reserve(cfg.restarts);
    if (cfg.restarts == 1) {
        outcomes.push_back(run_single(spec, grid, cfg, 0));
    } else {
        std::vector<std::future<FlowOutcome>> futures;
        futures.reserve(cfg.restarts);
        for (int r = 0; r < cfg.restarts; ++r)
            futures.push_back(std::async(std::launch::async, [&, r] {
                return run_single(spec, grid, cfg, r);
            }));
        std::exception_ptr first_error;
        for (auto& f : futures) {
            try {
                outcomes.push_back(f.get());
            } catch (...) {
                if (!first_error) first_error = std::current_exception();
            }
        }
        if (first_error) std::rethrow_exception(first_error);
    }

    // deterministic merge: lowest J, ties (1e-12) by residual, then by index
    int best = 0;
    for (int r = 1; r < static_cast<int>(outcomes.size()); ++r) {
        const double Jr = outcomes[r].report.total;
        const double Jb = outcomes[best].report.total;
        const double tie = 1e-12 * std::max({1.0, std::fabs(Jr), std::fabs(Jb)});
        if (Jr < Jb - tie)
            best = r;
        else if (std::fabs(Jr - Jb) <= tie &&
                 outcomes[r].report.el_residual < outcomes[best].report.el_residual)
            best = r;
    }

    FlowOutcome& win = outcomes[best];
    MinimizerResult result{std::move(win.u),
                           win.report,
                           win.iterations,
                           std::move(win.energy_trace),
                           std::move(win.hs_trace),
                           std::move(win.residual_trace),
                           win.converged,
                           win.hs_sup,
                           best,
                           {},
                           cfg.c2};
    for (const FlowOutcome& o : outcomes)
        result.restart_energies.push_back(o.report.total);
    return result;
}

Certification certify(const MinimizerResult& result, const NonlinearitySpec& spec) {
    Certification cert;
    cert.monotone_energy = true;
    for (std::size_t k = 1; k < result.energy_trace.size(); ++k)
        if (result.energy_trace[k] > result.energy_trace[k - 1]) cert.monotone_energy = false;
    EnergyReport fresh = energy(result.u_star, spec);
    cert.el_residual = fresh.el_residual;
    cert.lambda = fresh.lambda;
    cert.hs_sup = result.hs_sup;
    cert.mass_error = std::fabs(fresh.mass - result.target_c2) / result.target_c2;
    cert.converged = result.converged;
    return cert;
}

nlohmann::json MinimizerResult::to_json() const {
    return nlohmann::json{
        {"report", report.to_json()},
        {"iterations", iterations},
        {"converged", converged},
        {"hs_sup", hs_sup},
        {"restart_index", restart_index},
        {"restart_energies", restart_energies},
        {"target_c2", target_c2},
        {"trace_length", energy_trace.size()},
    };
}

std::string MinimizerResult::trace_csv() const {
    std::string out = "iteration,J,residual,hs_norm\n";
    char line[160];
    for (std::size_t k = 0; k < energy_trace.size(); ++k) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", k, energy_trace[k],
                      residual_trace[k], hs_trace[k]);
        out += line;
    }
    return out;
}

nlohmann::json Certification::to_json() const {
    return nlohmann::json{
        {"monotone_energy", monotone_energy},
        {"converged", converged},
        {"el_residual", el_residual},
        {"lambda", lambda},
        {"hs_sup", hs_sup},
        {"mass_error", mass_error},
    };
}

}  // namespace fracmin
