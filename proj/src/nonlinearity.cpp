#include "fracmin/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fracmin {

namespace {

double sign_of(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

double radius_of(const Point& x) { return std::hypot(x[0], x[1]); }

// Periodic coefficient a(x) = base + amp * prod_i cos^2(pi x_i).  Unused
// coordinates are zero and contribute a neutral factor cos^2(0) = 1, so the
// same expression serves both dimensions.
double periodic_coefficient(const NonlinearitySpec& spec, const Point& x) {
    const double c0 = std::cos(std::numbers::pi * x[0]);
    const double c1 = std::cos(std::numbers::pi * x[1]);
    return spec.coeff_base + spec.coeff_amp * (c0 * c0) * (c1 * c1);
}

double envelope(const NonlinearitySpec& spec, const Point& x) {
    const double r = radius_of(x);
    const double w = spec.env_width;
    return spec.env_amp * std::exp(-(r * r) / (w * w));
}

double decay_weight(const NonlinearitySpec& spec, const Point& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return spec.delta_F1 * std::pow(1.0 + r2, -spec.p_F1 / 2.0);
}

// Cell lookup for tabulated specs: index i with knots[i] <= v <= knots[i+1]
// and the interpolation fraction, raising TabulationRange outside the table.
std::pair<std::size_t, double> locate(const std::vector<double>& knots,
                                      double v, const char* axis) {
    if (v < knots.front() || v > knots.back()) {
        std::ostringstream msg;
        msg << "user_tabulated " << axis << " query out of range: " << v
            << " not in [" << knots.front() << ", " << knots.back() << "]";
        throw TabulationRange(msg.str());
    }
    auto it = std::upper_bound(knots.begin(), knots.end(), v);
    std::size_t i = (it == knots.begin()) ? 0 : (it - knots.begin() - 1);
    i = std::min(i, knots.size() - 2);
    const double span = knots[i + 1] - knots[i];
    return {i, (v - knots[i]) / span};
}

struct TableCell {
    std::size_t ir, it;
    double fr, ft;  // fractions along radius and t
};

TableCell table_cell(const Tabulation& tab, const Point& x, double t) {
    auto [ir, fr] = locate(tab.radii, radius_of(x), "radius");
    auto [it, ft] = locate(tab.ts, t, "t");
    return {ir, it, fr, ft};
}

double table_value(const Tabulation& tab, const TableCell& c) {
    const std::size_t nt = tab.ts.size();
    const double v00 = tab.values[c.ir * nt + c.it];
    const double v01 = tab.values[c.ir * nt + c.it + 1];
    const double v10 = tab.values[(c.ir + 1) * nt + c.it];
    const double v11 = tab.values[(c.ir + 1) * nt + c.it + 1];
    const double low = v00 + c.ft * (v01 - v00);
    const double high = v10 + c.ft * (v11 - v10);
    return low + c.fr * (high - low);
}

double table_slope(const Tabulation& tab, const TableCell& c) {
    const std::size_t nt = tab.ts.size();
    const double dt = tab.ts[c.it + 1] - tab.ts[c.it];
    const double s0 = (tab.values[c.ir * nt + c.it + 1] - tab.values[c.ir * nt + c.it]) / dt;
    const double s1 = (tab.values[(c.ir + 1) * nt + c.it + 1] -
                       tab.values[(c.ir + 1) * nt + c.it]) / dt;
    return s0 + c.fr * (s1 - s0);
}

bool table_is_x_independent(const Tabulation& tab) {
    const std::size_t nt = tab.ts.size();
    for (std::size_t i = 1; i < tab.radii.size(); ++i)
        for (std::size_t j = 0; j < nt; ++j)
            if (tab.values[i * nt + j] != tab.values[j]) return false;
    return true;
}

void validate_table(const Tabulation& tab) {
    auto ascending = [](const std::vector<double>& v) {
        return v.size() >= 2 && std::is_sorted(v.begin(), v.end()) &&
               std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!ascending(tab.radii) || tab.radii.front() < 0.0)
        throw ConfigError("tabulation rule violated: radii must be strictly ascending and nonnegative");
    if (!ascending(tab.ts))
        throw ConfigError("tabulation rule violated: ts must be strictly ascending");
    if (tab.values.size() != tab.radii.size() * tab.ts.size())
        throw ConfigError("tabulation rule violated: values size must be radii.size() * ts.size()");
    for (double v : tab.values)
        if (!std::isfinite(v))
            throw ConfigError("tabulation rule violated: values must be finite");
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::pure_power: return "pure_power";
        case Family::weighted_power: return "weighted_power";
        case Family::periodic_power: return "periodic_power";
        case Family::perturbed_periodic: return "perturbed_periodic";
        case Family::user_tabulated: return "user_tabulated";
    }
    throw ConfigError("nonlinearity rule violated: unknown family tag");
}

Family family_from_name(const std::string& name) {
    for (Family f : {Family::pure_power, Family::weighted_power, Family::periodic_power,
                     Family::perturbed_periodic, Family::user_tabulated})
        if (family_name(f) == name) return f;
    throw ConfigError("nonlinearity rule violated: unknown family '" + name + "'");
}

NonlinearitySpec pure_power_spec(double ell) {
    if (ell <= 0.0)
        throw ConfigError("nonlinearity rule violated: 0 < ell");
    NonlinearitySpec spec;
    spec.family = Family::pure_power;
    spec.ell = ell;
    spec.alpha = ell + 2.0;   // the lower bound binds with its own exponent
    spec.gamma = ell / 2.0;
    spec.sigma = ell;
    spec.beta = ell;
    spec.delta_F1 = 0.5 / (ell + 2.0);  // half the exact coefficient 1/(ell+2)
    spec.p_F1 = 0.0;
    return spec;
}

NonlinearitySpec weighted_power_spec(double delta, double p, double alpha,
                                     double R, double S) {
    NonlinearitySpec spec;
    spec.family = Family::weighted_power;
    spec.alpha = alpha;
    spec.ell = std::max(alpha - 2.0, 1e-2);  // growth bound exponent for |t|^alpha
    spec.gamma = spec.ell / 2.0;
    spec.beta = std::max(alpha - 2.0, 1e-2);
    spec.delta_F1 = delta;
    spec.p_F1 = p;
    spec.R_F1 = R;
    spec.S_F1 = S;
    // The weight decays at infinity, so the natural problem at infinity is free:
    // the comparison is the zero nonlinearity.
    spec.comparison = std::make_shared<NonlinearitySpec>(zero_nonlinearity());
    return spec;
}

NonlinearitySpec periodic_power_spec(double sigma, double base, double amp) {
    if (base < 0.0 || base + amp < 0.0)
        throw ConfigError("nonlinearity rule violated: periodic coefficient must be nonnegative");
    NonlinearitySpec spec;
    spec.family = Family::periodic_power;
    spec.sigma = sigma;
    spec.ell = sigma;
    spec.gamma = sigma / 2.0;
    spec.beta = sigma;
    spec.alpha = sigma + 2.0;
    spec.coeff_base = base;
    spec.coeff_amp = amp;
    return spec;
}

NonlinearitySpec perturbed_periodic_spec(double sigma, double base, double amp,
                                         double env_amp, double env_width) {
    if (env_amp < 0.0 || env_width <= 0.0)
        throw ConfigError("nonlinearity rule violated: envelope must be nonnegative with positive width");
    NonlinearitySpec spec = periodic_power_spec(sigma, base, amp);
    spec.family = Family::perturbed_periodic;
    spec.env_amp = env_amp;
    spec.env_width = env_width;
    return spec;
}

NonlinearitySpec user_tabulated_spec(Tabulation table) {
    validate_table(table);
    NonlinearitySpec spec;
    spec.family = Family::user_tabulated;
    spec.table = std::make_shared<Tabulation>(std::move(table));
    return spec;
}

NonlinearitySpec zero_nonlinearity() {
    NonlinearitySpec spec;
    spec.family = Family::periodic_power;
    spec.coeff_base = 0.0;
    spec.coeff_amp = 0.0;
    // Exponents sit inside every realistic binding window so the zero
    // nonlinearity can accompany any grid.
    spec.sigma = 0.05;
    spec.ell = 0.05;
    spec.gamma = 0.025;
    spec.beta = 0.05;
    spec.alpha = 2.05;
    return spec;
}

double eval_F(const NonlinearitySpec& spec, const Point& x, double t) {
    if (!std::isfinite(t))
        throw ConfigError("nonlinearity rule violated: t must be finite");
    if (t == 0.0) return 0.0;
    const double at = std::fabs(t);
    switch (spec.family) {
        case Family::pure_power:
            return std::pow(at, spec.ell + 2.0) / (spec.ell + 2.0);
        case Family::weighted_power:
            return decay_weight(spec, x) * std::pow(at, spec.alpha);
        case Family::periodic_power:
            return periodic_coefficient(spec, x) * std::pow(at, spec.sigma + 2.0) /
                   (spec.sigma + 2.0);
        case Family::perturbed_periodic:
            return periodic_coefficient(spec, x) * std::pow(at, spec.sigma + 2.0) /
                       (spec.sigma + 2.0) +
                   envelope(spec, x) * t * t;
        case Family::user_tabulated:
            return table_value(*spec.table, table_cell(*spec.table, x, t));
    }
    throw ConfigError("nonlinearity rule violated: unknown family tag");
}

double eval_dF(const NonlinearitySpec& spec, const Point& x, double t) {
    if (!std::isfinite(t))
        throw ConfigError("nonlinearity rule violated: t must be finite");
    if (t == 0.0 && spec.family != Family::user_tabulated) return 0.0;
    const double at = std::fabs(t);
    switch (spec.family) {
        case Family::pure_power:
            return std::pow(at, spec.ell + 1.0) * sign_of(t);
        case Family::weighted_power:
            return decay_weight(spec, x) * spec.alpha * std::pow(at, spec.alpha - 1.0) *
                   sign_of(t);
        case Family::periodic_power:
            return periodic_coefficient(spec, x) * std::pow(at, spec.sigma + 1.0) *
                   sign_of(t);
        case Family::perturbed_periodic:
            return periodic_coefficient(spec, x) * std::pow(at, spec.sigma + 1.0) *
                       sign_of(t) +
                   2.0 * envelope(spec, x) * t;
        case Family::user_tabulated:
            return table_slope(*spec.table, table_cell(*spec.table, x, t));
    }
    throw ConfigError("nonlinearity rule violated: unknown family tag");
}

std::pair<double, double> cutoff_split(const NonlinearitySpec& spec,
                                       const Point& x, double t) {
    const double at = std::fabs(t);
    const double phi = at <= 1.0 ? 1.0 : (at >= 2.0 ? 0.0 : 2.0 - at);
    const double dF = eval_dF(spec, x, t);
    // Split so that the larger part is computed first and the smaller by
    // subtraction; the difference is then exact and the parts always
    // reconstruct dF without rounding residue.
    if (phi >= 0.5) {
        const double d1 = phi * dF;
        return {d1, dF - d1};
    }
    const double d2 = (1.0 - phi) * dF;
    return {dF - d2, d2};
}

bool has_comparison(const NonlinearitySpec& spec) {
    if (spec.comparison) return true;
    switch (spec.family) {
        case Family::pure_power:
        case Family::periodic_power:
        case Family::perturbed_periodic:
            return true;
        case Family::weighted_power:
            return false;
        case Family::user_tabulated:
            return spec.table && table_is_x_independent(*spec.table);
    }
    return false;
}

NonlinearitySpec comparison_spec(const NonlinearitySpec& spec) {
    if (spec.comparison) return *spec.comparison;
    switch (spec.family) {
        case Family::pure_power: {
            NonlinearitySpec cmp = spec;  // x-independent: its own problem at infinity
            cmp.sigma = spec.ell;         // exact homogeneity degree of |t|^{ell+2}
            return cmp;
        }
        case Family::periodic_power:
            return spec;  // already periodic
        case Family::perturbed_periodic: {
            NonlinearitySpec cmp = spec;  // drop the localized perturbation
            cmp.family = Family::periodic_power;
            cmp.env_amp = 0.0;
            return cmp;
        }
        case Family::user_tabulated:
            if (spec.table && table_is_x_independent(*spec.table))
                return spec;
            break;
        case Family::weighted_power:
            break;
    }
    throw MissingComparison(
        "no comparison nonlinearity available: supply an explicit periodic spec");
}

void bind_check(const NonlinearitySpec& spec, const Grid& grid) {
    const double window = 4.0 * grid.s() / grid.dim();
    std::ostringstream msg;
    if (!(spec.ell > 0.0)) {
        msg << "nonlinearity binding rule violated: 0 < ell (ell = " << spec.ell << ")";
        throw ConfigError(msg.str());
    }
    if (!(spec.ell < window)) {
        msg << "nonlinearity binding rule violated: ell < 4s/N (ell = " << spec.ell
            << ", 4s/N = " << window << ")";
        throw ConfigError(msg.str());
    }
    if (spec.family == Family::weighted_power) {
        if (!(spec.p_F1 >= 0.0 && spec.p_F1 < 2.0)) {
            msg << "nonlinearity binding rule violated: p_F1 in [0, 2) (p_F1 = "
                << spec.p_F1 << ")";
            throw ConfigError(msg.str());
        }
        if (!(spec.delta_F1 > 0.0 && spec.R_F1 > 0.0 && spec.S_F1 > 0.0))
            throw ConfigError(
                "nonlinearity binding rule violated: delta_F1, R_F1, S_F1 must be positive");
        const double lhs = grid.dim() + 2.0 * grid.s();
        const double rhs = 0.5 * grid.dim() * spec.alpha + spec.p_F1;
        if (!(lhs > rhs)) {
            msg << "nonlinearity binding rule violated: N + 2s > (N/2)*alpha + p_F1 ("
                << lhs << " <= " << rhs << ")";
            throw ConfigError(msg.str());
        }
    }
    if (spec.comparison) bind_check(*spec.comparison, grid);
}

nlohmann::json spec_to_json(const NonlinearitySpec& spec) {
    nlohmann::json j{
        {"family", family_name(spec.family)},
        {"ell", spec.ell},
        {"alpha", spec.alpha},
        {"beta", spec.beta},
        {"gamma", spec.gamma},
        {"sigma", spec.sigma},
        {"A", spec.A},
        {"A_prime", spec.A_prime},
        {"B", spec.B},
        {"B_prime", spec.B_prime},
        {"delta_F1", spec.delta_F1},
        {"p_F1", spec.p_F1},
        {"R_F1", spec.R_F1},
        {"S_F1", spec.S_F1},
        {"coeff_base", spec.coeff_base},
        {"coeff_amp", spec.coeff_amp},
        {"env_amp", spec.env_amp},
        {"env_width", spec.env_width},
    };
    if (spec.table)
        j["table"] = {{"radii", spec.table->radii},
                      {"ts", spec.table->ts},
                      {"values", spec.table->values}};
    if (spec.comparison) j["comparison"] = spec_to_json(*spec.comparison);
    return j;
}

NonlinearitySpec spec_from_json(const nlohmann::json& j) {
    if (!j.contains("family"))
        throw ConfigError("nonlinearity rule violated: missing 'family' tag");
    NonlinearitySpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    auto pick = [&](const char* key, double& slot) {
        if (j.contains(key)) slot = j.at(key).get<double>();
    };
    pick("ell", spec.ell);
    pick("alpha", spec.alpha);
    pick("beta", spec.beta);
    pick("gamma", spec.gamma);
    pick("sigma", spec.sigma);
    pick("A", spec.A);
    pick("A_prime", spec.A_prime);
    pick("B", spec.B);
    pick("B_prime", spec.B_prime);
    pick("delta_F1", spec.delta_F1);
    pick("p_F1", spec.p_F1);
    pick("R_F1", spec.R_F1);
    pick("S_F1", spec.S_F1);
    pick("coeff_base", spec.coeff_base);
    pick("coeff_amp", spec.coeff_amp);
    pick("env_amp", spec.env_amp);
    pick("env_width", spec.env_width);
    if (j.contains("table")) {
        Tabulation tab;
        tab.radii = j.at("table").at("radii").get<std::vector<double>>();
        tab.ts = j.at("table").at("ts").get<std::vector<double>>();
        tab.values = j.at("table").at("values").get<std::vector<double>>();
        validate_table(tab);
        spec.table = std::make_shared<Tabulation>(std::move(tab));
    } else if (spec.family == Family::user_tabulated) {
        throw ConfigError("nonlinearity rule violated: user_tabulated requires a table");
    }
    if (j.contains("comparison"))
        spec.comparison = std::make_shared<NonlinearitySpec>(spec_from_json(j.at("comparison")));
    return spec;
}

}  // namespace fracmin
