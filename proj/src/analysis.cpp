#include "fracmin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "fracmin/spectral.hpp"

namespace fracmin {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("analysis rule violated: ") + what);
}

// One minimization plus an optional warm-started candidate; merged by the
// flow's own rule (lowest J, residual tie-break, fresh run wins exact ties).
MinimizerResult minimize_with_candidate(const NonlinearitySpec& spec, const Grid& grid,
                                        const FlowConfig& cfg,
                                        const std::optional<Field>& warm) {
    MinimizerResult best = minimize(spec, grid, cfg);
    if (warm) {
        FlowConfig wcfg = cfg;
        wcfg.init = InitStrategy::warm_start;
        wcfg.warm_field = normalize_mass(*warm, cfg.c2);
        wcfg.restarts = 1;
        MinimizerResult alt = minimize(spec, grid, wcfg);
        std::vector<double> energies = best.restart_energies;
        energies.insert(energies.end(), alt.restart_energies.begin(),
                        alt.restart_energies.end());
        const double tie = 1e-12 * std::max({1.0, std::fabs(alt.report.total),
                                             std::fabs(best.report.total)});
        const bool alt_wins =
            alt.report.total < best.report.total - tie ||
            (std::fabs(alt.report.total - best.report.total) <= tie &&
             alt.report.el_residual < best.report.el_residual);
        if (alt_wins) best = std::move(alt);
        best.restart_energies = std::move(energies);
    }
    return best;
}

double restart_spread(const MinimizerResult& r) {
    const auto [lo, hi] =
        std::minmax_element(r.restart_energies.begin(), r.restart_energies.end());
    return r.restart_energies.empty() ? 0.0 : *hi - *lo;
}

}  // namespace

DilationReport dilation_test(const NonlinearitySpec& spec, const Profile& profile,
                             const Grid& grid, double c2,
                             const std::vector<double>& lambda_ladder) {
    bind_check(spec, grid);
    require(c2 > 0.0, "dilation mass c2 must be positive");
    require(!lambda_ladder.empty(), "dilation ladder must be nonempty");
    const double window_lhs = grid.dim() + 2.0 * grid.s();
    const double window_rhs = 0.5 * grid.dim() * spec.alpha + spec.p_F1;
    require(window_lhs > window_rhs, "exponent window N + 2s > (N/2)*alpha + p_F1");
    for (int k = 0; k <= 64; ++k) {
        const double v = profile.radial(profile.support_radius * k / 64.0);
        const double prev = k == 0 ? v : profile.radial(profile.support_radius * (k - 1) / 64.0);
        require(v >= -1e-12, "profile must be nonnegative");
        require(v <= prev + 1e-12 * (1.0 + std::fabs(prev)),
                "profile must be radially nonincreasing");
    }

    DilationReport rep;
    rep.c2 = c2;
    for (double lambda : lambda_ladder) {
        Field u = normalize_mass(dilate(profile, lambda, grid), c2);
        DilationRow row;
        row.lambda = lambda;
        row.kinetic = 0.5 * frac_kinetic(u);
        row.potential = potential_integral(u, spec);
        row.total = row.kinetic - row.potential;
        rep.rows.push_back(row);
    }
    const auto best = std::min_element(
        rep.rows.begin(), rep.rows.end(),
        [](const DilationRow& a, const DilationRow& b) { return a.total < b.total; });
    rep.best_lambda = best->lambda;
    rep.best_total = best->total;
    rep.negative_witness = best->total < 0.0;
    return rep;
}

nlohmann::json DilationReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const DilationRow& r : rows)
        rows_json.push_back({{"lambda", r.lambda},
                             {"total", r.total},
                             {"kinetic", r.kinetic},
                             {"potential", r.potential}});
    return nlohmann::json{{"c2", c2},
                          {"rows", rows_json},
                          {"verdict", negative_witness ? "NEGATIVE_WITNESS" : "NO_WITNESS"},
                          {"best_lambda", best_lambda},
                          {"best_total", best_total}};
}

std::string DilationReport::to_csv() const {
    std::string out = "lambda,J,kinetic,potential\n";
    char line[160];
    for (const DilationRow& r : rows) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", r.lambda, r.total,
                      r.kinetic, r.potential);
        out += line;
    }
    return out;
}

ScanResult mass_scan(const NonlinearitySpec& spec, const Grid& grid,
                     const std::vector<double>& c_values, const FlowConfig& base,
                     bool with_comparison) {
    require(!c_values.empty(), "mass scan needs at least one mass");
    require(std::is_sorted(c_values.begin(), c_values.end()),
            "mass scan c values must be ascending");
    require(c_values.front() > 0.0, "mass scan c values must be positive");

    ScanResult scan;
    scan.c_values = c_values;
    const NonlinearitySpec inf_spec =
        with_comparison ? comparison_spec(spec) : NonlinearitySpec{};

    auto run_chain = [&](const NonlinearitySpec& sp, std::vector<double>& I_out,
                         std::vector<MinimizerResult>& runs_out) {
        std::optional<Field> prev;
        for (double c : c_values) {
            FlowConfig cfg = base;
            cfg.c2 = c * c;
            MinimizerResult res = minimize_with_candidate(sp, grid, cfg, prev);
            prev = res.u_star;
            I_out.push_back(res.report.total);
            runs_out.push_back(std::move(res));
        }
    };
    run_chain(spec, scan.I_values, scan.runs);
    if (with_comparison) run_chain(inf_spec, scan.I_inf_values, scan.runs_inf);

    for (std::size_t i = 0; i + 1 < scan.I_values.size(); ++i) {
        const double jump = std::fabs(scan.I_values[i + 1] - scan.I_values[i]);
        if (jump > scan.max_adjacent_jump) {
            scan.max_adjacent_jump = jump;
            scan.max_adjacent_dc = c_values[i + 1] - c_values[i];
        }
    }
    return scan;
}

nlohmann::json ScanResult::to_json() const {
    nlohmann::json runs_json = nlohmann::json::array();
    for (const MinimizerResult& r : runs) runs_json.push_back(r.to_json());
    nlohmann::json j{{"c_values", c_values},
                     {"I_values", I_values},
                     {"max_adjacent_jump", max_adjacent_jump},
                     {"max_adjacent_dc", max_adjacent_dc},
                     {"runs", runs_json}};
    if (!I_inf_values.empty()) {
        j["I_inf_values"] = I_inf_values;
        nlohmann::json inf_json = nlohmann::json::array();
        for (const MinimizerResult& r : runs_inf) inf_json.push_back(r.to_json());
        j["runs_inf"] = inf_json;
    }
    return j;
}

std::string ScanResult::to_csv() const {
    std::string out = "c,I,I_inf,converged,converged_inf\n";
    char line[200];
    for (std::size_t i = 0; i < c_values.size(); ++i) {
        const bool has_inf = i < I_inf_values.size();
        std::snprintf(line, sizeof line, "%.17g,%.17g,%s,%d,%s\n", c_values[i], I_values[i],
                      has_inf ? std::to_string(I_inf_values[i]).c_str() : "",
                      runs[i].converged ? 1 : 0,
                      has_inf ? (runs_inf[i].converged ? "1" : "0") : "");
        out += line;
    }
    return out;
}

namespace {

// I value at mass x from the scan grid, linearly interpolated when x falls
// between points (flagged); InsufficientScan when unavailable.
std::pair<double, bool> lookup_I(const std::vector<double>& cs,
                                 const std::vector<double>& Is, double x,
                                 bool interpolate) {
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (std::fabs(cs[i] - x) <= 1e-9 * std::max(1.0, std::fabs(x)))
            return {Is[i], false};
    if (!interpolate)
        throw InsufficientScan("mass " + std::to_string(x) +
                               " not on the scan grid and interpolation is disabled");
    if (x < cs.front() || x > cs.back())
        throw InsufficientScan("mass " + std::to_string(x) + " outside the scanned range");
    const auto it = std::upper_bound(cs.begin(), cs.end(), x);
    const std::size_t i = it - cs.begin() - 1;
    const double w = (x - cs[i]) / (cs[i + 1] - cs[i]);
    return {Is[i] + w * (Is[i + 1] - Is[i]), true};
}

}  // namespace

SubadditivityReport subadditivity_check(const ScanResult& scan, SplitMode mode,
                                        double tol, bool interpolate) {
    if (scan.c_values.size() < 2)
        throw InsufficientScan("subadditivity needs at least two scanned masses");
    if (mode == SplitMode::cross && scan.I_inf_values.empty())
        throw InsufficientScan(
            "cross mode needs comparison values; rerun the scan with the comparison "
            "problem enabled");

    SubadditivityReport rep;
    rep.mode = mode;
    rep.tol = tol;

    double spread = 0.0;
    for (const MinimizerResult& r : scan.runs) spread = std::max(spread, restart_spread(r));
    for (const MinimizerResult& r : scan.runs_inf)
        spread = std::max(spread, restart_spread(r));
    rep.strict_threshold = 2.0 * spread;

    bool first = true;
    for (std::size_t ci = 0; ci < scan.c_values.size(); ++ci) {
        const double c = scan.c_values[ci];
        for (std::size_t ai = 0; ai < scan.c_values.size(); ++ai) {
            const double a = scan.c_values[ai];
            if (!(a > 0.0 && a < c - 1e-12)) continue;
            SubadditivityEntry e;
            e.c = c;
            e.a = a;
            e.b = std::sqrt(c * c - a * a);
            e.I_c = scan.I_values[ci];
            e.I_a = scan.I_values[ai];
            std::tie(e.I_b, e.interpolated_b) =
                lookup_I(scan.c_values, scan.I_values, e.b, interpolate);
            e.margin = e.I_a + e.I_b - e.I_c;
            double governing = e.margin;
            if (mode == SplitMode::cross) {
                e.I_inf_c = scan.I_inf_values[ci];
                e.I_inf_b = lookup_I(scan.c_values, scan.I_inf_values, e.b, interpolate).first;
                e.cross_split_margin = e.I_a + e.I_inf_b - e.I_c;
                e.cross_strict_margin = e.I_inf_c - e.I_c;
                governing = std::min(e.cross_split_margin, e.cross_strict_margin);
            }
            if (first || governing < rep.worst_margin) rep.worst_margin = governing;
            first = false;
            rep.entries.push_back(e);
        }
    }
    if (rep.entries.empty())
        throw InsufficientScan("no (c, a) pairs with 0 < a < c on the scan grid");
    rep.pass = mode == SplitMode::plain ? rep.worst_margin >= -tol
                                        : rep.worst_margin > rep.strict_threshold;
    return rep;
}

nlohmann::json SubadditivityReport::to_json() const {
    nlohmann::json entries_json = nlohmann::json::array();
    for (const SubadditivityEntry& e : entries) {
        nlohmann::json je{{"c", e.c},
                          {"a", e.a},
                          {"b", e.b},
                          {"I_c", e.I_c},
                          {"I_a", e.I_a},
                          {"I_b", e.I_b},
                          {"interpolated_b", e.interpolated_b},
                          {"margin", e.margin}};
        if (mode == SplitMode::cross) {
            je["I_inf_b"] = e.I_inf_b;
            je["I_inf_c"] = e.I_inf_c;
            je["cross_split_margin"] = e.cross_split_margin;
            je["cross_strict_margin"] = e.cross_strict_margin;
        }
        entries_json.push_back(je);
    }
    return nlohmann::json{{"mode", mode == SplitMode::plain ? "plain" : "cross"},
                          {"tol", tol},
                          {"strict_threshold", strict_threshold},
                          {"worst_margin", worst_margin},
                          {"pass", pass},
                          {"entries", entries_json}};
}

ThetaReport theta_scaling_check(const NonlinearitySpec& spec, const Grid& grid, double c,
                                const std::vector<double>& theta_ladder,
                                const FlowConfig& base, double tol) {
    require(c > 0.0, "theta scaling mass must be positive");
    require(!theta_ladder.empty(), "theta ladder must be nonempty");
    for (double theta : theta_ladder)
        require(theta >= 1.0 && theta <= 4.0, "theta ladder must lie in [1, 4]");

    FlowConfig cfg = base;
    cfg.c2 = c * c;
    MinimizerResult base_run = minimize_with_candidate(spec, grid, cfg, std::nullopt);
    ThetaReport rep;
    rep.c = c;
    rep.I_c = base_run.report.total;
    rep.tol = tol;
    if (!(rep.I_c < 0.0)) {
        std::ostringstream msg;
        msg << "theta scaling requires I_c < 0, got I_c = " << rep.I_c;
        throw PrerequisiteFailed(msg.str());
    }

    const double J_base = base_run.report.total;
    rep.pass = true;
    for (double theta : theta_ladder) {
        ThetaRow row;
        row.theta = theta;
        if (theta == 1.0) {
            row.I_theta = rep.I_c;
        } else {
            FlowConfig tcfg = base;
            tcfg.c2 = theta * theta * c * c;
            row.I_theta =
                minimize_with_candidate(spec, grid, tcfg, base_run.u_star).report.total;
        }
        row.quadratic_bound = theta * theta * rep.I_c;
        row.margin = row.quadratic_bound - row.I_theta;
        row.vector_lhs = energy_value(scale(theta, base_run.u_star), spec);
        row.vector_rhs = std::pow(theta, spec.sigma + 2.0) * J_base;
        if (row.margin < -tol) rep.pass = false;
        if (row.vector_lhs > row.vector_rhs + tol * (1.0 + std::fabs(row.vector_rhs)))
            rep.pass = false;
        rep.rows.push_back(row);
    }
    return rep;
}

nlohmann::json ThetaReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const ThetaRow& r : rows)
        rows_json.push_back({{"theta", r.theta},
                             {"I_theta", r.I_theta},
                             {"quadratic_bound", r.quadratic_bound},
                             {"margin", r.margin},
                             {"vector_lhs", r.vector_lhs},
                             {"vector_rhs", r.vector_rhs}});
    return nlohmann::json{
        {"c", c}, {"I_c", I_c}, {"tol", tol}, {"pass", pass}, {"rows", rows_json}};
}

Point best_overlap_shift(const Field& u, const Field& v) {
    if (!(u.grid() == v.grid()))
        throw ConfigError("analysis rule violated: overlap comparison needs matching grids");
    const Grid& g = u.grid();
    const int M = g.points_per_dim();

    std::vector<std::complex<double>> cu = dft_forward(u);
    std::vector<std::complex<double>> cv = dft_forward(v);
    for (std::size_t k = 0; k < cu.size(); ++k) cu[k] *= std::conj(cv[k]);
    Field corr = dft_inverse(g, cu);  // proportional to <u(. + shift), v> per node

    std::size_t best = 0;
    for (std::size_t j = 1; j < corr.size(); ++j)
        if (corr[j] > corr[best]) best = j;

    // per-axis parabolic refinement of the correlation peak
    const int jx = static_cast<int>(best) % M;
    const int jy = static_cast<int>(best) / M;
    auto at = [&](int ix, int iy) {
        ix = (ix % M + M) % M;
        iy = (iy % M + M) % M;
        return corr[static_cast<std::size_t>(ix) + static_cast<std::size_t>(M) * iy];
    };
    auto refine = [&](double p, double q, double r) {
        const double denom = p - 2.0 * q + r;
        if (std::fabs(denom) < 1e-300) return 0.0;
        return std::clamp(0.5 * (p - r) / denom, -0.5, 0.5);
    };
    // corr[j] is the overlap at the cyclic lattice offset j * h (the forward
    // transform carries index phases, not node coordinates); fold into the
    // symmetric fundamental domain
    Point shift{0.0, 0.0};
    shift[0] = std::remainder(
        (jx + refine(at(jx - 1, jy), at(jx, jy), at(jx + 1, jy))) * g.spacing(),
        g.box_length());
    if (g.dim() == 2)
        shift[1] = std::remainder(
            (jy + refine(at(jx, jy - 1), at(jx, jy), at(jx, jy + 1))) * g.spacing(),
            g.box_length());
    return shift;
}

double aligned_l2_error(const Field& u, const Field& v) {
    const Point shift = best_overlap_shift(u, v);
    return l2_norm(sub(spectral_translate(u, shift), v)) / l2_norm(v);
}

}  // namespace fracmin
