#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "fracmin/nonlinearity.hpp"

namespace fracmin {

namespace {

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        out.push_back(std::exp(llo + (lhi - llo) * i / (n - 1)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

struct Lattice {
    std::vector<Point> xs;   // origin plus log-spaced radii along sample rays
    std::vector<double> rs;  // radius of each entry in xs (parallel array)
    std::vector<double> ts;
    std::vector<double> thetas;
    double t_hi = 0.0;       // hard upper limit for evaluations (tables)
    bool t_limited = false;
};

// Builds the scan lattice, narrowing the plan to the rectangle a tabulated
// spec can actually answer; the effective ranges are recorded back into the
// plan so the report shows what was scanned.
Lattice build_lattice(const NonlinearitySpec& spec, SamplePlan& plan) {
    double r_lo = plan.r_min, r_hi = plan.box_radius;
    double t_lo = plan.t_min, t_hi = plan.t_max;
    bool include_origin = true;
    Lattice lat;
    if (spec.family == Family::user_tabulated) {
        const Tabulation& tab = *spec.table;
        r_hi = std::min(r_hi, tab.radii.back());
        r_lo = std::max(r_lo, tab.radii.front());
        include_origin = tab.radii.front() == 0.0;
        t_lo = std::max(t_lo, tab.ts.front());
        t_hi = std::min(t_hi, tab.ts.back());
        if (!(t_lo > 0.0) || !(t_hi > t_lo))
            throw ConfigError(
                "sample plan rule violated: tabulation does not cover a positive t window");
        if (!(r_hi > r_lo))
            throw ConfigError(
                "sample plan rule violated: tabulation does not cover the radius window");
        lat.t_limited = true;
        plan.r_min = r_lo;
        plan.box_radius = r_hi;
        plan.t_min = t_lo;
        plan.t_max = t_hi;
    }
    lat.t_hi = t_hi;

    std::vector<std::array<double, 2>> rays;
    rays.push_back({1.0, 0.0});
    if (plan.dim == 2) rays.push_back({std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0});

    if (include_origin) {
        lat.xs.push_back({0.0, 0.0});
        lat.rs.push_back(0.0);
    }
    for (double r : logspace(r_lo, r_hi, plan.n_radii - 1))
        for (const auto& d : rays) {
            lat.xs.push_back({r * d[0], r * d[1]});
            lat.rs.push_back(r);
        }
    lat.ts = logspace(t_lo, t_hi, plan.n_t);
    lat.thetas = logspace(1.0, plan.theta_max, plan.n_theta);
    return lat;
}

std::string format_witness_context(double lhs, double rhs) {
    std::ostringstream os;
    os << " (measured " << lhs << " vs bound " << rhs << ")";
    return os.str();
}

HypothesisResult pass_result(std::string note) {
    HypothesisResult res;
    res.verdict = Verdict::pass;
    res.note = std::move(note);
    return res;
}

HypothesisResult fail_result(Witness w, std::string note) {
    HypothesisResult res;
    res.verdict = Verdict::fail;
    res.note = std::move(note) + format_witness_context(w.lhs, w.rhs);
    res.witness = w;
    return res;
}

HypothesisResult skip_result(std::string note) {
    HypothesisResult res;
    res.verdict = Verdict::not_applicable;
    res.note = std::move(note);
    return res;
}

// F0 and F4 share the two-sided growth-bound shape: nonnegativity of the
// density and its t-derivative plus an upper envelope with two exponents.
// Supplied constants are enforced; absent ones are fitted as the smallest
// lattice-valid values and reported.
HypothesisResult growth_bound_check(const NonlinearitySpec& spec, const Lattice& lat,
                                    const SamplePlan& plan, double lo_exp, double hi_exp,
                                    double C, double C_prime, const char* cname,
                                    double& fitted_C, double& fitted_C_prime) {
    double max_ratio_F = 0.0, max_ratio_dF = 0.0;
    for (std::size_t i = 0; i < lat.xs.size(); ++i)
        for (double t : lat.ts) {
            const double F = eval_F(spec, lat.xs[i], t);
            const double dF = eval_dF(spec, lat.xs[i], t);
            if (F < -plan.slack)
                return fail_result({lat.xs[i], t, 1.0, F, 0.0}, "density must be nonnegative");
            if (dF < -plan.slack)
                return fail_result({lat.xs[i], t, 1.0, dF, 0.0},
                                   "t-derivative must be nonnegative");
            const double env = std::pow(t, lo_exp + 2.0) + std::pow(t, hi_exp + 2.0);
            const double denv = std::pow(t, lo_exp + 1.0) + std::pow(t, hi_exp + 1.0);
            if (C > 0.0 && F > C * env + plan.slack)
                return fail_result({lat.xs[i], t, 1.0, F, C * env},
                                   "growth bound on the density violated");
            if (C_prime > 0.0 && dF > C_prime * denv + plan.slack)
                return fail_result({lat.xs[i], t, 1.0, dF, C_prime * denv},
                                   "growth bound on the t-derivative violated");
            max_ratio_F = std::max(max_ratio_F, F / env);
            max_ratio_dF = std::max(max_ratio_dF, dF / denv);
        }
    fitted_C = C > 0.0 ? C : max_ratio_F;
    fitted_C_prime = C_prime > 0.0 ? C_prime : max_ratio_dF;
    std::ostringstream note;
    note << (C > 0.0 ? "verified with supplied " : "fitted smallest lattice-valid ")
         << cname << " = " << fitted_C << ", " << cname << "' = " << fitted_C_prime;
    return pass_result(note.str());
}

HypothesisResult check_F1(const NonlinearitySpec& spec, const Lattice& lat,
                          const SamplePlan& plan) {
    const double window_lhs = plan.dim + 2.0 * plan.s;
    const double window_rhs = 0.5 * plan.dim * spec.alpha + spec.p_F1;
    if (!(window_lhs > window_rhs)) {
        std::ostringstream note;
        note << "exponent window violated: need N + 2s > (N/2)*alpha + p_F1, got "
             << window_lhs << " <= " << window_rhs;
        return fail_result({{0.0, 0.0}, 0.0, 1.0, window_lhs, window_rhs}, note.str());
    }
    double fitted_delta = std::numeric_limits<double>::infinity();
    std::size_t region_points = 0;
    for (std::size_t i = 0; i < lat.xs.size(); ++i) {
        if (lat.rs[i] < spec.R_F1) continue;
        for (double t : lat.ts) {
            if (t >= spec.S_F1) continue;
            ++region_points;
            const double F = eval_F(spec, lat.xs[i], t);
            const double shape = std::pow(lat.rs[i], -spec.p_F1) * std::pow(t, spec.alpha);
            if (spec.delta_F1 > 0.0) {
                const double bound = spec.delta_F1 * shape;
                if (F < bound - 1e-12)
                    return fail_result({lat.xs[i], t, 1.0, F, bound},
                                       "lower bound violated in the tail region");
            } else if (shape > 0.0) {
                fitted_delta = std::min(fitted_delta, F / shape);
            }
        }
    }
    if (region_points == 0)
        return skip_result("no lattice points with |x| >= R_F1 and t < S_F1");
    std::ostringstream note;
    if (spec.delta_F1 > 0.0) {
        note << "lower bound holds on " << region_points
             << " lattice points with delta = " << spec.delta_F1;
        return pass_result(note.str());
    }
    if (!(fitted_delta > 0.0))
        return fail_result({{spec.R_F1, 0.0}, lat.ts.front(), 1.0, fitted_delta, 0.0},
                           "no positive lower-bound coefficient exists on the lattice");
    note << "fitted lattice-valid delta = " << fitted_delta << " over " << region_points
         << " points";
    return pass_result(note.str());
}

// Scaling checks F2 and F5 share one shape: density(x, theta t) must dominate
// theta^power * density(x, t) for every lattice triple.  The worst violation
// becomes the witness.
HypothesisResult scaling_check(const NonlinearitySpec& spec, const Lattice& lat,
                               const SamplePlan& plan, double power, const char* label) {
    bool violated = false;
    Witness worst;
    double worst_gap = 0.0;
    for (std::size_t i = 0; i < lat.xs.size(); ++i)
        for (double t : lat.ts)
            for (double theta : lat.thetas) {
                if (lat.t_limited && theta * t > lat.t_hi) continue;
                const double lhs = eval_F(spec, lat.xs[i], theta * t);
                const double rhs = std::pow(theta, power) * eval_F(spec, lat.xs[i], t);
                const double gap = (rhs - lhs) / std::max(1.0, rhs);
                if (lhs < rhs - plan.slack * std::max(1.0, rhs) && gap > worst_gap) {
                    violated = true;
                    worst_gap = gap;
                    worst = {lat.xs[i], t, theta, lhs, rhs};
                }
            }
    if (violated)
        return fail_result(worst, std::string(label) + " scaling inequality violated");
    std::ostringstream note;
    note << label << " scaling holds on the lattice (exponent " << power << ")";
    return pass_result(note.str());
}

HypothesisResult check_F3(const NonlinearitySpec& spec, const NonlinearitySpec& cmp,
                          const Lattice& lat, const SamplePlan& plan) {
    // sup_t of the comparison ratio per radius, then a decay requirement on
    // the trailing half of the radius ladder.
    std::vector<double> radii;
    std::vector<double> sup_ratio;
    std::vector<double> sup_t;
    for (std::size_t i = 0; i < lat.xs.size(); ++i) {
        double best = 0.0, best_t = lat.ts.front();
        for (double t : lat.ts) {
            const double num = eval_F(spec, lat.xs[i], t) - eval_F(cmp, lat.xs[i], t);
            const double den = t * t + std::pow(t, spec.beta + 2.0);
            const double ratio = std::fabs(num) / den;
            if (ratio > best) {
                best = ratio;
                best_t = t;
            }
        }
        if (!radii.empty() && lat.rs[i] == radii.back()) {
            // same radius, different ray: keep the worse ray
            if (best > sup_ratio.back()) {
                sup_ratio.back() = best;
                sup_t.back() = best_t;
            }
            continue;
        }
        radii.push_back(lat.rs[i]);
        sup_ratio.push_back(best);
        sup_t.push_back(best_t);
    }
    const std::size_t n = sup_ratio.size();
    for (std::size_t i = n / 2; i + 1 < n; ++i)
        if (sup_ratio[i + 1] > sup_ratio[i] + plan.slack * (1.0 + sup_ratio[i]))
            return fail_result({{radii[i + 1], 0.0}, sup_t[i + 1], 1.0, sup_ratio[i + 1],
                                sup_ratio[i]},
                               "comparison ratio fails to decay along the radius ladder");
    if (sup_ratio.back() > plan.f3_tol)
        return fail_result({{radii.back(), 0.0}, sup_t.back(), 1.0, sup_ratio.back(),
                            plan.f3_tol},
                           "comparison ratio still above tolerance at the box edge");
    std::ostringstream note;
    note << "sup ratio decays to " << sup_ratio.back() << " at |x| = " << radii.back();
    return pass_result(note.str());
}

HypothesisResult check_F6(const NonlinearitySpec& spec, const NonlinearitySpec& cmp,
                          const Lattice& lat, const SamplePlan& plan) {
    bool strict_found = false;
    Witness strict_at;
    for (std::size_t i = 0; i < lat.xs.size(); ++i)
        for (double t : lat.ts) {
            const double F = eval_F(spec, lat.xs[i], t);
            const double Finf = eval_F(cmp, lat.xs[i], t);
            if (Finf > F + plan.slack * (1.0 + std::fabs(F)))
                return fail_result({lat.xs[i], t, 1.0, Finf, F},
                                   "comparison exceeds the density");
            if (!strict_found && F - Finf > plan.strict_margin * (1.0 + std::fabs(F))) {
                strict_found = true;
                strict_at = {lat.xs[i], t, 1.0, F, Finf};
            }
        }
    if (!strict_found)
        return fail_result({{0.0, 0.0}, 1.0, 1.0, 0.0, plan.strict_margin},
                           "comparison coincides with the density on the entire lattice; "
                           "no strictness set found");
    std::ostringstream note;
    note << "dominance holds; strict gap " << (strict_at.lhs - strict_at.rhs)
         << " at |x| = " << std::hypot(strict_at.x[0], strict_at.x[1])
         << ", t = " << strict_at.t;
    return pass_result(note.str());
}

}  // namespace

std::string hypothesis_name(Hypothesis h) {
    static const char* names[] = {"F0", "F1", "F2", "F3", "F4", "F5", "F6"};
    return names[static_cast<std::size_t>(h)];
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::not_applicable: return "not_applicable";
    }
    return "not_applicable";
}

SamplePlan default_sample_plan(const Grid& grid) {
    SamplePlan plan;
    plan.dim = grid.dim();
    plan.s = grid.s();
    plan.box_radius = grid.box_length() / 2.0;
    return plan;
}

bool HypothesisReport::all_pass() const {
    return std::none_of(results.begin(), results.end(), [](const HypothesisResult& r) {
        return r.verdict == Verdict::fail;
    });
}

nlohmann::json HypothesisReport::to_json() const {
    nlohmann::json hyps;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const HypothesisResult& r = results[i];
        nlohmann::json entry{{"verdict", verdict_name(r.verdict)}, {"note", r.note}};
        if (r.witness) {
            entry["witness"] = {{"x", {r.witness->x[0], r.witness->x[1]}},
                                {"t", r.witness->t},
                                {"theta", r.witness->theta},
                                {"measured", r.witness->lhs},
                                {"bound", r.witness->rhs}};
        }
        hyps[hypothesis_name(static_cast<Hypothesis>(i))] = entry;
    }
    return nlohmann::json{
        {"hypotheses", hyps},
        {"fitted", {{"A", fitted_A},
                    {"A_prime", fitted_A_prime},
                    {"B", fitted_B},
                    {"B_prime", fitted_B_prime}}},
        {"scanned", {{"dim", plan.dim},
                     {"s", plan.s},
                     {"radius", {plan.r_min, plan.box_radius}},
                     {"t", {plan.t_min, plan.t_max}},
                     {"theta", {1.0, plan.theta_max}},
                     {"n_radii", plan.n_radii},
                     {"n_t", plan.n_t},
                     {"n_theta", plan.n_theta},
                     {"comparison_checks", plan.comparison_checks}}},
    };
}

HypothesisReport check_hypotheses(const NonlinearitySpec& spec, const SamplePlan& plan_in) {
    HypothesisReport report;
    report.plan = plan_in;
    const Lattice lat = build_lattice(spec, report.plan);
    const SamplePlan& plan = report.plan;

    auto slot = [&report](Hypothesis h) -> HypothesisResult& {
        return report.results[static_cast<std::size_t>(h)];
    };

    slot(Hypothesis::F0) =
        growth_bound_check(spec, lat, plan, 0.0, spec.ell, spec.A, spec.A_prime, "A",
                           report.fitted_A, report.fitted_A_prime);
    slot(Hypothesis::F1) = check_F1(spec, lat, plan);
    slot(Hypothesis::F2) = scaling_check(spec, lat, plan, 2.0, "quadratic");

    if (!plan.comparison_checks) {
        for (Hypothesis h : {Hypothesis::F3, Hypothesis::F4, Hypothesis::F5, Hypothesis::F6})
            slot(h) = skip_result("comparison checks disabled by the sample plan");
        return report;
    }
    // comparison_spec raises MissingComparison when no problem at infinity is
    // available, per the contract for requested F3/F6.
    const NonlinearitySpec cmp = comparison_spec(spec);

    slot(Hypothesis::F3) = check_F3(spec, cmp, lat, plan);

    {
        HypothesisResult f4;
        if (!(spec.gamma > 0.0 && spec.gamma < spec.ell)) {
            std::ostringstream note;
            note << "exponent window violated: need 0 < gamma < ell, got gamma = "
                 << spec.gamma << ", ell = " << spec.ell;
            f4 = fail_result({{0.0, 0.0}, 0.0, 1.0, spec.gamma, spec.ell}, note.str());
        } else {
            f4 = growth_bound_check(cmp, lat, plan, spec.gamma, spec.ell, spec.B,
                                    spec.B_prime, "B", report.fitted_B,
                                    report.fitted_B_prime);
        }
        slot(Hypothesis::F4) = f4;
    }

    {
        const double window = 4.0 * plan.s / plan.dim;
        if (!(cmp.sigma > 0.0 && cmp.sigma < window)) {
            std::ostringstream note;
            note << "exponent window violated: need 0 < sigma < 4s/N, got sigma = "
                 << cmp.sigma << ", 4s/N = " << window;
            slot(Hypothesis::F5) =
                fail_result({{0.0, 0.0}, 0.0, 1.0, cmp.sigma, window}, note.str());
        } else {
            slot(Hypothesis::F5) = scaling_check(cmp, lat, plan, cmp.sigma + 2.0, "comparison");
        }
    }

    slot(Hypothesis::F6) = check_F6(spec, cmp, lat, plan);
    return report;
}

}  // namespace fracmin
