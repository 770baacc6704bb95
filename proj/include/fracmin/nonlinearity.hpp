#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracmin/errors.hpp"
#include "fracmin/grid.hpp"

namespace fracmin {

// Built-in nonlinearity families.  F(x,t) is the density of the potential term
// of the energy; every family also knows (or can produce) its periodic
// comparison F_inf used by the hypothesis checks and the strictness tests.
enum class Family {
    pure_power,          // F = |t|^{ell+2}/(ell+2), x-independent
    weighted_power,      // F = delta (1+|x|^2)^{-p/2} |t|^alpha, decays in x
    periodic_power,      // F_inf = a(x) |t|^{sigma+2}/(sigma+2), a periodic
    perturbed_periodic,  // F = F_inf + g(x) t^2 with a localized envelope g
    user_tabulated,      // bilinear interpolation of a sampled table
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Sample table for user_tabulated specs: values[i * ts.size() + j] = F at
// radius radii[i] and argument ts[j].  Queries outside the rectangle
// [radii.front(), radii.back()] x [ts.front(), ts.back()] raise
// TabulationRange.
struct Tabulation {
    std::vector<double> radii;  // strictly ascending, radii.front() >= 0
    std::vector<double> ts;     // strictly ascending
    std::vector<double> values; // row-major, size radii.size() * ts.size()
};

struct NonlinearitySpec {
    Family family = Family::pure_power;

    // exponents
    double ell = 1.0;    // growth exponent in the quadratic-to-superquadratic bound
    double alpha = 3.0;  // lower-bound exponent (weighted_power power of |t|)
    double beta = 1.0;   // exponent in the F3 comparison ratio
    double gamma = 0.5;  // low-order exponent in the F4 bound
    double sigma = 1.0;  // homogeneity gain of the periodic comparison

    // bound constants; zero means "not supplied, fit the smallest valid value"
    double A = 0.0, A_prime = 0.0;
    double B = 0.0, B_prime = 0.0;

    // lower-bound data: F > delta_F1 |x|^{-p_F1} |t|^alpha for |x| >= R_F1,
    // |t| < S_F1
    double delta_F1 = 0.0;
    double p_F1 = 0.0;
    double R_F1 = 1.0;
    double S_F1 = 1.0;

    // periodic coefficient a(x) = coeff_base + coeff_amp * prod_i cos^2(pi x_i)
    // (period 1 along every axis)
    double coeff_base = 1.0;
    double coeff_amp = 0.0;

    // perturbation envelope g(x) = env_amp * exp(-|x|^2 / env_width^2)
    double env_amp = 0.0;
    double env_width = 1.0;

    std::shared_ptr<const Tabulation> table;              // user_tabulated only
    std::shared_ptr<const NonlinearitySpec> comparison;   // explicit F_inf
};

// Factories with coherent defaults (lower-bound constants, comparison wiring).
NonlinearitySpec pure_power_spec(double ell);
NonlinearitySpec weighted_power_spec(double delta, double p, double alpha,
                                     double R = 1.0, double S = 1.0);
NonlinearitySpec periodic_power_spec(double sigma, double base = 1.0,
                                     double amp = 0.5);
NonlinearitySpec perturbed_periodic_spec(double sigma, double base, double amp,
                                         double env_amp, double env_width);
NonlinearitySpec user_tabulated_spec(Tabulation table);
NonlinearitySpec zero_nonlinearity();  // F identically zero

// Pointwise evaluation.  x uses the Field convention: unused coordinates are
// zero, so the same code serves one and two dimensions.
double eval_F(const NonlinearitySpec& spec, const Point& x, double t);
double eval_dF(const NonlinearitySpec& spec, const Point& x, double t);

// Cutoff splitting of dF with the piecewise-linear window
// phi(t) = 1 for |t| <= 1, 2 - |t| for 1 <= |t| <= 2, 0 for |t| >= 2:
// returns (phi * dF, (1 - phi) * dF); the parts sum back to eval_dF exactly.
std::pair<double, double> cutoff_split(const NonlinearitySpec& spec,
                                       const Point& x, double t);

// Comparison resolution.  A spec has a usable comparison when one was given
// explicitly, when the family carries its own periodic part, or when F does
// not depend on x at all (then F is its own problem at infinity).
bool has_comparison(const NonlinearitySpec& spec);
NonlinearitySpec comparison_spec(const NonlinearitySpec& spec);  // MissingComparison

// Validates the exponent windows that tie a spec to a grid of order s in
// dimension N; raises ConfigError naming the violated rule.
void bind_check(const NonlinearitySpec& spec, const Grid& grid);

// --- hypothesis verification -------------------------------------------------

enum class Hypothesis { F0, F1, F2, F3, F4, F5, F6 };
std::string hypothesis_name(Hypothesis h);

enum class Verdict { pass, fail, not_applicable };
std::string verdict_name(Verdict v);

struct Witness {
    Point x{0.0, 0.0};
    double t = 0.0;
    double theta = 1.0;
    double lhs = 0.0;  // measured value
    double rhs = 0.0;  // bound it violated
};

struct HypothesisResult {
    Verdict verdict = Verdict::not_applicable;
    std::optional<Witness> witness;  // populated on fail
    std::string note;                // fitted constants, window checks, reasons
};

// Finite sample lattice over which the hypotheses are checked.  Radii are
// log-spaced up to box_radius (plus r = 0), t is log-spaced and positive,
// theta is log-spaced in [1, theta_max].  A pass is a lattice pass.
struct SamplePlan {
    int dim = 1;
    double s = 0.5;
    double box_radius = 20.0;
    int n_radii = 25;
    double r_min = 1e-3;
    int n_t = 37;
    double t_min = 1e-6;
    double t_max = 1e3;
    int n_theta = 13;
    double theta_max = 100.0;
    double f3_tol = 1e-6;        // final sup-ratio must fall below this
    double slack = 1e-12;        // roundoff slack for non-strict comparisons
    double strict_margin = 1e-10;  // relative gap certifying F6 strictness
    bool comparison_checks = true;  // false: report F3-F6 as not_applicable
};

SamplePlan default_sample_plan(const Grid& grid);

struct HypothesisReport {
    std::array<HypothesisResult, 7> results;  // indexed by Hypothesis
    double fitted_A = 0.0, fitted_A_prime = 0.0;
    double fitted_B = 0.0, fitted_B_prime = 0.0;
    SamplePlan plan;

    const HypothesisResult& operator[](Hypothesis h) const {
        return results[static_cast<std::size_t>(h)];
    }
    bool all_pass() const;  // no fail verdicts (not_applicable is acceptable)
    nlohmann::json to_json() const;
};

HypothesisReport check_hypotheses(const NonlinearitySpec& spec,
                                  const SamplePlan& plan);

// JSON round-trip of specs (family tag + parameter map).
nlohmann::json spec_to_json(const NonlinearitySpec& spec);
NonlinearitySpec spec_from_json(const nlohmann::json& j);

}  // namespace fracmin
