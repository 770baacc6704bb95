#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fracmin/flow.hpp"
#include "fracmin/profiles.hpp"

namespace fracmin {

// --- dilation negativity -----------------------------------------------------

struct DilationRow {
    double lambda = 0.0;
    double total = 0.0;      // J(phi_lambda) at mass c2
    double kinetic = 0.0;    // (1/2) |grad_s phi_lambda|^2
    double potential = 0.0;
};

struct DilationReport {
    double c2 = 0.0;
    std::vector<DilationRow> rows;
    bool negative_witness = false;  // some rung has J < 0
    double best_lambda = 0.0;       // rung minimizing J
    double best_total = 0.0;

    nlohmann::json to_json() const;
    std::string to_csv() const;  // lambda, J, kinetic, potential
};

// Evaluates J along the mass-preserving dilation ladder of a nonnegative,
// radially nonincreasing profile normalized to mass c2.  ProfileOverflow
// propagates from dilate for rungs that do not fit the box; choose the ladder
// accordingly.
DilationReport dilation_test(const NonlinearitySpec& spec, const Profile& profile,
                             const Grid& grid, double c2,
                             const std::vector<double>& lambda_ladder);

// --- mass scans ----------------------------------------------------------------

struct ScanResult {
    std::vector<double> c_values;            // masses c (constraint is c^2)
    std::vector<double> I_values;            // minimized J per c
    std::vector<double> I_inf_values;        // minimized comparison J, when requested
    std::vector<MinimizerResult> runs;       // aligned with c_values
    std::vector<MinimizerResult> runs_inf;   // aligned, when requested
    double max_adjacent_jump = 0.0;          // continuity diagnostic on I
    double max_adjacent_dc = 0.0;            // the mass gap where it occurred

    nlohmann::json to_json() const;
    std::string to_csv() const;  // c, I, I_inf, converged, converged_inf
};

// Minimizes per mass in ascending order.  Each point after the first also
// tries a candidate warm-started from the mass-rescaled previous minimizer,
// so the scan inherits the discrete scaling chain I_{c'} <= (c'/c)^2 I_c
// structurally whenever the nonlinearity is superquadratic.  with_comparison
// additionally scans the problem at infinity (MissingComparison when the spec
// has none).
ScanResult mass_scan(const NonlinearitySpec& spec, const Grid& grid,
                     const std::vector<double>& c_values, const FlowConfig& base,
                     bool with_comparison = false);

// --- subadditivity -------------------------------------------------------------

enum class SplitMode { plain, cross };

struct SubadditivityEntry {
    double c = 0.0, a = 0.0, b = 0.0;  // b = sqrt(c^2 - a^2)
    double I_c = 0.0, I_a = 0.0, I_b = 0.0;
    bool interpolated_b = false;
    double margin = 0.0;  // I_a + I_b - I_c  (>= -tol passes the weak form)
    // cross mode: strict comparisons against the problem at infinity
    double I_inf_b = 0.0, I_inf_c = 0.0;
    double cross_split_margin = 0.0;   // I_a + I_inf_b - I_c
    double cross_strict_margin = 0.0;  // I_inf_c - I_c
};

struct SubadditivityReport {
    SplitMode mode = SplitMode::plain;
    double tol = 0.0;
    double strict_threshold = 0.0;  // 2x the worst restart spread of involved runs
    std::vector<SubadditivityEntry> entries;
    double worst_margin = 0.0;  // minimum of the governing margins
    bool pass = false;

    nlohmann::json to_json() const;
};

// For each (c, a) pair available in the scan with 0 < a < c: checks
// I_c <= I_a + I_b + tol (plain) or the strict comparisons with margin above
// the restart-spread threshold (cross).  I_b is linearly interpolated in c
// when b falls off the scan grid (flagged); InsufficientScan when it cannot
// be obtained or cross data is missing.
SubadditivityReport subadditivity_check(const ScanResult& scan, SplitMode mode,
                                        double tol = 1e-6, bool interpolate = true);

// --- theta scaling --------------------------------------------------------------

struct ThetaRow {
    double theta = 0.0;
    double I_theta = 0.0;          // minimized J at mass theta * c
    double quadratic_bound = 0.0;  // theta^2 * I_c
    double margin = 0.0;           // quadratic_bound - I_theta (>= -tol passes)
    double vector_lhs = 0.0;       // J(theta * u_c)  (direct evaluation)
    double vector_rhs = 0.0;       // theta^{sigma+2} * J(u_c)
};

struct ThetaReport {
    double c = 0.0;
    double I_c = 0.0;
    std::vector<ThetaRow> rows;
    double tol = 0.0;
    bool pass = false;

    nlohmann::json to_json() const;
};

// Verifies I_{theta c} <= theta^2 I_c + tol along the ladder (each point by
// minimization, warm-started from the scaled base minimizer) plus the
// direct test-vector route J(theta u) <= theta^{sigma+2} J(u).  Requires
// I_c < 0 (PrerequisiteFailed otherwise); ladder must lie in [1, 4].
ThetaReport theta_scaling_check(const NonlinearitySpec& spec, const Grid& grid,
                                double c, const std::vector<double>& theta_ladder,
                                const FlowConfig& base, double tol = 1e-6);

// --- minimizer comparison --------------------------------------------------------

// Translation maximizing the overlap <u(. + shift), v>, located by FFT
// cross-correlation on the grid and refined by a per-axis parabolic fit.
Point best_overlap_shift(const Field& u, const Field& v);

// Relative L^2 distance |u(. + shift) - v| / |v| after optimal alignment;
// the metric for comparing minimizers modulo the translation degeneracy.
double aligned_l2_error(const Field& u, const Field& v);

}  // namespace fracmin
