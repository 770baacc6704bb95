#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracmin/energy.hpp"

namespace fracmin {

// How the first iterate of each restart is produced.
enum class InitStrategy {
    gaussian_dilation_scan,  // lowest-J rung of a Gaussian dilation ladder
    random_bump,             // smooth positive bumps at seeded random positions
    warm_start,              // caller-supplied field (required in the config)
};

std::string init_strategy_name(InitStrategy s);
InitStrategy init_strategy_from_name(const std::string& name);

struct FlowConfig {
    double c2 = 1.0;                 // target mass (the sphere radius squared)
    double step_init = 0.1;
    double backtrack_factor = 0.5;   // step shrink on rejected trial steps
    int max_iters = 50000;
    double el_tol = 1e-6;            // stop when el_residual falls below this
    int restarts = 1;
    std::uint64_t seed = 0;
    InitStrategy init = InitStrategy::gaussian_dilation_scan;
    std::optional<Field> warm_field; // consumed by the warm_start strategy
    double energy_floor = -1e12;     // J below this raises DivergentEnergy
};

// Raises ConfigError naming the violated rule.
void validate(const FlowConfig& config, const Grid& grid);

struct MinimizerResult {
    Field u_star;
    EnergyReport report;
    int iterations = 0;              // gradient steps taken by the best restart
    std::vector<double> energy_trace;    // J at the initial and each accepted iterate
    std::vector<double> hs_trace;        // |u|_{H^s} along the same states
    std::vector<double> residual_trace;  // el_residual along the same states
    bool converged = false;
    double hs_sup = 0.0;             // sup over all iterates of |u|_{H^s}
    int restart_index = 0;           // which restart won
    std::vector<double> restart_energies;  // final J per restart, index order
    double target_c2 = 0.0;

    nlohmann::json to_json() const;  // scalars and traces; the field is saved separately
    std::string trace_csv() const;   // iteration, J, residual, |u|_{H^s}
};

// Projected gradient descent u_{k+1} = normalize_mass(u_k - tau grad J(u_k), c2)
// with strict-decrease backtracking, run once per restart; restarts execute in
// parallel and are merged deterministically (lowest J, ties by lowest residual,
// then lowest restart index).  Non-convergence is reported through the flag,
// not an exception; DivergentEnergy signals J falling through the floor.
MinimizerResult minimize(const NonlinearitySpec& spec, const Grid& grid,
                         const FlowConfig& config);

// Independent post-hoc certification: re-evaluates the first-order data from
// u_star rather than trusting the stored report.
struct Certification {
    bool monotone_energy = false;
    bool converged = false;
    double el_residual = 0.0;
    double lambda = 0.0;
    double hs_sup = 0.0;
    double mass_error = 0.0;  // |mass(u_star) - c2| / c2

    nlohmann::json to_json() const;
};

Certification certify(const MinimizerResult& result, const NonlinearitySpec& spec);

}  // namespace fracmin
