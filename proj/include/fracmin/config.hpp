#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracmin/flow.hpp"
#include "fracmin/nonlinearity.hpp"
#include "fracmin/profiles.hpp"

namespace fracmin {

// Everything a run needs, loaded from one flat JSON file.  Unknown keys are
// rejected, missing keys take the documented defaults (L = 40, M = 512,
// s = 0.5, el_tol = 1e-6, seed = 0), and every module invariant is enforced
// at load time (ConfigError naming the violated rule, with the field path
// for schema problems).
struct Config {
    Grid grid;
    NonlinearitySpec spec;
    FlowConfig flow;

    // command-specific sections, all defaulted
    std::vector<double> c_values;          // scan-mass / subadd-test masses
    bool with_comparison = false;          // also scan the problem at infinity
    std::string mode = "plain";            // subadd-test: plain | cross
    double tol = 1e-6;                     // subadd / theta tolerance
    double c = 1.0;                        // theta-test base mass
    std::vector<double> theta_ladder;      // theta-test factors
    std::string profile = "gaussian";      // dilation-test / validate-kinetic
    std::vector<double> lambda_ladder;     // dilation-test rungs
    std::string cc_kind = "translating";   // cc-classify synthetic family
    int cc_count = 8;
    std::uint64_t cc_seed = 0;
    std::vector<double> eps_ladder;        // cc-classify tolerances
    std::vector<double> r_ladder;          // cc-classify radii (empty = default)
    std::vector<std::string> field_paths;  // cc-classify: classify saved fields

    nlohmann::json canonical;  // effective values after defaulting; hash input

    Config();  // the pure defaults
};

Config load_config(const std::string& path);
Config config_from_json(const nlohmann::json& j);

// Named profile lookup: gaussian | sech | sech2 | rational_bump.
Profile profile_by_name(const std::string& name);

}  // namespace fracmin
