#include "fracmin/config.hpp"

#include <fstream>
#include <set>

#include "fracmin/errors.hpp"
#include "fracmin/field_io.hpp"

namespace fracmin {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        // grid
        "dim", "L", "M", "s",
        // nonlinearity
        "family", "ell", "delta", "p", "alpha", "sigma", "base", "amp", "env_amp",
        "env_width", "R_F1", "S_F1", "table", "comparison",
        // flow
        "c2", "step_init", "backtrack_factor", "max_iters", "el_tol", "restarts",
        "seed", "init", "energy_floor", "warm_field_path",
        // command sections
        "c_values", "with_comparison", "mode", "tol", "c", "theta_ladder", "profile",
        "lambda_ladder", "cc_kind", "cc_count", "cc_seed", "eps_ladder", "r_ladder",
        "field_paths"};
    return keys;
}

[[noreturn]] void bad_field(const std::string& path, const std::string& expected) {
    throw ConfigError("config field '" + path + "': expected " + expected);
}

double get_num(const nlohmann::json& j, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) bad_field(key, "a number");
    return j.at(key).get<double>();
}

std::int64_t get_int(const nlohmann::json& j, const char* key, std::int64_t dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number_integer()) bad_field(key, "an integer");
    return j.at(key).get<std::int64_t>();
}

bool get_bool(const nlohmann::json& j, const char* key, bool dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_boolean()) bad_field(key, "a boolean");
    return j.at(key).get<bool>();
}

std::string get_str(const nlohmann::json& j, const char* key, const std::string& dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_string()) bad_field(key, "a string");
    return j.at(key).get<std::string>();
}

std::vector<double> get_vec(const nlohmann::json& j, const char* key,
                            std::vector<double> dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_array()) bad_field(key, "an array of numbers");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) bad_field(key, "an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

NonlinearitySpec spec_from_config(const nlohmann::json& j) {
    const std::string family = get_str(j, "family", "zero");
    NonlinearitySpec spec;
    if (family == "zero") {
        spec = zero_nonlinearity();
    } else if (family == "pure_power") {
        spec = pure_power_spec(get_num(j, "ell", 1.0));
    } else if (family == "weighted_power") {
        spec = weighted_power_spec(get_num(j, "delta", 0.5), get_num(j, "p", 0.0),
                                   get_num(j, "alpha", 2.5), get_num(j, "R_F1", 1.0),
                                   get_num(j, "S_F1", 1.0));
    } else if (family == "periodic_power") {
        spec = periodic_power_spec(get_num(j, "sigma", 1.0), get_num(j, "base", 1.0),
                                   get_num(j, "amp", 0.5));
    } else if (family == "perturbed_periodic") {
        spec = perturbed_periodic_spec(get_num(j, "sigma", 1.0), get_num(j, "base", 1.0),
                                       get_num(j, "amp", 0.5), get_num(j, "env_amp", 0.5),
                                       get_num(j, "env_width", 1.0));
    } else if (family == "user_tabulated") {
        if (!j.contains("table") || !j.at("table").is_object())
            bad_field("table", "a tabulation object");
        spec = spec_from_json(
            nlohmann::json{{"family", "user_tabulated"}, {"table", j.at("table")}});
    } else {
        throw ConfigError("config field 'family': unknown family '" + family +
                          "' (expected zero|pure_power|weighted_power|periodic_power|"
                          "perturbed_periodic|user_tabulated)");
    }
    if (j.contains("comparison")) {
        if (!j.at("comparison").is_object()) bad_field("comparison", "a nonlinearity object");
        spec.comparison =
            std::make_shared<NonlinearitySpec>(spec_from_json(j.at("comparison")));
    }
    return spec;
}

}  // namespace

Config::Config() : grid(1, 40.0, 512, 0.5) {}

Profile profile_by_name(const std::string& name) {
    if (name == "gaussian") return gaussian_profile();
    if (name == "sech") return sech_profile();
    if (name == "sech2") return sech2_profile();
    if (name == "rational_bump") return rational_bump_profile();
    throw ConfigError("config field 'profile': unknown profile '" + name +
                      "' (expected gaussian|sech|sech2|rational_bump)");
}

Config config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    for (const auto& item : j.items())
        if (!known_keys().count(item.key()))
            throw ConfigError("config key '" + item.key() + "' is not recognized");

    Config cfg;
    cfg.grid = Grid(static_cast<int>(get_int(j, "dim", 1)), get_num(j, "L", 40.0),
                    static_cast<int>(get_int(j, "M", 512)), get_num(j, "s", 0.5));
    cfg.spec = spec_from_config(j);

    cfg.flow.c2 = get_num(j, "c2", 1.0);
    cfg.flow.step_init = get_num(j, "step_init", 0.1);
    cfg.flow.backtrack_factor = get_num(j, "backtrack_factor", 0.5);
    cfg.flow.max_iters = static_cast<int>(get_int(j, "max_iters", 50000));
    cfg.flow.el_tol = get_num(j, "el_tol", 1e-6);
    cfg.flow.restarts = static_cast<int>(get_int(j, "restarts", 1));
    cfg.flow.seed = static_cast<std::uint64_t>(get_int(j, "seed", 0));
    cfg.flow.init = init_strategy_from_name(
        get_str(j, "init", init_strategy_name(InitStrategy::gaussian_dilation_scan)));
    cfg.flow.energy_floor = get_num(j, "energy_floor", -1e12);
    if (j.contains("warm_field_path"))
        cfg.flow.warm_field = read_field_binary(get_str(j, "warm_field_path", ""));

    cfg.c_values = get_vec(j, "c_values", {0.5, 1.0, 1.5, 2.0});
    cfg.with_comparison = get_bool(j, "with_comparison", false);
    cfg.mode = get_str(j, "mode", "plain");
    if (cfg.mode != "plain" && cfg.mode != "cross")
        throw ConfigError("config field 'mode': expected plain|cross");
    cfg.tol = get_num(j, "tol", 1e-6);
    cfg.c = get_num(j, "c", 1.0);
    cfg.theta_ladder = get_vec(j, "theta_ladder", {1.5, 2.0});
    cfg.profile = get_str(j, "profile", "gaussian");
    profile_by_name(cfg.profile);  // existence check at load
    cfg.lambda_ladder = get_vec(j, "lambda_ladder", {1.0, 0.5, 0.25});
    cfg.cc_kind = get_str(j, "cc_kind", "translating");
    if (cfg.cc_kind != "spreading" && cfg.cc_kind != "translating" &&
        cfg.cc_kind != "separating")
        throw ConfigError("config field 'cc_kind': expected spreading|translating|separating");
    cfg.cc_count = static_cast<int>(get_int(j, "cc_count", 8));
    cfg.cc_seed = static_cast<std::uint64_t>(get_int(j, "cc_seed", 0));
    cfg.eps_ladder = get_vec(j, "eps_ladder", {0.2, 0.1, 0.05, 0.01});
    cfg.r_ladder = get_vec(j, "r_ladder", {});
    if (j.contains("field_paths")) {
        if (!j.at("field_paths").is_array()) bad_field("field_paths", "an array of paths");
        for (const auto& p : j.at("field_paths")) {
            if (!p.is_string()) bad_field("field_paths", "an array of paths");
            cfg.field_paths.push_back(p.get<std::string>());
        }
    }

    // Module invariants are load-time errors, not run-time surprises.
    bind_check(cfg.spec, cfg.grid);
    validate(cfg.flow, cfg.grid);

    cfg.canonical = nlohmann::json{
        {"grid",
         {{"dim", cfg.grid.dim()},
          {"L", cfg.grid.box_length()},
          {"M", cfg.grid.points_per_dim()},
          {"s", cfg.grid.s()}}},
        {"nonlinearity", spec_to_json(cfg.spec)},
        {"flow",
         {{"c2", cfg.flow.c2},
          {"step_init", cfg.flow.step_init},
          {"backtrack_factor", cfg.flow.backtrack_factor},
          {"max_iters", cfg.flow.max_iters},
          {"el_tol", cfg.flow.el_tol},
          {"restarts", cfg.flow.restarts},
          {"seed", cfg.flow.seed},
          {"init", init_strategy_name(cfg.flow.init)},
          {"energy_floor", cfg.flow.energy_floor}}},
        {"run",
         {{"c_values", cfg.c_values},
          {"with_comparison", cfg.with_comparison},
          {"mode", cfg.mode},
          {"tol", cfg.tol},
          {"c", cfg.c},
          {"theta_ladder", cfg.theta_ladder},
          {"profile", cfg.profile},
          {"lambda_ladder", cfg.lambda_ladder},
          {"cc_kind", cfg.cc_kind},
          {"cc_count", cfg.cc_count},
          {"cc_seed", cfg.cc_seed},
          {"eps_ladder", cfg.eps_ladder},
          {"r_ladder", cfg.r_ladder},
          {"field_paths", cfg.field_paths}}}};
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file '" + path + "' cannot be opened");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

}  // namespace fracmin
