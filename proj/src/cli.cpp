#include "fracmin/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracmin/analysis.hpp"
#include "fracmin/ccdiag.hpp"
#include "fracmin/config.hpp"
#include "fracmin/errors.hpp"
#include "fracmin/field_io.hpp"
#include "fracmin/gagliardo.hpp"
#include "fracmin/manifest.hpp"

namespace fracmin {

namespace {

// The single writer of a run directory: every emission is recorded in the
// manifest with its content hash, so the manifest references every file.
class RunWriter {
public:
    RunWriter(const std::string& command, const Config& cfg, std::string dir)
        : dir_(std::move(dir)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw ConfigError("cannot create output directory '" + dir_ +
                              "': " + ec.message());
        manifest_.command = command;
        manifest_.config_hash = fnv1a64_hex(cfg.canonical.dump());
        manifest_.seed = cfg.flow.seed;
        manifest_.grid = cfg.canonical.at("grid");
        manifest_.spec = cfg.canonical.at("nonlinearity");
        manifest_.started_at = utc_timestamp();
        write_text("config.json", cfg.canonical.dump(2) + "\n");
    }

    void write_text(const std::string& name, const std::string& content) {
        const std::string path = dir_ + "/" + name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write output '" + path + "'");
        out << content;
        out.close();
        record(name);
    }

    void write_json(const std::string& name, const nlohmann::json& j) {
        write_text(name, j.dump(2) + "\n");
    }

    void write_field(const std::string& name, const Field& u) {
        write_field_binary(u, dir_ + "/" + name);
        record(name);
    }

    void finish() {
        manifest_.finished_at = utc_timestamp();
        write_manifest(manifest_, dir_);
    }

private:
    void record(const std::string& name) {
        manifest_.outputs.push_back(name);
        manifest_.output_hashes[name] = hash_file(dir_ + "/" + name);
    }

    std::string dir_;
    RunManifest manifest_;
};

void run_check_hypotheses(const Config& cfg, RunWriter& out) {
    const HypothesisReport report =
        check_hypotheses(cfg.spec, default_sample_plan(cfg.grid));
    out.write_json("report.json", report.to_json());
}

void run_minimize(const Config& cfg, RunWriter& out) {
    const MinimizerResult result = minimize(cfg.spec, cfg.grid, cfg.flow);
    const Certification cert = certify(result, cfg.spec);
    out.write_json("result.json", nlohmann::json{{"result", result.to_json()},
                                                 {"certification", cert.to_json()}});
    out.write_text("trace.csv", result.trace_csv());
    out.write_field("u_star.bin", result.u_star);
}

void run_scan_mass(const Config& cfg, RunWriter& out) {
    const ScanResult scan =
        mass_scan(cfg.spec, cfg.grid, cfg.c_values, cfg.flow, cfg.with_comparison);
    out.write_json("scan.json", scan.to_json());
    out.write_text("scan.csv", scan.to_csv());
}

void run_dilation_test(const Config& cfg, RunWriter& out) {
    const DilationReport report =
        dilation_test(cfg.spec, profile_by_name(cfg.profile), cfg.grid, cfg.flow.c2,
                      cfg.lambda_ladder);
    out.write_json("dilation.json", report.to_json());
    out.write_text("dilation.csv", report.to_csv());
}

void run_subadd_test(const Config& cfg, RunWriter& out) {
    const SplitMode mode = cfg.mode == "cross" ? SplitMode::cross : SplitMode::plain;
    const ScanResult scan = mass_scan(cfg.spec, cfg.grid, cfg.c_values, cfg.flow,
                                      mode == SplitMode::cross);
    const SubadditivityReport report = subadditivity_check(scan, mode, cfg.tol);
    out.write_json("subadd.json", report.to_json());
    out.write_text("scan.csv", scan.to_csv());
}

void run_theta_test(const Config& cfg, RunWriter& out) {
    const ThetaReport report = theta_scaling_check(cfg.spec, cfg.grid, cfg.c,
                                                   cfg.theta_ladder, cfg.flow, cfg.tol);
    out.write_json("theta.json", report.to_json());
}

SyntheticKind kind_from_name(const std::string& name) {
    if (name == "spreading") return SyntheticKind::spreading;
    if (name == "translating") return SyntheticKind::translating;
    return SyntheticKind::separating;
}

void run_cc_classify(const Config& cfg, RunWriter& out) {
    FieldSequence seq = [&] {
        if (!cfg.field_paths.empty()) {
            std::vector<Field> fields;
            for (const std::string& path : cfg.field_paths)
                fields.push_back(read_field_binary(path));
            return field_sequence(std::move(fields));
        }
        return synthetic_sequence(kind_from_name(cfg.cc_kind), cfg.grid, cfg.cc_count,
                                  cfg.flow.c2, cfg.cc_seed);
    }();
    const CCClassification cls = classify(seq, cfg.eps_ladder, cfg.r_ladder);
    out.write_json("classification.json", cls.to_json());
    out.write_text("q_table.csv", cls.q_table_csv());
}

void run_validate_kinetic(const Config& cfg, RunWriter& out) {
    const Field u = sample_profile(profile_by_name(cfg.profile), cfg.grid);
    const double spectral = frac_kinetic(u);
    const double quadrature = gagliardo_kinetic_1d(u);
    const double rel =
        spectral > 0.0 ? std::fabs(spectral - quadrature) / spectral : 0.0;
    out.write_json("kinetic.json",
                   nlohmann::json{{"profile", cfg.profile},
                                  {"frac_kinetic", spectral},
                                  {"gagliardo_kinetic", quadrature},
                                  {"rel_error", rel},
                                  {"gagliardo_constant",
                                   gagliardo_constant(cfg.grid.dim(), cfg.grid.s())}});
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
    CLI::App app{"constrained minimization of the fractional-gradient energy "
                 "J(u) = (1/2)|grad_s u|^2 - int F(x,u) on the mass sphere"};
    app.require_subcommand(1);

    using Handler = std::function<void(const Config&, RunWriter&)>;
    struct Command {
        const char* name;
        const char* help;
        Handler run;
    };
    const std::vector<Command> commands{
        {"check-hypotheses", "verify the structural hypotheses of a nonlinearity",
         run_check_hypotheses},
        {"minimize", "run the projected gradient flow to a constrained minimizer",
         run_minimize},
        {"scan-mass", "minimize across a ladder of masses", run_scan_mass},
        {"dilation-test", "probe energy negativity along a dilation ladder",
         run_dilation_test},
        {"subadd-test", "check subadditivity of the minimal energy across splittings",
         run_subadd_test},
        {"theta-test", "check the quadratic mass-scaling bound", run_theta_test},
        {"cc-classify", "classify a field sequence via the concentration trichotomy",
         run_cc_classify},
        {"validate-kinetic", "cross-validate the spectral kinetic energy by quadrature",
         run_validate_kinetic},
    };

    std::string config_path;
    std::string out_dir;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", config_path, "JSON run configuration")
            ->required();
        sub->add_option("--out", out_dir,
                        "output directory (default: $FRACMIN_OUT_ROOT or ./runs, "
                        "plus the command name)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        const Config cfg = load_config(config_path);
        std::string dir = out_dir;
        if (dir.empty()) {
            const char* root = std::getenv("FRACMIN_OUT_ROOT");
            dir = (root != nullptr ? std::string(root) : "runs") + "/" + sub->get_name();
        }
        RunWriter writer(sub->get_name(), cfg, dir);
        for (const Command& c : commands)
            if (sub->get_name() == c.name) c.run(cfg, writer);
        writer.finish();
        return 0;
    } catch (const Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "UnexpectedError: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fracmin
