// Command-line front end: reads CSV samples, runs the KL-based normality
// test or bootstrap calibration, and executes Monte Carlo experiment specs.
//
// Exit codes: 0 = success (test: H0 not rejected), 1 = H0 rejected,
// 2 = any error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "klgof/csv_io.hpp"
#include "klgof/errors.hpp"
#include "klgof/experiments.hpp"
#include "klgof/goftest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;
constexpr const char* kSeedEnvVar = "KLGOF_SEED";

struct CommonOptions {
    std::string input;
    std::string out_dir = ".";
    int k = 1;
    double alpha = 0.05;
    int bootstrap = 1000;
    std::string seed_text;
    std::string backend = "tree";
    double jitter = 0.0;
};

struct ResolvedSeed {
    std::uint64_t value = kDefaultSeed;
    std::string source = "default";
};

std::uint64_t parse_seed(const std::string& text) {
    std::size_t consumed = 0;
    const std::uint64_t value = std::stoull(text, &consumed, 0);
    if (consumed != text.size()) {
        throw klgof::BadInputError("seed: not a valid integer: " + text);
    }
    return value;
}

// Resolution order: --seed flag, then KLGOF_SEED, then the built-in default.
ResolvedSeed resolve_seed(const std::string& flag_text) {
    if (!flag_text.empty()) return {parse_seed(flag_text), "flag"};
    if (const char* env = std::getenv(kSeedEnvVar)) {
        return {parse_seed(env), kSeedEnvVar};
    }
    return {kDefaultSeed, "default"};
}

klgof::KnnBackend parse_backend(const std::string& name) {
    if (name == "tree") return klgof::KnnBackend::SpatialTree;
    if (name == "brute") return klgof::KnnBackend::BruteForce;
    throw klgof::BadInputError("backend: must be \"tree\" or \"brute\"");
}

klgof::TestConfig make_test_config(const CommonOptions& opt,
                                   const ResolvedSeed& seed) {
    if (opt.k < 1) throw klgof::BadInputError("k must be >= 1");
    if (!(opt.alpha > 0.0) || !(opt.alpha < 1.0)) {
        throw klgof::BadInputError("alpha: must lie in (0, 1)");
    }
    if (opt.bootstrap < 1) throw klgof::BadInputError("bootstrap: must be >= 1");
    if (opt.bootstrap < 100) {
        std::cerr << "warning: fewer than 100 bootstrap replications; "
                     "critical values will be noisy\n";
    }
    if (opt.jitter < 0.0) throw klgof::BadInputError("jitter: must be >= 0");
    klgof::TestConfig config;
    config.k = opt.k;
    config.alpha = opt.alpha;
    config.n_bootstrap = opt.bootstrap;
    config.seed = seed.value;
    config.estimator.backend = parse_backend(opt.backend);
    config.estimator.duplicate_policy =
        opt.jitter > 0.0 ? klgof::DuplicatePolicy::jitter(opt.jitter)
                         : klgof::DuplicatePolicy::error();
    return config;
}

json config_to_json(const klgof::TestConfig& config, const ResolvedSeed& seed) {
    json j;
    j["k"] = config.k;
    j["alpha"] = config.alpha;
    j["n_bootstrap"] = config.n_bootstrap;
    j["seed"] = std::to_string(seed.value);
    j["seed_source"] = seed.source;
    j["backend"] = config.estimator.backend == klgof::KnnBackend::SpatialTree
                       ? "tree"
                       : "brute";
    const bool jittering = config.estimator.duplicate_policy.kind ==
                           klgof::DuplicatePolicy::Kind::Jitter;
    j["duplicate_policy"] = jittering ? "jitter" : "error";
    j["jitter_scale"] =
        jittering ? config.estimator.duplicate_policy.jitter_scale : 0.0;
    return j;
}

void write_json_file(const fs::path& path, const json& j) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw klgof::Error("cannot open output file " + path.string());
    out << j.dump(2) << "\n";
    std::cout << "wrote " << path.string() << "\n";
}

int cmd_test(const CommonOptions& opt) {
    const ResolvedSeed seed = resolve_seed(opt.seed_text);
    const klgof::TestConfig config = make_test_config(opt, seed);
    const klgof::PointSet sample = klgof::read_csv_points(opt.input);
    const klgof::TestResult result = klgof::run_test(sample, config);

    json j;
    j["schema_version"] = 1;
    j["n"] = result.n;
    j["dim"] = result.dim;
    j["t_observed"] = result.t_observed;
    j["critical_value"] = result.critical_value;
    j["p_value"] = result.p_value;
    j["reject"] = result.reject;
    j["config"] = config_to_json(config, seed);
    j["fitted"] = {{"mean", result.fitted.mean},
                   {"log_det", result.fitted.log_det}};
    j["null_statistics"] = result.null_statistics;
    write_json_file(fs::path(opt.out_dir) / "test_result.json", j);

    std::cout << "KL normality test: n=" << result.n << " dim=" << result.dim
              << " k=" << config.k << " B=" << config.n_bootstrap
              << " alpha=" << config.alpha << " seed=" << seed.value << " ("
              << seed.source << ")\n"
              << "  T observed     = " << result.t_observed << "\n"
              << "  critical value = " << result.critical_value << "\n"
              << "  p-value        = " << result.p_value << "\n"
              << "  decision       = "
              << (result.reject ? "reject multivariate normality"
                                : "fail to reject multivariate normality")
              << "\n";
    return result.reject ? 1 : 0;
}

int cmd_calibrate(const CommonOptions& opt) {
    const ResolvedSeed seed = resolve_seed(opt.seed_text);
    const klgof::TestConfig config = make_test_config(opt, seed);
    const klgof::PointSet sample = klgof::read_csv_points(opt.input);
    const auto [critical, nulls] = klgof::bootstrap_critical_value(sample, config);

    json j;
    j["schema_version"] = 1;
    j["n"] = sample.size();
    j["dim"] = sample.dim();
    j["critical_value"] = critical;
    j["config"] = config_to_json(config, seed);
    j["null_statistics"] = nulls;
    write_json_file(fs::path(opt.out_dir) / "calibration.json", j);

    std::cout << "bootstrap critical value (alpha=" << config.alpha
              << ", B=" << config.n_bootstrap << ", seed=" << seed.value << " ("
              << seed.source << ")): " << critical << "\n";
    return 0;
}

int run_spec(const std::string& spec_path, const std::string& out_dir,
             const std::string& seed_text, bool per_dataset_bootstrap,
             const char* required_kind) {
    std::ifstream in(spec_path);
    if (!in) throw klgof::BadInputError("cannot open spec file " + spec_path);
    json parsed;
    try {
        parsed = json::parse(in);
    } catch (const json::parse_error& e) {
        throw klgof::BadInputError(std::string("spec: invalid JSON: ") + e.what());
    }
    klgof::ExperimentSpec spec = klgof::parse_experiment_spec(parsed);
    if (required_kind &&
        klgof::experiment_kind_name(spec.kind) != required_kind) {
        throw klgof::BadInputError(std::string("kind: expected \"") +
                                   required_kind + "\" but spec says \"" +
                                   klgof::experiment_kind_name(spec.kind) + "\"");
    }
    // Flag or environment override the seed recorded in the spec file.
    if (!seed_text.empty()) {
        spec.seed = parse_seed(seed_text);
        std::cout << "seed = " << spec.seed << " (flag)\n";
    } else if (const char* env = std::getenv(kSeedEnvVar)) {
        spec.seed = parse_seed(env);
        std::cout << "seed = " << spec.seed << " (" << kSeedEnvVar << ")\n";
    } else {
        std::cout << "seed = " << spec.seed << " (spec file)\n";
    }
    if (per_dataset_bootstrap) spec.per_dataset_bootstrap = true;

    const klgof::ExperimentReport report =
        klgof::run_experiment(spec, [](int done, int total) {
            std::cerr << "cell " << done << "/" << total << "\n";
        });
    const auto written = klgof::write_report_files(report, out_dir);
    for (const auto& path : written) {
        std::cout << "wrote " << path.string() << "\n";
    }
    std::cerr << "wall time: " << report.wall_time_seconds << " s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "k-nearest-neighbor entropy and KL-divergence estimation with a "
        "KL-based test of multivariate normality"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string spec_path;
    bool per_dataset_bootstrap = false;

    const auto add_common = [&](CLI::App* cmd, bool with_estimator_flags) {
        cmd->add_option("--out", opt.out_dir, "Output directory");
        cmd->add_option("--seed", opt.seed_text,
                        "Master seed (overrides KLGOF_SEED)");
        if (with_estimator_flags) {
            cmd->add_option("--k", opt.k, "Neighborhood size");
            cmd->add_option("--alpha", opt.alpha, "Significance level");
            cmd->add_option("--bootstrap", opt.bootstrap,
                            "Bootstrap replications B");
            cmd->add_option("--backend", opt.backend,
                            "k-NN backend: tree or brute");
            cmd->add_option("--jitter", opt.jitter,
                            "Duplicate policy: jitter scale (0 = refuse "
                            "duplicates)");
        }
    };

    CLI::App* test_cmd =
        app.add_subcommand("test", "Test a CSV sample for multivariate normality");
    test_cmd->add_option("input", opt.input, "CSV file of observations")
        ->required();
    add_common(test_cmd, true);

    CLI::App* calibrate_cmd = app.add_subcommand(
        "calibrate", "Bootstrap critical value for a CSV sample");
    calibrate_cmd->add_option("input", opt.input, "CSV file of observations")
        ->required();
    add_common(calibrate_cmd, true);

    const auto add_spec_cmd = [&](const char* name, const char* help) {
        CLI::App* cmd = app.add_subcommand(name, help);
        cmd->add_option("spec", spec_path, "Experiment spec JSON file")
            ->required();
        cmd->add_option("--out", opt.out_dir, "Output directory");
        cmd->add_option("--seed", opt.seed_text,
                        "Master seed (overrides KLGOF_SEED and the spec file)");
        cmd->add_flag("--per-dataset-bootstrap", per_dataset_bootstrap,
                      "Calibrate every replication with its own bootstrap");
        return cmd;
    };
    add_spec_cmd("simulate", "Run any Monte Carlo experiment spec");
    add_spec_cmd("power", "Run a power experiment spec");
    add_spec_cmd("slopes", "Run a log-log slope experiment spec");
    add_spec_cmd("diagnostics", "Run a standardized-statistic diagnostics spec");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (test_cmd->parsed()) return cmd_test(opt);
        if (calibrate_cmd->parsed()) return cmd_calibrate(opt);
        const char* required = nullptr;
        if (app.get_subcommand("power")->parsed()) required = "power";
        if (app.get_subcommand("slopes")->parsed()) required = "slopes";
        if (app.get_subcommand("diagnostics")->parsed()) required = "diagnostics";
        return run_spec(spec_path, opt.out_dir, opt.seed_text,
                        per_dataset_bootstrap, required);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
