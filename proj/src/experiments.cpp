#include "klgof/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <string_view>

#include "klgof/errors.hpp"
#include "klgof/goftest.hpp"
#include "klgof/parallel.hpp"
#include "klgof/rng.hpp"
#include "klgof/special_math.hpp"
#include "klgof/summaries.hpp"

namespace klgof {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::string_view kGgConvention =
    "isotropic density proportional to exp(-||x||^s / s); standardize "
    "rescales draws to unit coordinate covariance";
constexpr std::string_view kKdeRule = "Silverman: 1.06 * std * M^(-1/5)";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "0x%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

// Label such as "gaussian", "gg_s1.5", "t_nu3" used in file names.
std::string alternative_label(Family family, double shape) {
    switch (family) {
        case Family::Gaussian: return "gaussian";
        case Family::GeneralizedGaussian: return "gg_s" + fmt_short(shape);
        case Family::StudentT: return "t_nu" + fmt_short(shape);
    }
    return "unknown";
}

std::uint64_t cell_key(Family family, double shape, int dim, std::int64_t n,
                       int k) {
    return stream_id("cell", {static_cast<std::uint64_t>(family),
                              std::bit_cast<std::uint64_t>(shape),
                              static_cast<std::uint64_t>(dim),
                              static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(k)});
}

// M replications of the test statistic on fresh draws from the generator.
// Streams are keyed by (cell, replication), so results do not depend on
// scheduling; any failing replication aborts with its cell context.
std::vector<double> simulate_statistics(const ExperimentSpec& spec,
                                        const AlternativeSpec& alt,
                                        std::int64_t n, int k,
                                        std::uint64_t key) {
    EstimatorConfig est = spec.estimator;
    est.k = k;
    std::vector<double> stats(static_cast<std::size_t>(spec.replications));
    parallel_for(spec.replications, spec.estimator.exec, [&](std::int64_t r) {
        try {
            SeededRng rng(spec.seed,
                          stream_id("rep", {key, static_cast<std::uint64_t>(r)}));
            const PointSet sample = sample_alternative(alt, n, rng);
            stats[r] = test_statistic(sample, est);
        } catch (const std::exception& e) {
            throw Error("replication " + std::to_string(r) + " of cell " +
                        alternative_label(alt.family, alt.shape) + " m=" +
                        std::to_string(alt.dim) + " N=" + std::to_string(n) +
                        " k=" + std::to_string(k) + " failed: " + e.what());
        }
    });
    return stats;
}

CellResult base_cell(const AlternativeSpec& alt, std::int64_t n, int k,
                     std::uint64_t key, const std::vector<double>& stats) {
    CellResult cell;
    cell.family = alt.family;
    cell.shape = alt.shape;
    cell.dim = alt.dim;
    cell.n = n;
    cell.k = k;
    cell.count = static_cast<int>(stats.size());
    const MeanStd ms = mean_std(stats);
    cell.mean = ms.mean;
    cell.stddev = ms.std;
    cell.power = kNaN;
    cell.critical_value = kNaN;
    cell.slope = kNaN;
    cell.intercept = kNaN;
    cell.ks_distance = kNaN;
    cell.kde_bandwidth = kNaN;
    cell.stream_base = key;
    return cell;
}

void run_convergence(const ExperimentSpec& spec, ExperimentReport& report,
                     const ProgressFn& progress, int total) {
    int done = 0;
    for (const AlternativeSpec& alt_proto : spec.alternatives) {
        for (int m : spec.dims) {
            AlternativeSpec alt = alt_proto;
            alt.dim = m;
            for (int k : spec.neighbor_ks) {
                for (std::int64_t n : spec.sample_sizes) {
                    const std::uint64_t key =
                        cell_key(alt.family, alt.shape, m, n, k);
                    const std::vector<double> stats =
                        simulate_statistics(spec, alt, n, k, key);
                    report.cells.push_back(base_cell(alt, n, k, key, stats));
                    if (progress) progress(++done, total);
                }
            }
        }
    }
}

void run_critical_values(const ExperimentSpec& spec, ExperimentReport& report,
                         const ProgressFn& progress, int total) {
    int done = 0;
    for (const AlternativeSpec& alt_proto : spec.alternatives) {
        for (std::int64_t n : spec.sample_sizes) {
            for (int m : spec.dims) {
                AlternativeSpec alt = alt_proto;
                alt.dim = m;
                for (int k : spec.neighbor_ks) {
                    const std::uint64_t key =
                        cell_key(alt.family, alt.shape, m, n, k);
                    const std::vector<double> stats =
                        simulate_statistics(spec, alt, n, k, key);
                    CellResult cell = base_cell(alt, n, k, key, stats);
                    cell.critical_value = upper_order_quantile(stats, spec.alpha);
                    report.cells.push_back(std::move(cell));
                    if (progress) progress(++done, total);
                }
            }
        }
    }
}

void run_power(const ExperimentSpec& spec, ExperimentReport& report,
               const ProgressFn& progress, int total) {
    int done = 0;
    for (int m : spec.dims) {
        for (std::int64_t n : spec.sample_sizes) {
            for (int k : spec.neighbor_ks) {
                double null_critical = kNaN;
                if (!spec.per_dataset_bootstrap) {
                    // One calibration per (m, N, k): the null quantile of the
                    // statistic under the standard Gaussian, shared by every
                    // alternative in this cell group.
                    EstimatorConfig est = spec.estimator;
                    est.k = k;
                    const std::uint64_t null_key =
                        stream_id("null", {static_cast<std::uint64_t>(m),
                                           static_cast<std::uint64_t>(n),
                                           static_cast<std::uint64_t>(k)});
                    std::vector<double> nulls(
                        static_cast<std::size_t>(spec.bootstrap_replications));
                    const GaussianModel model = GaussianModel::standard(m);
                    parallel_for(
                        spec.bootstrap_replications, spec.estimator.exec,
                        [&](std::int64_t b) {
                            SeededRng rng(
                                spec.seed,
                                stream_id("nullrep",
                                          {null_key, static_cast<std::uint64_t>(b)}));
                            const PointSet sample = sample_gaussian(model, n, rng);
                            nulls[b] = test_statistic(sample, est);
                        });
                    null_critical = upper_order_quantile(nulls, spec.alpha);
                }
                for (const AlternativeSpec& alt_proto : spec.alternatives) {
                    AlternativeSpec alt = alt_proto;
                    alt.dim = m;
                    const std::uint64_t key =
                        cell_key(alt.family, alt.shape, m, n, k);
                    if (!spec.per_dataset_bootstrap) {
                        const std::vector<double> stats =
                            simulate_statistics(spec, alt, n, k, key);
                        CellResult cell = base_cell(alt, n, k, key, stats);
                        cell.critical_value = null_critical;
                        std::int64_t rejections = 0;
                        for (double t : stats) {
                            if (t >= null_critical) ++rejections;
                        }
                        cell.power = static_cast<double>(rejections) /
                                     static_cast<double>(stats.size());
                        report.cells.push_back(std::move(cell));
                    } else {
                        // Literal per-dataset calibration: a full bootstrap
                        // test for every replication.
                        std::vector<double> stats(
                            static_cast<std::size_t>(spec.replications));
                        std::vector<double> crits(
                            static_cast<std::size_t>(spec.replications));
                        std::vector<char> rejected(
                            static_cast<std::size_t>(spec.replications));
                        parallel_for(
                            spec.replications, spec.estimator.exec,
                            [&](std::int64_t r) {
                                SeededRng rng(
                                    spec.seed,
                                    stream_id("rep",
                                              {key, static_cast<std::uint64_t>(r)}));
                                const PointSet sample =
                                    sample_alternative(alt, n, rng);
                                TestConfig tc;
                                tc.k = k;
                                tc.alpha = spec.alpha;
                                tc.n_bootstrap = spec.bootstrap_replications;
                                tc.seed = mix64(spec.seed) ^
                                          stream_id("pds", {key,
                                                            static_cast<std::uint64_t>(r)});
                                tc.estimator = spec.estimator;
                                const TestResult res = run_test(sample, tc);
                                stats[r] = res.t_observed;
                                crits[r] = res.critical_value;
                                rejected[r] = res.reject ? 1 : 0;
                            });
                        CellResult cell = base_cell(alt, n, k, key, stats);
                        double crit_mean = 0.0;
                        std::int64_t rejections = 0;
                        for (std::size_t r = 0; r < rejected.size(); ++r) {
                            crit_mean += crits[r];
                            rejections += rejected[r];
                        }
                        cell.critical_value =
                            crit_mean / static_cast<double>(crits.size());
                        cell.power = static_cast<double>(rejections) /
                                     static_cast<double>(rejected.size());
                        report.cells.push_back(std::move(cell));
                    }
                    if (progress) progress(++done, total);
                }
            }
        }
    }
}

void run_slopes(const ExperimentSpec& spec, ExperimentReport& report,
                const ProgressFn& progress, int total) {
    int done = 0;
    for (const AlternativeSpec& alt_proto : spec.alternatives) {
        for (int m : spec.dims) {
            AlternativeSpec alt = alt_proto;
            alt.dim = m;
            for (int k : spec.neighbor_ks) {
                const std::uint64_t key = cell_key(alt.family, alt.shape, m, 0, k);
                CellResult cell;
                cell.family = alt.family;
                cell.shape = alt.shape;
                cell.dim = m;
                cell.n = 0;
                cell.k = k;
                cell.count = spec.replications;
                cell.power = kNaN;
                cell.critical_value = kNaN;
                cell.ks_distance = kNaN;
                cell.kde_bandwidth = kNaN;
                cell.stream_base = key;
                std::vector<double> log_n;
                std::vector<double> log_abs_mean;
                bool censored = false;
                for (std::int64_t n : spec.sample_sizes) {
                    const std::uint64_t nkey =
                        cell_key(alt.family, alt.shape, m, n, k);
                    const std::vector<double> stats =
                        simulate_statistics(spec, alt, n, k, nkey);
                    const double mean = mean_std(stats).mean;
                    cell.curve_n.push_back(static_cast<double>(n));
                    cell.curve_mean.push_back(mean);
                    if (mean == 0.0) {
                        censored = true;
                    } else {
                        log_n.push_back(std::log(static_cast<double>(n)));
                        log_abs_mean.push_back(std::log(std::abs(mean)));
                    }
                }
                cell.censored = censored;
                if (!censored) {
                    const LinearFit fit = least_squares(log_n, log_abs_mean);
                    cell.slope = fit.slope;
                    cell.intercept = fit.intercept;
                } else {
                    cell.slope = kNaN;
                    cell.intercept = kNaN;
                }
                const MeanStd ms = mean_std(cell.curve_mean);
                cell.mean = ms.mean;
                cell.stddev = ms.std;
                report.cells.push_back(std::move(cell));
                if (progress) progress(++done, total);
            }
        }
    }
}

void run_diagnostics(const ExperimentSpec& spec, ExperimentReport& report,
                     const ProgressFn& progress, int total) {
    int done = 0;
    for (int m : spec.dims) {
        for (std::int64_t n : spec.sample_sizes) {
            for (int k : spec.neighbor_ks) {
                AlternativeSpec alt;
                alt.family = Family::Gaussian;
                alt.shape = 2.0;
                alt.dim = m;
                const std::uint64_t key = cell_key(alt.family, alt.shape, m, n, k);
                const std::vector<double> stats =
                    simulate_statistics(spec, alt, n, k, key);
                CellResult cell = base_cell(alt, n, k, key, stats);

                const int count = cell.count;
                cell.z_values.resize(stats.size());
                for (std::size_t i = 0; i < stats.size(); ++i) {
                    cell.z_values[i] = (stats[i] - cell.mean) / cell.stddev;
                }

                const double z_std = mean_std(cell.z_values).std;
                const double bandwidth =
                    1.06 * z_std * std::pow(static_cast<double>(count), -0.2);
                cell.kde_bandwidth = bandwidth;
                constexpr int kGridPoints = 256;
                cell.kde_x.resize(kGridPoints);
                cell.kde_density.resize(kGridPoints);
                const double norm =
                    1.0 / (static_cast<double>(count) * bandwidth *
                           std::sqrt(2.0 * std::numbers::pi));
                for (int g = 0; g < kGridPoints; ++g) {
                    const double x =
                        -4.0 + 8.0 * static_cast<double>(g) / (kGridPoints - 1);
                    double density = 0.0;
                    for (double z : cell.z_values) {
                        const double u = (x - z) / bandwidth;
                        density += std::exp(-0.5 * u * u);
                    }
                    cell.kde_x[g] = x;
                    cell.kde_density[g] = norm * density;
                }

                std::vector<double> sorted_z = cell.z_values;
                std::sort(sorted_z.begin(), sorted_z.end());
                cell.qq_empirical = sorted_z;
                cell.qq_theoretical.resize(sorted_z.size());
                for (std::size_t i = 0; i < sorted_z.size(); ++i) {
                    const double p = (static_cast<double>(i) + 0.5) /
                                     static_cast<double>(count);
                    cell.qq_theoretical[i] = normal_quantile(p);
                }
                cell.ks_distance = ks_distance_standard_normal(cell.z_values);
                report.cells.push_back(std::move(cell));
                if (progress) progress(++done, total);
            }
        }
    }
}

}  // namespace

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Convergence: return "convergence";
        case ExperimentKind::Power: return "power";
        case ExperimentKind::CriticalValues: return "critical_values";
        case ExperimentKind::Slopes: return "slopes";
        case ExperimentKind::StandardizedDiagnostics: return "diagnostics";
    }
    return "unknown";
}

ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const ProgressFn& progress) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.spec = spec;
    report.spec_hash = fnv1a(spec.to_json().dump());

    const int n_alts = static_cast<int>(spec.alternatives.size());
    const int grid = static_cast<int>(spec.dims.size() * spec.neighbor_ks.size());
    const int n_sizes = static_cast<int>(spec.sample_sizes.size());
    int total = 0;
    switch (spec.kind) {
        case ExperimentKind::Convergence:
            total = n_alts * grid * n_sizes;
            run_convergence(spec, report, progress, total);
            break;
        case ExperimentKind::Power:
            total = n_alts * grid * n_sizes;
            run_power(spec, report, progress, total);
            break;
        case ExperimentKind::CriticalValues:
            total = n_alts * grid * n_sizes;
            run_critical_values(spec, report, progress, total);
            break;
        case ExperimentKind::Slopes:
            total = n_alts * grid;
            run_slopes(spec, report, progress, total);
            break;
        case ExperimentKind::StandardizedDiagnostics:
            total = grid * n_sizes;
            run_diagnostics(spec, report, progress, total);
            break;
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

nlohmann::json alternative_to_json(const AlternativeSpec& alt) {
    nlohmann::json j;
    j["family"] = family_name(alt.family);
    if (alt.family != Family::Gaussian) j["shape"] = alt.shape;
    j["standardize"] = alt.standardize;
    return j;
}

Family parse_family(const std::string& name) {
    if (name == "gaussian") return Family::Gaussian;
    if (name == "gg") return Family::GeneralizedGaussian;
    if (name == "student_t" || name == "t") return Family::StudentT;
    throw BadInputError(
        "alternatives: family must be one of gaussian, gg, student_t");
}

}  // namespace

nlohmann::json ExperimentSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = experiment_kind_name(kind);
    j["dims"] = dims;
    j["sample_sizes"] = sample_sizes;
    j["ks"] = neighbor_ks;
    nlohmann::json alts = nlohmann::json::array();
    for (const AlternativeSpec& a : alternatives) alts.push_back(alternative_to_json(a));
    j["alternatives"] = alts;
    j["replications"] = replications;
    j["alpha"] = alpha;
    j["seed"] = std::to_string(seed);
    j["bootstrap_replications"] = bootstrap_replications;
    j["per_dataset_bootstrap"] = per_dataset_bootstrap;
    j["backend"] =
        estimator.backend == KnnBackend::SpatialTree ? "tree" : "brute";
    j["jitter"] = estimator.duplicate_policy.kind == DuplicatePolicy::Kind::Jitter
                      ? estimator.duplicate_policy.jitter_scale
                      : 0.0;
    j["exec"] = estimator.exec == ExecMode::Parallel ? "parallel" : "serial";
    return j;
}

ExperimentSpec parse_experiment_spec(const nlohmann::json& j) {
    ExperimentSpec spec;
    if (!j.is_object()) throw BadInputError("spec: top level must be an object");

    const auto require = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) {
            throw BadInputError(std::string("spec: missing key \"") + key + "\"");
        }
        return j.at(key);
    };

    const std::string kind_name = require("kind").get<std::string>();
    if (kind_name == "convergence") {
        spec.kind = ExperimentKind::Convergence;
    } else if (kind_name == "power") {
        spec.kind = ExperimentKind::Power;
    } else if (kind_name == "critical_values") {
        spec.kind = ExperimentKind::CriticalValues;
    } else if (kind_name == "slopes") {
        spec.kind = ExperimentKind::Slopes;
    } else if (kind_name == "diagnostics") {
        spec.kind = ExperimentKind::StandardizedDiagnostics;
    } else {
        throw BadInputError(
            "kind: must be one of convergence, power, critical_values, "
            "slopes, diagnostics");
    }

    spec.dims = require("dims").get<std::vector<int>>();
    if (spec.dims.empty()) throw BadInputError("dims: must not be empty");
    for (int m : spec.dims) {
        if (m < 1) throw BadInputError("dims: dimension must be >= 1");
    }

    spec.sample_sizes = require("sample_sizes").get<std::vector<std::int64_t>>();
    if (spec.sample_sizes.empty()) {
        throw BadInputError("sample_sizes: must not be empty");
    }
    for (std::int64_t n : spec.sample_sizes) {
        if (n < 2) throw BadInputError("sample_sizes: N must be >= 2");
    }
    if (spec.kind == ExperimentKind::Slopes && spec.sample_sizes.size() < 4) {
        throw BadInputError(
            "sample_sizes: slope regression needs at least 4 sample sizes");
    }

    spec.neighbor_ks = require("ks").get<std::vector<int>>();
    if (spec.neighbor_ks.empty()) throw BadInputError("ks: must not be empty");
    for (int k : spec.neighbor_ks) {
        if (k < 1) throw BadInputError("ks: k must be >= 1");
    }

    spec.replications = require("replications").get<int>();
    if (spec.replications < 1) {
        throw BadInputError("replications: must be >= 1");
    }

    spec.alpha = j.value("alpha", 0.05);
    if (!(spec.alpha > 0.0) || !(spec.alpha < 1.0)) {
        throw BadInputError("alpha: must lie in (0, 1)");
    }

    if (j.contains("seed")) {
        const auto& s = j.at("seed");
        if (s.is_string()) {
            spec.seed = std::stoull(s.get<std::string>(), nullptr, 0);
        } else {
            spec.seed = s.get<std::uint64_t>();
        }
    }

    spec.bootstrap_replications = j.value("bootstrap_replications", 1000);
    if (spec.bootstrap_replications < 1) {
        throw BadInputError("bootstrap_replications: must be >= 1");
    }
    spec.per_dataset_bootstrap = j.value("per_dataset_bootstrap", false);

    const bool standardize = j.value("standardize", true);
    if (spec.kind != ExperimentKind::StandardizedDiagnostics) {
        const auto& alts = require("alternatives");
        if (!alts.is_array() || alts.empty()) {
            throw BadInputError("alternatives: must be a non-empty array");
        }
        for (const auto& a : alts) {
            AlternativeSpec alt;
            alt.family = parse_family(a.at("family").get<std::string>());
            alt.standardize = a.value("standardize", standardize);
            if (alt.family != Family::Gaussian) {
                if (!a.contains("shape")) {
                    throw BadInputError(
                        "alternatives: non-Gaussian families need a \"shape\"");
                }
                alt.shape = a.at("shape").get<double>();
                if (!(alt.shape > 0.0)) {
                    throw BadInputError("alternatives: shape must be > 0");
                }
                if (alt.family == Family::StudentT && alt.standardize &&
                    !(alt.shape > 2.0)) {
                    throw BadInputError(
                        "alternatives: standardized student_t needs shape > 2");
                }
            }
            spec.alternatives.push_back(alt);
        }
    }

    const std::string backend = j.value("backend", std::string("tree"));
    if (backend == "tree") {
        spec.estimator.backend = KnnBackend::SpatialTree;
    } else if (backend == "brute") {
        spec.estimator.backend = KnnBackend::BruteForce;
    } else {
        throw BadInputError("backend: must be \"tree\" or \"brute\"");
    }

    const double jitter = j.value("jitter", 0.0);
    if (jitter < 0.0) throw BadInputError("jitter: must be >= 0");
    spec.estimator.duplicate_policy =
        jitter > 0.0 ? DuplicatePolicy::jitter(jitter) : DuplicatePolicy::error();

    const std::string exec = j.value("exec", std::string("parallel"));
    if (exec == "parallel") {
        spec.estimator.exec = ExecMode::Parallel;
    } else if (exec == "serial") {
        spec.estimator.exec = ExecMode::Serial;
    } else {
        throw BadInputError("exec: must be \"parallel\" or \"serial\"");
    }
    return spec;
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["kind"] = experiment_kind_name(spec.kind);
    j["spec"] = spec.to_json();
    j["spec_hash"] = hex64(spec_hash);
    j["provenance"] = {
        {"gg_scale_convention", std::string(kGgConvention)},
        {"kde_bandwidth_rule", std::string(kKdeRule)},
    };
    nlohmann::json cells = nlohmann::json::array();
    for (const CellResult& cell : this->cells) {
        nlohmann::json c;
        c["family"] = family_name(cell.family);
        c["shape"] = cell.shape;
        c["dim"] = cell.dim;
        c["n"] = cell.n;
        c["k"] = cell.k;
        c["count"] = cell.count;
        c["mean"] = cell.mean;
        c["std"] = cell.stddev;
        c["stream_base"] = hex64(cell.stream_base);
        c["seed"] = std::to_string(spec.seed);
        if (!std::isnan(cell.power)) c["power"] = cell.power;
        if (!std::isnan(cell.critical_value)) {
            c["critical_value"] = cell.critical_value;
        }
        if (spec.kind == ExperimentKind::Slopes) {
            c["censored"] = cell.censored;
            if (!cell.censored) {
                c["slope"] = cell.slope;
                c["intercept"] = cell.intercept;
            }
            c["curve_n"] = cell.curve_n;
            c["curve_mean"] = cell.curve_mean;
        }
        if (spec.kind == ExperimentKind::StandardizedDiagnostics) {
            c["ks_distance"] = cell.ks_distance;
            c["kde_bandwidth"] = cell.kde_bandwidth;
            c["z_values"] = cell.z_values;
            c["kde_x"] = cell.kde_x;
            c["kde_density"] = cell.kde_density;
            c["qq_theoretical"] = cell.qq_theoretical;
            c["qq_empirical"] = cell.qq_empirical;
        }
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    return j;
}

// ---------------------------------------------------------------------------
// File output
// ---------------------------------------------------------------------------

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& body,
                     std::vector<std::filesystem::path>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path.string());
    out << body;
    written.push_back(path);
}

}  // namespace

std::vector<std::filesystem::path> write_report_files(
    const ExperimentReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;

    write_text_file(out_dir / "report.json", report.to_json().dump(2) + "\n",
                    written);

    const ExperimentSpec& spec = report.spec;
    switch (spec.kind) {
        case ExperimentKind::Convergence: {
            // One file per curve (alternative, m, k), rows over N.
            for (const AlternativeSpec& alt : spec.alternatives) {
                for (int m : spec.dims) {
                    for (int k : spec.neighbor_ks) {
                        std::string body = "n,mean,std,count\n";
                        for (const CellResult& cell : report.cells) {
                            if (cell.family != alt.family ||
                                cell.shape != alt.shape || cell.dim != m ||
                                cell.k != k) {
                                continue;
                            }
                            body += std::to_string(cell.n) + "," +
                                    fmt17(cell.mean) + "," + fmt17(cell.stddev) +
                                    "," + std::to_string(cell.count) + "\n";
                        }
                        write_text_file(
                            out_dir / ("convergence_" +
                                       alternative_label(alt.family, alt.shape) +
                                       "_m" + std::to_string(m) + "_k" +
                                       std::to_string(k) + ".csv"),
                            body, written);
                    }
                }
            }
            break;
        }
        case ExperimentKind::Power: {
            // One file per (m, N, k), rows over alternatives.
            for (int m : spec.dims) {
                for (std::int64_t n : spec.sample_sizes) {
                    for (int k : spec.neighbor_ks) {
                        std::string body =
                            "family,shape,power,mean,std,critical_value\n";
                        for (const CellResult& cell : report.cells) {
                            if (cell.dim != m || cell.n != n || cell.k != k) {
                                continue;
                            }
                            body += family_name(cell.family) + "," +
                                    fmt_short(cell.shape) + "," +
                                    fmt17(cell.power) + "," + fmt17(cell.mean) +
                                    "," + fmt17(cell.stddev) + "," +
                                    fmt17(cell.critical_value) + "\n";
                        }
                        write_text_file(out_dir / ("power_m" + std::to_string(m) +
                                                   "_n" + std::to_string(n) +
                                                   "_k" + std::to_string(k) +
                                                   ".csv"),
                                        body, written);
                    }
                }
            }
            break;
        }
        case ExperimentKind::CriticalValues: {
            // One file per generator in the same (N) x (m, k) layout as the
            // reference table.
            for (const AlternativeSpec& alt : spec.alternatives) {
                std::string body = "n";
                for (int m : spec.dims) {
                    for (int k : spec.neighbor_ks) {
                        body += ",m" + std::to_string(m) + "_k" + std::to_string(k);
                    }
                }
                body += "\n";
                for (std::int64_t n : spec.sample_sizes) {
                    body += std::to_string(n);
                    for (int m : spec.dims) {
                        for (int k : spec.neighbor_ks) {
                            for (const CellResult& cell : report.cells) {
                                if (cell.family == alt.family &&
                                    cell.shape == alt.shape && cell.dim == m &&
                                    cell.n == n && cell.k == k) {
                                    body += "," + fmt17(cell.critical_value);
                                    break;
                                }
                            }
                        }
                    }
                    body += "\n";
                }
                write_text_file(
                    out_dir / ("critical_values_" +
                               alternative_label(alt.family, alt.shape) + ".csv"),
                    body, written);
            }
            break;
        }
        case ExperimentKind::Slopes: {
            std::string body = "family,shape,dim,k,slope,intercept,censored\n";
            for (const CellResult& cell : report.cells) {
                body += family_name(cell.family) + "," + fmt_short(cell.shape) +
                        "," + std::to_string(cell.dim) + "," +
                        std::to_string(cell.k) + ",";
                if (cell.censored) {
                    body += ",,true\n";
                } else {
                    body += fmt17(cell.slope) + "," + fmt17(cell.intercept) +
                            ",false\n";
                }
            }
            write_text_file(out_dir / "slopes.csv", body, written);
            break;
        }
        case ExperimentKind::StandardizedDiagnostics: {
            for (const CellResult& cell : report.cells) {
                const std::string suffix = "m" + std::to_string(cell.dim) + "_n" +
                                           std::to_string(cell.n) + "_k" +
                                           std::to_string(cell.k) + ".csv";
                std::string z_body = "z\n";
                for (double z : cell.z_values) z_body += fmt17(z) + "\n";
                write_text_file(out_dir / ("diagnostics_z_" + suffix), z_body,
                                written);
                std::string kde_body = "x,density\n";
                for (std::size_t g = 0; g < cell.kde_x.size(); ++g) {
                    kde_body += fmt17(cell.kde_x[g]) + "," +
                                fmt17(cell.kde_density[g]) + "\n";
                }
                write_text_file(out_dir / ("diagnostics_kde_" + suffix), kde_body,
                                written);
                std::string qq_body = "theoretical,empirical\n";
                for (std::size_t i = 0; i < cell.qq_empirical.size(); ++i) {
                    qq_body += fmt17(cell.qq_theoretical[i]) + "," +
                               fmt17(cell.qq_empirical[i]) + "\n";
                }
                write_text_file(out_dir / ("diagnostics_qq_" + suffix), qq_body,
                                written);
            }
            break;
        }
    }
    return written;
}

}  // namespace klgof
