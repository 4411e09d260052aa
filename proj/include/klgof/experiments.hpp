#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "klgof/estimators.hpp"
#include "klgof/samplers.hpp"

#include "json.hpp"

namespace klgof {

enum class ExperimentKind {
    Convergence,
    Power,
    CriticalValues,
    Slopes,
    StandardizedDiagnostics,
};

std::string experiment_kind_name(ExperimentKind kind);

// Declarative Monte Carlo campaign. The grid is the cross product of dims,
// sample_sizes, neighbor_ks and alternatives, interpreted per kind.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Convergence;
    std::vector<int> dims;
    std::vector<std::int64_t> sample_sizes;
    std::vector<int> neighbor_ks;
    std::vector<AlternativeSpec> alternatives;  // per-cell dim is taken from dims
    int replications = 100;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int bootstrap_replications = 1000;
    // Power experiments calibrate one null critical value per (dim, N, k)
    // cell from standard-Gaussian simulation; this switches to a full
    // parametric bootstrap per replication instead.
    bool per_dataset_bootstrap = false;
    EstimatorConfig estimator{};  // k is overridden per grid cell

    nlohmann::json to_json() const;
};

// Parses and validates a spec; error messages name the offending key.
ExperimentSpec parse_experiment_spec(const nlohmann::json& j);

struct CellResult {
    Family family = Family::Gaussian;
    double shape = 2.0;
    int dim = 0;
    std::int64_t n = 0;  // 0 for slope cells, which aggregate over N
    int k = 0;
    int count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    // Kind-specific extras (NaN / empty when not applicable).
    double power = 0.0;
    double critical_value = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    bool censored = false;  // a slope cell with an exactly-zero mean
    double ks_distance = 0.0;
    double kde_bandwidth = 0.0;
    std::vector<double> curve_n;     // slopes: the N grid
    std::vector<double> curve_mean;  // slopes: mean statistic per N
    std::vector<double> z_values;
    std::vector<double> kde_x;
    std::vector<double> kde_density;
    std::vector<double> qq_theoretical;
    std::vector<double> qq_empirical;
    std::uint64_t stream_base = 0;
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<CellResult> cells;
    std::uint64_t spec_hash = 0;
    double wall_time_seconds = 0.0;  // in-memory only; never written to files

    nlohmann::json to_json() const;
};

using ProgressFn = std::function<void(int cells_done, int cells_total)>;

// Runs the campaign described by the spec. Replications are independent
// parallel tasks with counter-based streams and order-fixed aggregation, so
// a fixed seed yields an identical report for any worker count. Any cell
// failure aborts the whole run.
ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const ProgressFn& progress = {});

// Writes report.json plus one CSV per figure into out_dir (created if
// needed). Files are written only after the campaign has fully succeeded.
std::vector<std::filesystem::path> write_report_files(
    const ExperimentReport& report, const std::filesystem::path& out_dir);

}  // namespace klgof
