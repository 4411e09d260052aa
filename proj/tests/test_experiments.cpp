#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "klgof/errors.hpp"
#include "klgof/experiments.hpp"
#include "klgof/summaries.hpp"

using namespace klgof;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal_spec_json() {
    return json{{"kind", "convergence"},
                {"dims", {1}},
                {"sample_sizes", {100, 200, 300}},
                {"ks", {1}},
                {"alternatives", {{{"family", "gg"}, {"shape", 2.0}}}},
                {"replications", 20},
                {"alpha", 0.05},
                {"seed", 11}};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("klgof_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void check_parse_error(json j, const std::string& needle) {
    try {
        parse_experiment_spec(j);
        FAIL_CHECK("expected BadInputError containing \"" << needle << "\"");
    } catch (const BadInputError& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("spec parsing validates every key") {
    check_parse_error(json::object(), "kind");
    {
        json j = minimal_spec_json();
        j["kind"] = "nope";
        check_parse_error(j, "kind");
    }
    {
        json j = minimal_spec_json();
        j["ks"] = {0};
        check_parse_error(j, "k must be >= 1");
    }
    {
        json j = minimal_spec_json();
        j["dims"] = {0};
        check_parse_error(j, "dims");
    }
    {
        json j = minimal_spec_json();
        j["sample_sizes"] = json::array();
        check_parse_error(j, "sample_sizes");
    }
    {
        json j = minimal_spec_json();
        j["kind"] = "slopes";
        check_parse_error(j, "at least 4 sample sizes");
    }
    {
        json j = minimal_spec_json();
        j.erase("alternatives");
        check_parse_error(j, "alternatives");
    }
    {
        json j = minimal_spec_json();
        j["alternatives"] = {{{"family", "weibull"}}};
        check_parse_error(j, "family");
    }
    {
        json j = minimal_spec_json();
        j["alternatives"] = {{{"family", "student_t"}, {"shape", 2.0}}};
        check_parse_error(j, "shape > 2");
    }
    {
        json j = minimal_spec_json();
        j["alpha"] = 1.5;
        check_parse_error(j, "alpha");
    }
    {
        json j = minimal_spec_json();
        j["replications"] = 0;
        check_parse_error(j, "replications");
    }
    {
        json j = minimal_spec_json();
        j["backend"] = "quantum";
        check_parse_error(j, "backend");
    }
}

TEST_CASE("log-log regression recovers synthetic power laws exactly") {
    // mean T = c N^{-1/2} must give slope -1/2 through the same OLS the
    // slope experiment uses.
    const std::vector<double> ns = {250, 500, 1000, 2000, 4000};
    std::vector<double> log_n, log_half, log_const;
    for (double n : ns) {
        log_n.push_back(std::log(n));
        log_half.push_back(std::log(3.7 * std::pow(n, -0.5)));
        log_const.push_back(std::log(0.42));
    }
    const LinearFit half = least_squares(log_n, log_half);
    CHECK(std::abs(half.slope - (-0.5)) <= 1e-9);
    const LinearFit flat = least_squares(log_n, log_const);
    CHECK(std::abs(flat.slope) <= 1e-9);
}

TEST_CASE("convergence experiment writes the expected files") {
    const ExperimentSpec spec = parse_experiment_spec(minimal_spec_json());
    const ExperimentReport report = run_experiment(spec);
    REQUIRE(report.cells.size() == 3);
    for (const CellResult& cell : report.cells) {
        CHECK(cell.count == 20);
        CHECK(std::isfinite(cell.mean));
        CHECK(cell.stddev > 0.0);
        CHECK(cell.stream_base != 0);
    }
    CHECK(report.spec_hash != 0);

    const fs::path dir = temp_dir("convergence");
    const auto written = write_report_files(report, dir);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "convergence_gg_s2_m1_k1.csv"));
    const std::string csv = slurp(dir / "convergence_gg_s2_m1_k1.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
    const json parsed = json::parse(slurp(dir / "report.json"));
    CHECK(parsed.at("schema_version") == 1);
    CHECK(parsed.at("cells").size() == 3);
    fs::remove_all(dir);
}

TEST_CASE("reports are identical for serial and parallel execution") {
    ExperimentSpec spec = parse_experiment_spec(minimal_spec_json());
    spec.replications = 10;
    spec.estimator.exec = ExecMode::Serial;
    const json serial = run_experiment(spec).to_json().at("cells");
    spec.estimator.exec = ExecMode::Parallel;
    const json parallel = run_experiment(spec).to_json().at("cells");
    CHECK(serial == parallel);
}

TEST_CASE("repeated runs are byte-identical") {
    const ExperimentSpec spec = parse_experiment_spec(minimal_spec_json());
    const fs::path dir1 = temp_dir("rerun1");
    const fs::path dir2 = temp_dir("rerun2");
    write_report_files(run_experiment(spec), dir1);
    write_report_files(run_experiment(spec), dir2);
    CHECK(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"));
    CHECK(slurp(dir1 / "convergence_gg_s2_m1_k1.csv") ==
          slurp(dir2 / "convergence_gg_s2_m1_k1.csv"));
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("diagnostics cells carry standardized values, KDE and QQ data") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::StandardizedDiagnostics;
    spec.dims = {2};
    spec.sample_sizes = {300};
    spec.neighbor_ks = {1};
    spec.replications = 200;
    spec.seed = 3;
    const ExperimentReport report = run_experiment(spec);
    REQUIRE(report.cells.size() == 1);
    const CellResult& cell = report.cells[0];

    const MeanStd z = mean_std(cell.z_values);
    CHECK(std::abs(z.mean) < 1e-10);
    CHECK(std::abs(z.std - 1.0) < 1e-10);

    REQUIRE(cell.kde_x.size() == 256);
    REQUIRE(cell.kde_density.size() == 256);
    CHECK(cell.kde_x.front() == -4.0);
    CHECK(cell.kde_x.back() == 4.0);
    double integral = 0.0;
    for (std::size_t g = 0; g + 1 < cell.kde_x.size(); ++g) {
        CHECK(cell.kde_density[g] >= 0.0);
        integral += 0.5 * (cell.kde_density[g] + cell.kde_density[g + 1]) *
                    (cell.kde_x[g + 1] - cell.kde_x[g]);
    }
    CHECK(std::abs(integral - 1.0) < 0.05);

    REQUIRE(cell.qq_theoretical.size() == 200);
    REQUIRE(cell.qq_empirical.size() == 200);
    CHECK(std::is_sorted(cell.qq_theoretical.begin(), cell.qq_theoretical.end()));
    CHECK(std::is_sorted(cell.qq_empirical.begin(), cell.qq_empirical.end()));
    CHECK(cell.ks_distance < 0.15);

    const fs::path dir = temp_dir("diag");
    write_report_files(report, dir);
    CHECK(fs::exists(dir / "diagnostics_z_m2_n300_k1.csv"));
    CHECK(fs::exists(dir / "diagnostics_kde_m2_n300_k1.csv"));
    CHECK(fs::exists(dir / "diagnostics_qq_m2_n300_k1.csv"));
    fs::remove_all(dir);
}

TEST_CASE("statistic variability shrinks as k grows") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Convergence;
    spec.dims = {2};
    spec.sample_sizes = {500};
    spec.neighbor_ks = {1, 3};
    spec.alternatives = {{Family::GeneralizedGaussian, 2.0, 2, true}};
    spec.replications = 150;
    spec.seed = 17;
    const ExperimentReport report = run_experiment(spec);
    REQUIRE(report.cells.size() == 2);
    const CellResult& k1 = report.cells[0].k == 1 ? report.cells[0] : report.cells[1];
    const CellResult& k3 = report.cells[0].k == 3 ? report.cells[0] : report.cells[1];
    CHECK(k3.stddev < k1.stddev);
}

TEST_CASE("critical values decrease as N grows") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::CriticalValues;
    spec.dims = {2};
    spec.sample_sizes = {100, 200, 400};
    spec.neighbor_ks = {1};
    spec.alternatives = {{Family::GeneralizedGaussian, 2.0, 2, true}};
    spec.replications = 300;
    spec.alpha = 0.05;
    spec.seed = 13;
    const ExperimentReport report = run_experiment(spec);
    REQUIRE(report.cells.size() == 3);
    CHECK(report.cells[0].critical_value > report.cells[1].critical_value);
    CHECK(report.cells[1].critical_value > report.cells[2].critical_value);

    const fs::path dir = temp_dir("crit");
    write_report_files(report, dir);
    const std::string csv = slurp(dir / "critical_values_gg_s2.csv");
    CHECK(csv.find("n,m2_k1") == 0);
    fs::remove_all(dir);
}

TEST_CASE("size under the null stays in the binomial band") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Power;
    spec.dims = {2};
    spec.sample_sizes = {300};
    spec.neighbor_ks = {1};
    spec.alternatives = {{Family::GeneralizedGaussian, 2.0, 2, true}};
    spec.replications = 300;
    spec.alpha = 0.05;
    spec.seed = 29;
    spec.bootstrap_replications = 500;
    const ExperimentReport report = run_experiment(spec);
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].power >= 0.02);
    CHECK(report.cells[0].power <= 0.10);
}

TEST_CASE("per-dataset bootstrap mode runs and is deterministic") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Power;
    spec.dims = {2};
    spec.sample_sizes = {100};
    spec.neighbor_ks = {1};
    spec.alternatives = {{Family::StudentT, 3.0, 2, true}};
    spec.replications = 10;
    spec.alpha = 0.05;
    spec.seed = 31;
    spec.bootstrap_replications = 60;
    spec.per_dataset_bootstrap = true;
    const ExperimentReport a = run_experiment(spec);
    const ExperimentReport b = run_experiment(spec);
    REQUIRE(a.cells.size() == 1);
    CHECK(a.cells[0].power >= 0.0);
    CHECK(a.cells[0].power <= 1.0);
    CHECK(a.to_json().at("cells") == b.to_json().at("cells"));
}

TEST_CASE("slope experiment reports a near--1/2 Gaussian decay") {
    // Small desk-scale check that the machinery produces finite slopes;
    // the magnitude itself is noisy at these sizes.
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Slopes;
    spec.dims = {1};
    spec.sample_sizes = {100, 200, 400, 800};
    spec.neighbor_ks = {1};
    spec.alternatives = {{Family::GeneralizedGaussian, 1.0, 1, true}};
    spec.replications = 100;
    spec.seed = 37;
    const ExperimentReport report = run_experiment(spec);
    REQUIRE(report.cells.size() == 1);
    const CellResult& cell = report.cells[0];
    CHECK_FALSE(cell.censored);
    CHECK(std::isfinite(cell.slope));
    CHECK(cell.curve_n.size() == 4);
    CHECK(cell.curve_mean.size() == 4);

    const fs::path dir = temp_dir("slopes");
    write_report_files(report, dir);
    const std::string csv = slurp(dir / "slopes.csv");
    CHECK(csv.find("family,shape,dim,k,slope,intercept,censored") == 0);
    fs::remove_all(dir);
}
