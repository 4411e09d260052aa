// Compares the serial reference paths against the OpenMP-parallel paths for
// the hot kernels: k-th neighbor distance queries (both backends) and the
// bootstrap calibration loop. Both paths produce bit-identical results; this
// tool reports wall times and speedups.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "klgof/goftest.hpp"
#include "klgof/nn_search.hpp"
#include "klgof/parallel.hpp"
#include "klgof/rng.hpp"
#include "klgof/samplers.hpp"

using namespace klgof;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const double t0 = now_seconds();
        fn();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

void bench_knn(std::int64_t n, int dim, int k, int repeats) {
    SeededRng rng(12345, 0);
    const PointSet points =
        sample_gaussian(GaussianModel::standard(dim), n, rng);

    struct Row {
        const char* name;
        KnnBackend backend;
    };
    const Row rows[] = {{"brute", KnnBackend::BruteForce},
                        {"tree", KnnBackend::SpatialTree}};
    for (const Row& row : rows) {
        std::vector<double> serial_out, parallel_out;
        const double t_serial = time_best_of(repeats, [&] {
            serial_out =
                kth_nn_distances_within(points, k, row.backend, ExecMode::Serial);
        });
        const double t_parallel = time_best_of(repeats, [&] {
            parallel_out = kth_nn_distances_within(points, k, row.backend,
                                                   ExecMode::Parallel);
        });
        const bool identical = serial_out == parallel_out;
        std::printf("knn %-5s N=%-6lld m=%d k=%d  serial %8.3f ms  parallel %8.3f ms"
                    "  speedup %4.2fx  identical=%s\n",
                    row.name, static_cast<long long>(n), dim, k,
                    1e3 * t_serial, 1e3 * t_parallel, t_serial / t_parallel,
                    identical ? "yes" : "NO");
    }
}

void bench_bootstrap(std::int64_t n, int dim, int k, int b) {
    SeededRng rng(777, 0);
    const PointSet sample =
        sample_gaussian(GaussianModel::standard(dim), n, rng);
    TestConfig config;
    config.k = k;
    config.n_bootstrap = b;
    config.seed = 99;

    config.estimator.exec = ExecMode::Serial;
    double crit_serial = 0.0;
    const double t_serial = time_best_of(1, [&] {
        crit_serial = bootstrap_critical_value(sample, config).first;
    });
    config.estimator.exec = ExecMode::Parallel;
    double crit_parallel = 0.0;
    const double t_parallel = time_best_of(1, [&] {
        crit_parallel = bootstrap_critical_value(sample, config).first;
    });
    std::printf("bootstrap N=%lld m=%d k=%d B=%d  serial %8.3f ms  parallel %8.3f ms"
                "  speedup %4.2fx  identical=%s\n",
                static_cast<long long>(n), dim, k, b, 1e3 * t_serial,
                1e3 * t_parallel, t_serial / t_parallel,
                crit_serial == crit_parallel ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    std::printf("threads available: %d\n", max_threads());

    const int repeats = quick ? 1 : 3;
    bench_knn(2000, 2, 3, repeats);
    bench_knn(5000, 3, 3, repeats);
    if (!quick) bench_knn(20000, 2, 1, repeats);

    bench_bootstrap(500, 2, 1, quick ? 50 : 200);
    if (!quick) bench_bootstrap(1000, 3, 3, 200);
    return 0;
}
