// Timing harness: the OpenMP sweep against the serial reference, plus a
// right-hand-side microbenchmark. Labels must agree between the two sweep
// paths; the tool exits nonzero if they ever differ.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include <omp.h>

#include "winfree/rng.hpp"
#include "winfree/sweep.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void bench_rhs() {
    winfree::ModelConfig config;
    config.order = 10;
    config.kappa = 1.0;
    config.frequencies.resize(1000);
    winfree::SplitMix64 rng(42);
    for (double& nu : config.frequencies) nu = rng.uniform_open(-5.0, 5.0);
    const winfree::Model model(config);

    std::vector<double> theta(config.frequencies.size());
    for (double& t : theta) t = rng.uniform_open(-3.0, 3.0);
    std::vector<double> dtheta(theta.size());

    const int repeats = 2000;
    const auto start = std::chrono::steady_clock::now();
    double sink = 0.0;
    for (int r = 0; r < repeats; ++r) {
        model.rhs(theta, dtheta);
        sink += dtheta.back();
        theta.front() += 1e-9;  // vary the input so the loop cannot be folded
    }
    const double elapsed = seconds_since(start);
    std::printf("rhs: N=%zu, %d calls, %.3f s total, %.1f ns/oscillator (sink %.3g)\n",
                theta.size(), repeats, elapsed,
                elapsed / repeats / static_cast<double>(theta.size()) * 1e9, sink);
}

int bench_sweep(bool quick) {
    winfree::SweepSpec spec;
    spec.n_values = {1, 5};
    spec.kappa_min = 0.0;
    spec.kappa_max = 2.0;
    spec.kappa_step = 0.25;
    spec.frequencies = {5.4, 5.8, 6.2, 6.6, 7.0, 7.4, 7.8, 8.2, 8.6, 9.0};
    spec.ic_alpha = 1.5707963267948966;
    spec.seeds = {1, 2};
    spec.sim.dt = 1e-2;
    spec.sim.t_end = quick ? 50.0 : 200.0;
    spec.sim.stride = 10;

    auto start = std::chrono::steady_clock::now();
    const std::vector<winfree::SweepCell> serial = winfree::run_sweep_serial(spec);
    const double serial_time = seconds_since(start);

    const int workers = omp_get_max_threads();
    start = std::chrono::steady_clock::now();
    const std::vector<winfree::SweepCell> parallel = winfree::run_sweep(spec, workers);
    const double parallel_time = seconds_since(start);

    if (serial.size() != parallel.size()) {
        std::fprintf(stderr, "sweep: cell count mismatch\n");
        return 1;
    }
    for (std::size_t i = 0; i < serial.size(); ++i) {
        if (serial[i].label != parallel[i].label ||
            serial[i].rho_mean != parallel[i].rho_mean ||
            serial[i].rho_spread != parallel[i].rho_spread) {
            std::fprintf(stderr, "sweep: cell %zu differs between serial and parallel\n", i);
            return 1;
        }
    }
    std::printf("sweep: %zu cells, serial %.3f s, parallel(%d workers) %.3f s, speedup %.2fx\n",
                serial.size(), serial_time, workers, parallel_time,
                serial_time / parallel_time);
    std::printf("sweep: serial and parallel results identical\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            quick = true;
        } else {
            std::fprintf(stderr, "usage: %s [--quick]\n", argv[0]);
            return 2;
        }
    }
    bench_rhs();
    return bench_sweep(quick);
}
