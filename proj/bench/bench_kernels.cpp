// Timings for the parallel kernels against their serial reference paths.
// Run from the build directory: ./bench_kernels [repeats]
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "invsub/mc.hpp"
#include "invsub/renewal.hpp"

using namespace invsub;
using clk = std::chrono::steady_clock;

namespace {

double best_of(int repeats, const std::function<void()>& work) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = clk::now();
        work();
        const auto t1 = clk::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-24s %10.1f %10.1f %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("%-24s %10s %10s %9s\n", "kernel", "serial/ms", "parallel/ms", "speedup");

    {
        const LaplaceFunction f = renewal_transform(gamma_model(1.0, 1.0));
        std::vector<double> grid(4000);
        for (std::size_t i = 0; i < grid.size(); ++i)
            grid[i] = 0.001 * static_cast<double>(i + 1);
        volatile double sink = 0.0;
        const double s = best_of(repeats, [&] { sink = invert_grid(f, grid, {}, false)[10]; });
        const double p = best_of(repeats, [&] { sink = invert_grid(f, grid, {}, true)[10]; });
        (void)sink;
        row("invert_grid", s, p);
    }
    {
        const auto m = gamma_model(1.0, 1.0);
        volatile double sink = 0.0;
        const double s =
            best_of(repeats, [&] { sink = build_renewal_grid(m, 5e-4, 2.0, {}, false).values.back(); });
        const double p =
            best_of(repeats, [&] { sink = build_renewal_grid(m, 5e-4, 2.0, {}, true).values.back(); });
        (void)sink;
        row("build_renewal_grid", s, p);
    }
    {
        const RenewalGrid g = build_renewal_grid(compound_poisson_exp(1.0, 1.0), 5e-4, 4.0);
        const auto f = [](double x) { return 1.0 / (1.0 + x); };
        volatile double sink = 0.0;
        const double s = best_of(repeats, [&] { sink = convolve_with_dU(g, f, false).back(); });
        const double p = best_of(repeats, [&] { sink = convolve_with_dU(g, f, true).back(); });
        (void)sink;
        row("convolve_with_dU", s, p);
    }
    {
        const auto m = stable_model(0.5);
        McConfig mc;
        mc.n_paths = 20000;
        mc.seed = 7;
        mc.delta = 1e-3;
        volatile double sink = 0.0;
        mc.parallel = false;
        const double s = best_of(repeats, [&] { sink = estimate_joint_moment(m, {{1.0}, {1}}, mc).estimate; });
        mc.parallel = true;
        const double p = best_of(repeats, [&] { sink = estimate_joint_moment(m, {{1.0}, {1}}, mc).estimate; });
        (void)sink;
        row("estimate_joint_moment", s, p);
    }
    return 0;
}
