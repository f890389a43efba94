// Timing comparison of the OpenMP kernels against their serial reference:
// terminal sampling and vol-surface grid fill. The two paths must produce
// bit-identical output (asserted here as well), so the benchmark doubles as
// a smoke test for the determinism contract.
#include <chrono>
#include <cstdio>
#include <vector>

#include "bilgamma/measures.hpp"
#include "bilgamma/mcoracle.hpp"
#include "bilgamma/pricer.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bilgamma;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

int main()
{
    const BilateralGammaParams model{1.55, 133.96, 0.94, 88.92};
    const MarketParams market{0.0, 0.0, 5000.0};
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    // kernel 1: terminal sampling
    const auto bil = solve_bilateral_esscher(model, market);
    mc::SimConfig sim;
    sim.n_samples = 4'000'000;
    sim.seed = 20240811;

    auto t0 = std::chrono::steady_clock::now();
    const auto serial = mc::sample_terminal(bil.law, 0.5, sim, Execution::Serial);
    const double t_serial = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel = mc::sample_terminal(bil.law, 0.5, sim, Execution::Parallel);
    const double t_parallel = ms_since(t0);

    if (serial != parallel) {
        std::printf("FAIL: parallel sampling differs from the serial reference\n");
        return 1;
    }
    std::printf("sample_terminal  n=%llu   serial %8.1f ms   parallel %8.1f ms   speedup %.2fx\n",
                static_cast<unsigned long long>(sim.n_samples), t_serial, t_parallel,
                t_serial / t_parallel);

    // kernel 2: vol-surface grid fill
    std::vector<double> strikes;
    for (int j = 0; j <= 16; ++j)
        strikes.push_back(4000.0 + 125.0 * j);
    const std::vector<double> mats{0.25, 0.5, 0.75, 1.0, 1.5, 2.0};

    t0 = std::chrono::steady_clock::now();
    const auto surf_serial =
        vol_surface(bil.law, market, strikes, mats, ContourSettings{}, Execution::Serial);
    const double s_serial = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto surf_parallel =
        vol_surface(bil.law, market, strikes, mats, ContourSettings{}, Execution::Parallel);
    const double s_parallel = ms_since(t0);

    if (surf_serial.prices != surf_parallel.prices ||
        surf_serial.implied_vols != surf_parallel.implied_vols) {
        std::printf("FAIL: parallel surface differs from the serial reference\n");
        return 1;
    }
    std::printf("vol_surface      %zux%zu      serial %8.1f ms   parallel %8.1f ms   speedup %.2fx\n",
                mats.size(), strikes.size(), s_serial, s_parallel, s_serial / s_parallel);
    return 0;
}
