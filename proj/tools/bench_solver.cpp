// Compares the serial and OpenMP value-iteration kernels on a mid-size
// instance and checks they produce identical sweeps.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "slatefree/catalog.hpp"
#include "slatefree/exact_solver.hpp"
#include "slatefree/user_model.hpp"

using namespace slatefree;

int main() {
    const int k = 14, n = 5;
    auto catalog = build_catalog(k, {{0, 5.0}, {1, 0.0}, {7, 4.0}, {9, 8.0}}, 20240817);
    auto model = UserModel::user1(k, 0.75);

    using clock = std::chrono::steady_clock;

    auto t0 = clock::now();
    auto serial = value_iteration(model, catalog, n, 0.85, CostMode::StateOnly, 1e-12, false);
    auto t1 = clock::now();
    auto parallel = value_iteration(model, catalog, n, 0.85, CostMode::StateOnly, 1e-12, true);
    auto t2 = clock::now();

    double max_diff = 0.0;
    for (int s = 0; s < k; ++s)
        max_diff = std::max(max_diff, std::abs(serial.values[s] - parallel.values[s]));

    const double ms_serial = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double ms_parallel = std::chrono::duration<double, std::milli>(t2 - t1).count();
    std::printf("value iteration, K=%d N=%d, %d sweeps\n", k, n, serial.iterations);
    std::printf("  serial   : %8.1f ms\n", ms_serial);
    std::printf("  openmp   : %8.1f ms  (speedup %.2fx)\n", ms_parallel, ms_serial / ms_parallel);
    std::printf("  max |V_serial - V_omp| = %.3g\n", max_diff);
    return max_diff == 0.0 ? 0 : 1;
}
