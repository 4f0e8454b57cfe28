// Times the OpenMP kernels against the serial reference paths and checks that
// both routes agree: value-iteration sweeps (precomputed expectations vs the
// naive per-state double sum) and Monte Carlo episode batches (1 thread vs
// all threads, which must be bit-identical).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "batchq/mdp.hpp"
#include "batchq/model.hpp"
#include "batchq/sim.hpp"

using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

int threads_in_use() {
#ifdef _OPENMP
    int n = 1;
#pragma omp parallel
    {
#pragma omp single
        n = omp_get_num_threads();
    }
    return n;
#else
    return 1;
#endif
}

void bench_sweep(const batchq::ModelParams& params, int xmax, int reps) {
    using namespace batchq;
    const TruncatedPmf pmf1 = poisson_pmf(params.lambda1, 1e-12);
    const TruncatedPmf pmf2 = poisson_pmf(params.lambda2, 1e-12);
    const size_t n = static_cast<size_t>(xmax + 1) * (xmax + 1);
    std::vector<double> v(n, 0.0), out_kernel(n, 0.0), out_reference(n, 0.0);
    // a few warm sweeps so the input grid is not trivially zero
    for (int i = 0; i < 5; ++i) {
        bellman_sweep(params, pmf1, pmf2, v, out_kernel, xmax);
        v.swap(out_kernel);
    }

    auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) bellman_sweep(params, pmf1, pmf2, v, out_kernel, xmax);
    const double t_kernel = ms_since(t0) / reps;

    t0 = clock_type::now();
    bellman_sweep_reference(params, pmf1, pmf2, v, out_reference, xmax);
    const double t_reference = ms_since(t0);

    double max_diff = 0.0;
    for (size_t i = 0; i < n; ++i) {
        max_diff = std::max(max_diff, std::abs(out_kernel[i] - out_reference[i]));
    }
    std::printf("sweep xmax=%-4d  reference %9.3f ms   kernel %8.3f ms   speedup %7.1fx   max|diff| %.2e\n",
                xmax, t_reference, t_kernel, t_reference / t_kernel, max_diff);
}

void bench_sim(const batchq::ModelParams& params, long episodes) {
    using namespace batchq;
    SimConfig config;
    config.episodes = episodes;
    config.horizon = 200;
    config.seed = 7;
    const QueueState init{90, 9};
    const PolicyRef policy = CyclicPolicy{4};

#ifdef _OPENMP
    const int full = threads_in_use();
    omp_set_num_threads(1);
#endif
    auto t0 = clock_type::now();
    const SimEstimate serial = simulate(params, policy, init, config);
    const double t_serial = ms_since(t0);
#ifdef _OPENMP
    omp_set_num_threads(full);
#endif
    t0 = clock_type::now();
    const SimEstimate parallel = simulate(params, policy, init, config);
    const double t_parallel = ms_since(t0);

    const bool identical = serial.mean == parallel.mean && serial.std_error == parallel.std_error;
    std::printf("sim   episodes=%-7ld 1 thread %8.1f ms   threads %8.1f ms   speedup %5.1fx   bit-identical %s\n",
                episodes, t_serial, t_parallel, t_serial / t_parallel,
                identical ? "yes" : "NO");
}

}  // namespace

int main() {
    const batchq::ModelParams params = batchq::make_params(1.0, 9.0, 0.8);
    std::printf("threads: %d\n", threads_in_use());
    bench_sweep(params, 48, 50);
    bench_sweep(params, 96, 20);
    bench_sweep(params, 160, 10);
    bench_sim(params, 20000);
    bench_sim(params, 100000);
    return 0;
}
