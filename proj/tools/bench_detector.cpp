// Benchmarks the Monte-Carlo trial runner serially and with the OpenMP worker
// pool, verifies that both produce identical error counts, and reports the
// single-image cost of the two detector kernels.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mrf2d/montecarlo.hpp"
#include "mrf2d/rng.hpp"

using namespace mrf2d;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Scenario bench_scenario(int trials) {
  Scenario s;
  s.rows = 64;
  s.cols = 64;
  s.true_params = make_ising_params(0.5, -3.0);
  s.assumed_params = s.true_params;
  s.snr_grid_db = {14.0};
  s.trials = trials;
  s.min_error_events = std::numeric_limits<std::int64_t>::max();
  s.master_seed = 9;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const int trials = argc > 1 ? std::atoi(argv[1]) : 32;

#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#else
  const int max_threads = 1;
#endif
  std::printf("trials per run: %d, available threads: %d\n\n", trials, max_threads);

  // Single-image kernel costs.
  {
    Scenario s = bench_scenario(1);
    s.threads = 1;
    auto t0 = Clock::now();
    auto records = run_ber_sweep(s);
    std::printf("concatenated detect (64x64, 5 outer iterations): %.1f ms/image\n",
                1e3 * seconds_since(t0));

    s.mode = Mode::IsiOnly;
    t0 = Clock::now();
    records = run_ber_sweep(s);
    std::printf("isi-only detect:                                 %.1f ms/image\n",
                1e3 * seconds_since(t0));

    s.mode = Mode::GgAlone;
    t0 = Clock::now();
    records = run_ber_sweep(s);
    std::printf("gg-alone relaxation:                             %.1f ms/image\n\n",
                1e3 * seconds_since(t0));
  }

  // Serial reference vs worker pool on one SNR point.
  Scenario serial = bench_scenario(trials);
  serial.threads = 1;
  auto t0 = Clock::now();
  const auto ref = run_ber_sweep(serial);
  const double t_serial = seconds_since(t0);
  std::printf("serial reference:   %6.2f s (%lld errors)\n", t_serial,
              static_cast<long long>(ref[0].bit_errors));

  Scenario parallel = bench_scenario(trials);
  parallel.threads = max_threads;
  t0 = Clock::now();
  const auto par = run_ber_sweep(parallel);
  const double t_parallel = seconds_since(t0);
  std::printf("openmp pool (%d):    %6.2f s (%lld errors)\n", max_threads, t_parallel,
              static_cast<long long>(par[0].bit_errors));

  if (ref[0].bit_errors != par[0].bit_errors || ref[0].per_iteration_errors != par[0].per_iteration_errors) {
    std::printf("MISMATCH: serial and parallel runs disagree\n");
    return 1;
  }
  std::printf("results identical; speedup %.2fx\n", t_serial / t_parallel);
  return 0;
}
