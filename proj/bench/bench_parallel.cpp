// Serial reference vs OpenMP variant for the Toeplitz Gram kernel and the
// Monte Carlo run loop. Usage: bench_parallel [threads] [runs]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "hammerstein/benchmark.hpp"
#include "hammerstein/parallel.hpp"

using namespace hammerstein;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  const int runs = argc > 2 ? std::atoi(argv[2]) : 4;
  omp_set_num_threads(threads);
  std::printf("threads=%d (hardware reports %d)\n", threads, omp_get_num_procs());

  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd;
  std::printf("%-28s %12s %12s %8s %s\n", "toeplitz_gram N x n", "serial [s]", "omp [s]", "speedup", "identical");
  for (auto [N, n] : {std::pair{1000, 30}, std::pair{5000, 100}, std::pair{20000, 200}}) {
    Vector w(N), y(N);
    for (int i = 0; i < N; ++i) w[i] = nd(rng), y[i] = nd(rng);
    parallel::ToeplitzGram a, b;
    const double ts = best_of(5, [&] { a = parallel::toeplitz_gram_serial(w, y, n); });
    const double tp = best_of(5, [&] { b = parallel::toeplitz_gram_omp(w, y, n); });
    const bool same = a.gram == b.gram && a.cross == b.cross;
    std::printf("%6d x %-19d %12.5f %12.5f %8.2f %s\n", N, n, ts, tp, ts / tp, same ? "yes" : "NO");
  }

  ExperimentConfig cfg;
  cfg.runs = runs;
  cfg.snr = {10.0, 100.0};
  std::vector<RunResult> serial, par;
  cfg.workers = 1;
  const double ts = best_of(1, [&] { serial = run_all(cfg); });
  cfg.workers = threads;
  const double tp = best_of(1, [&] { par = run_all(cfg); });
  bool same = serial.size() == par.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i)
    for (std::size_t e = 0; same && e < serial[i].outcomes.size(); ++e)
      same = serial[i].outcomes[e].fit_g == par[i].outcomes[e].fit_g &&
             serial[i].outcomes[e].fit_f == par[i].outcomes[e].fit_f;
  std::printf("run_all %d runs x 2 SNR: workers=1 %.3fs, workers=%d %.3fs, speedup %.2f, identical=%s\n", runs, ts,
              threads, tp, ts / tp, same ? "yes" : "NO");
  return same ? 0 : 1;
}
