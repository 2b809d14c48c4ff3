// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hammerstein/benchmark.hpp"
#include "hammerstein/errors.hpp"
#include "hammerstein/estimators.hpp"
#include "hammerstein/kernels.hpp"
#include "hammerstein/metrics.hpp"
#include "hammerstein/model.hpp"
#include "oracles.hpp"

using namespace hammerstein;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %d. %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct PipelineRun {
  HammersteinSystem sys;
  Dataset data;
  Matrix F;
};

PipelineRun pipeline_run(std::uint64_t seed, int N, int n, int p, double snr) {
  Rng rng = substream(seed, 0xacce55ULL);
  PipelineRun r;
  r.sys = random_system(rng, n, p);
  const Vector u = gaussian_input(rng, N);
  const double sigma2 = snr > 0.0 ? snr_to_sigma2(r.sys, u, snr) : 0.0;
  r.data = simulate(r.sys, u, std::sqrt(sigma2), rng);
  r.F = basis_matrix(u, BasisSet{p});
  return r;
}

}  // namespace

int main() {
  criterion(1, "Toeplitz operator equals [I S ... S^{n-1}](I (x) a)", [] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<int> dim(1, 50);
    std::uniform_int_distribution<int> ints(-9, 9);
    double worst = 0.0;
    bool exact = true;
    for (int trial = 0; trial < 200; ++trial) {
      const int m = dim(rng);
      const int n = std::uniform_int_distribution<int>(1, m)(rng);
      Vector a_int(m);
      for (int i = 0; i < m; ++i) a_int[i] = ints(rng);
      exact = exact && toeplitz_vec(a_int, n) == oracle::block_toeplitz(a_int, n);
      const Vector a = oracle::random_vector(rng, m);
      const Matrix ref = oracle::block_toeplitz(a, n);
      worst = std::max(worst, (toeplitz_vec(a, n) - ref).cwiseAbs().maxCoeff());
    }
    const double secs = elapsed(t0);
    return Outcome{exact && worst <= 1e-14 && secs < 1.0,
                   fmt("integer exact=%s float max|diff|=%.2e runtime=%.3fs (limits 1e-14, 1s)", exact ? "yes" : "no",
                       worst, secs)};
  });

  criterion(2, "Kernel identity Phi H Phi^T = W K W^T", [] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1002);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int N = std::uniform_int_distribution<int>(1, 60)(rng);
      const int n = std::uniform_int_distribution<int>(1, 6)(rng);
      const int p = std::uniform_int_distribution<int>(1, 4)(rng);
      const double beta = std::uniform_real_distribution<double>(0.0, 0.99)(rng);
      const Matrix F = oracle::legendre_matrix(oracle::random_vector(rng, N, -2, 2), p);
      const Vector c = oracle::random_vector(rng, p);
      const Matrix Phi = toeplitz_mat(F, n);
      const Matrix W = toeplitz_vec(F * c, n);
      const Matrix lhs = Phi * kop_kernel(beta, c, n) * Phi.transpose();
      const Matrix rhs = W * stable_spline(beta, n) * W.transpose();
      worst = std::max(worst, oracle::rel_diff(lhs, rhs));
    }
    const double secs = elapsed(t0);
    return Outcome{worst <= 1e-10 && secs < 5.0,
                   fmt("max relative Frobenius diff=%.2e runtime=%.3fs (limits 1e-10, 5s)", worst, secs)};
  });

  criterion(3, "Phi-form and W-form marginal likelihoods agree", [] {
    std::mt19937_64 rng(1003);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int N = std::uniform_int_distribution<int>(10, 60)(rng);
      const int n = std::uniform_int_distribution<int>(1, 6)(rng);
      const int p = std::uniform_int_distribution<int>(1, 4)(rng);
      const Vector u = oracle::random_vector(rng, N, -2, 2);
      const Matrix F = oracle::legendre_matrix(u, p);
      Hyperparameters h;
      h.beta = std::uniform_real_distribution<double>(0.01, 0.98)(rng);
      h.c = oracle::random_vector(rng, p);
      h.sigma2 = std::exp(std::uniform_real_distribution<double>(std::log(1e-3), std::log(10.0))(rng));
      // Data drawn from the model itself at these hyperparameters.
      const Vector g = oracle::random_vector(rng, n);
      Vector y = toeplitz_vec(F * h.c, n) * g;
      std::normal_distribution<double> noise(0.0, std::sqrt(h.sigma2));
      for (int t = 0; t < N; ++t) y[t] += noise(rng);
      const double phi = neg_log_marginal(y, F, n, h, LikelihoodForm::DensePhi);
      const double w = neg_log_marginal(y, F, n, h, LikelihoodForm::Woodbury);
      worst = std::max(worst, oracle::rel_diff(phi, w));
    }
    return Outcome{worst <= 1e-8, fmt("max relative diff=%.2e over 100 draws (limit 1e-8)", worst)};
  });

  criterion(4, "KOP estimate is a KOP vector equal to g-space estimate (x) c; LS-OP is not", [] {
    const int N = 1000, n = 30, p = 5;
    const double snrs[] = {10.0, 20.0, 50.0, 100.0};
    double worst_kop_ratio = 0.0, worst_match = 0.0, worst_dense = 0.0;
    double min_ls_ratio = 1e300;
    for (int run = 0; run < 20; ++run) {
      const PipelineRun r = pipeline_run(4000 + run, N, n, p, snrs[run % 4]);
      const EstimateReport kop = kop_estimate(r.data.y, r.data.u, BasisSet{p}, n, 17 + run);
      const Hyperparameters& h = *kop.hyper;
      worst_kop_ratio = std::max(worst_kop_ratio, rank_one_ratio(kop.theta_hat, n, p));
      const Matrix W = toeplitz_vec(r.F * h.c, n);
      const Vector gs = g_space_estimate(r.data.y, W, h.beta, h.sigma2);
      worst_match = std::max(worst_match, oracle::rel_diff(kop.theta_hat, kron(gs, h.c)));

      // Posterior mean evaluated directly as H Phi^T Sigma^-1 y (informational).
      const Matrix Phi = toeplitz_mat(r.F, n);
      const Matrix H = kop_kernel(h.beta, h.c, n);
      Matrix Sigma = Phi * H * Phi.transpose();
      Sigma.diagonal().array() += h.sigma2;
      const Vector dense = H * Phi.transpose() * Sigma.llt().solve(r.data.y);
      worst_dense = std::max(worst_dense, oracle::rel_diff(kop.theta_hat, dense));

      const EstimateReport ls = ls_op(r.data.y, Phi, n, p);
      min_ls_ratio = std::min(min_ls_ratio, ls.diagnostics.rank_ratio);
    }
    const bool pass = worst_kop_ratio < 1e-8 && worst_match <= 1e-8 && min_ls_ratio > 1e-3;
    return Outcome{pass, fmt("KOP max s2/s1=%.2e (<1e-8), max |theta - g_space (x) c|=%.2e (<=1e-8), "
                             "LS-OP min s2/s1=%.3e (>1e-3); dense H Phi^T Sigma^-1 y diff=%.2e",
                             worst_kop_ratio, worst_match, min_ls_ratio, worst_dense)};
  });

  criterion(5, "Posterior mean equals dense Gaussian conditioning", [] {
    std::mt19937_64 rng(1005);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      const int N = 40, n = 4, p = 2;
      const Matrix F = oracle::legendre_matrix(oracle::random_vector(rng, N, -2, 2), p);
      Hyperparameters h;
      h.beta = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      h.c = oracle::random_vector(rng, p);
      h.sigma2 = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
      const Vector y = oracle::random_vector(rng, N, -2, 2);
      const Matrix Phi = oracle::block_toeplitz(F, n);
      const Matrix H = oracle::dense_kron(oracle::tc_kernel(h.beta, n), h.c * h.c.transpose());
      const Vector expect = oracle::gaussian_conditional_mean(Phi, H, h.sigma2, y);
      worst = std::max(worst, (kop_posterior_mean(y, F, n, h) - expect).cwiseAbs().maxCoeff() /
                                  std::max(1.0, expect.cwiseAbs().maxCoeff()));
    }
    return Outcome{worst <= 1e-8, fmt("max diff=%.2e over 25 draws (limit 1e-8)", worst)};
  });

  criterion(6, "Noiseless recovery (N=500, n=10, p=3)", [] {
    double ls_g = 1e300, ls_f = 1e300, kop_g = 1e300;
    for (int s = 0; s < 5; ++s) {
      const PipelineRun r = pipeline_run(6000 + s, 500, 10, 3, 0.0);
      const EstimateReport ls = ls_op(r.data.y, toeplitz_mat(r.F, 10), 10, 3);
      const EstimateReport kop = kop_estimate(r.data.y, r.data.u, BasisSet{3}, 10, 5 + s);
      const Vector f = r.F * r.sys.c;
      ls_g = std::min(ls_g, fit_g(r.sys.g, ls.g_hat));
      ls_f = std::min(ls_f, fit_f(f, r.F * ls.c_hat));
      kop_g = std::min(kop_g, fit_g(r.sys.g, kop.g_hat));
    }
    return Outcome{ls_g > 99.9 && ls_f > 99.9 && kop_g > 95.0,
                   fmt("worst of 5 systems: LS-OP FIT_g=%.4f FIT_f=%.4f (>99.9), KOP FIT_g=%.4f (>95)", ls_g, ls_f,
                       kop_g)};
  });

  criterion(7, "Desk-scale Monte Carlo ordering (20 runs, SNR 10 and 100)", [] {
    ExperimentConfig cfg;
    cfg.runs = 20;
    cfg.snr = {10.0, 100.0};
    cfg.N = 1000;
    cfg.n = 30;
    cfg.p = 5;
    cfg.seed = 2016;
    cfg.workers = 1;
    cfg.out = std::filesystem::temp_directory_path() / "hammerstein_acceptance_mc";
    const auto t0 = Clock::now();
    const BenchmarkOutcome out = run_benchmark(cfg);
    const double secs = elapsed(t0);
    auto row = [&](double snr, const std::string& est) {
      for (const auto& r : out.summary)
        if (r.snr == snr && r.estimator == est) return r;
      throw InternalConsistency("missing summary row");
    };
    const auto k10 = row(10.0, "kop"), l10 = row(10.0, "lsop"), k100 = row(100.0, "kop"), l100 = row(100.0, "lsop");
    const bool ordering = k10.fit_g_median > l10.fit_g_median;
    const bool kop_f = k100.fit_f_median >= 80.0;
    const bool ls_f = l100.fit_f_median >= 80.0;
    const bool pass = ordering && kop_f && ls_f && secs < 600.0 && out.failures == 0;
    return Outcome{pass, fmt("SNR10 median FIT_g KOP=%.2f vs LS-OP=%.2f [%s]; SNR100 median FIT_f KOP=%.2f [%s] "
                             "LS-OP=%.2f [%s] (>=80); failures=%d runtime=%.1fs (<600s)",
                             k10.fit_g_median, l10.fit_g_median, ordering ? "ok" : "violated", k100.fit_f_median,
                             kop_f ? "ok" : "below", l100.fit_f_median, ls_f ? "ok" : "below", out.failures, secs)};
  });

  criterion(8, "Benchmark determinism across invocations and worker counts", [] {
    ExperimentConfig cfg;
    cfg.runs = 2;
    cfg.snr = {100.0};
    cfg.seed = 7;
    const auto base = std::filesystem::temp_directory_path() / "hammerstein_acceptance_det";
    std::vector<std::string> csvs;
    for (auto [tag, workers] : {std::pair{"a", 1}, std::pair{"b", 1}, std::pair{"c", 4}}) {
      cfg.workers = workers;
      cfg.out = base / tag;
      run_benchmark(cfg);
      csvs.push_back(slurp(cfg.out / "runs.csv"));
    }
    std::filesystem::remove_all(base);
    const bool same = !csvs[0].empty() && csvs[0] == csvs[1] && csvs[0] == csvs[2];
    return Outcome{same, fmt("runs.csv %zu bytes; repeat identical=%s, workers 1 vs 4 identical=%s", csvs[0].size(),
                             csvs[0] == csvs[1] ? "yes" : "no", csvs[0] == csvs[2] ? "yes" : "no")};
  });

  criterion(9, "KOP decomposition round trip in the unit-norm positive-lead gauge", [] {
    std::mt19937_64 rng(1009);
    std::uniform_int_distribution<int> dim(1, 40);
    std::uniform_real_distribution<double> mag(0.1, 10.0);
    double worst = 0.0;
    bool gauge = true;
    for (int trial = 0; trial < 500; ++trial) {
      const int n = dim(rng), p = dim(rng) % 8 + 1;
      Vector g = oracle::random_vector(rng, n);
      Vector c = oracle::random_vector(rng, p);
      if (trial % 5 == 1) {
        g = -g;
        c = -c;
      } else if (trial % 5 == 2) {
        const double alpha = (trial % 2 ? -1.0 : 1.0) * mag(rng);
        g *= alpha;
        c /= alpha;
      } else if (trial % 5 == 3 && n > 1) {
        g[0] = 0.0;  // transport delay: leading tap is zero
      }
      const Vector theta = kron(g, c);
      const KopFactorization f = decompose_kop(theta, n, p);
      worst = std::max(worst, (kron(f.g, f.c) - theta).norm() / theta.norm());
      const int lead = first_significant(f.g);
      gauge = gauge && std::abs(f.g.norm() - 1.0) < 1e-12 && lead >= 0 && f.g[lead] > 0.0;
      // Same representative as the unscaled reference.
      const Vector ref = g * (leading_sign(g) / g.norm());
      worst = std::max(worst, (f.g - ref).norm());
    }
    return Outcome{gauge && worst < 1e-10,
                   fmt("500 draws: max reconstruction/gauge error=%.2e (<1e-10), gauge holds=%s", worst,
                       gauge ? "yes" : "no")};
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED", failures);
  return failures ? 1 : 0;
}
