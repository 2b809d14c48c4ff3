#include "hammerstein/estimators.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "hammerstein/errors.hpp"
#include "hammerstein/kernels.hpp"
#include "hammerstein/parallel.hpp"

namespace hammerstein {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Product-form limit for the dense QR path; larger problems use the normal
// equations.
constexpr double kQrMaxEntries = 5e7;

constexpr double kJitterStart = 1e-12;
constexpr double kJitterStop = 1e-6;

// Cholesky with escalating diagonal jitter, scaled by the mean diagonal.
Eigen::LLT<Matrix> jittered_llt(Matrix A, double& jitter_used) {
  const double scale = A.trace() / static_cast<double>(A.rows());
  Eigen::LLT<Matrix> llt(A);
  jitter_used = 0.0;
  double rel = kJitterStart;
  while (llt.info() != Eigen::Success) {
    if (rel > kJitterStop * 1.0001 || !std::isfinite(scale))
      throw NumericalError("covariance is not positive definite after jitter");
    jitter_used = rel * scale;
    A.diagonal().array() += jitter_used;
    llt.compute(A);
    A.diagonal().array() -= jitter_used;
    rel *= 10.0;
  }
  return llt;
}

double logdet(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// (W g)_t = sum_{i <= t} w[t - i] g_i.
Vector toeplitz_apply(const Vector& w, const Vector& g) {
  const Eigen::Index N = w.size();
  const Eigen::Index n = g.size();
  Vector out(N);
  for (Eigen::Index t = 0; t < N; ++t) {
    double acc = 0.0;
    const Eigen::Index last = std::min<Eigen::Index>(t, n - 1);
    for (Eigen::Index i = 0; i <= last; ++i) acc += w[t - i] * g[i];
    out[t] = acc;
  }
  return out;
}

// Sigma = U U^T + sigma2 I with U = W L, L the closed-form stable spline factor.
// Woodbury/determinant lemma on the n x n core A = sigma2 I + U^T U.
struct WoodburyCore {
  Vector v;       // A^-1 U^T y
  Vector g_raw;   // L v = K W^T Sigma^-1 y
  double nll = 0.0;
  double jitter = 0.0;
};

WoodburyCore solve_core(const Matrix& UtU, const Vector& z, const Vector& s, double sigma2, const Vector& y,
                        const std::function<Vector(const Vector&)>& apply_W) {
  const Eigen::Index n = s.size();
  const Eigen::Index N = y.size();
  Matrix A = UtU;
  A.diagonal().array() += sigma2;
  WoodburyCore core;
  const auto llt = jittered_llt(A, core.jitter);
  core.v = llt.solve(z);

  core.g_raw.resize(n);
  double acc = 0.0;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    acc += s[k] * core.v[k];
    core.g_raw[k] = acc;
  }
  // y^T Sigma^-1 y = (||y - U v||^2 + sigma2 ||v||^2) / sigma2, free of the
  // cancellation in y^T y - z^T A^-1 z.
  const Vector resid = y - apply_W(core.g_raw);
  const double quad = (resid.squaredNorm() + sigma2 * core.v.squaredNorm()) / sigma2;
  core.nll = static_cast<double>(N - n) * std::log(sigma2) + logdet(llt) + quad;
  if (!std::isfinite(core.nll)) throw NumericalError("marginal likelihood is not finite");
  return core;
}

WoodburyCore core_from_signal(const Vector& y, const Vector& w, int n, double beta, double sigma2) {
  const Vector s = stable_spline_increments(beta, n);
  const auto gram = parallel::toeplitz_gram(w, y, n);
  // U^T U (k, l) = s_k s_l sum_{i<=k, j<=l} G(i, j); z_k = s_k sum_{i<=k} r_i.
  Matrix P = gram.gram;
  for (int i = 1; i < n; ++i) P.row(i) += P.row(i - 1);
  for (int j = 1; j < n; ++j) P.col(j) += P.col(j - 1);
  const Matrix UtU = s.asDiagonal() * P * s.asDiagonal();
  Vector z(n);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += gram.cross[k];
    z[k] = s[k] * acc;
  }
  return solve_core(UtU, z, s, sigma2, y, [&](const Vector& g) { return toeplitz_apply(w, g); });
}

double dense_nll(const Vector& y, const Matrix& Sigma) {
  double jitter = 0.0;
  const auto llt = jittered_llt(Sigma, jitter);
  const double val = logdet(llt) + y.dot(llt.solve(y));
  if (!std::isfinite(val)) throw NumericalError("marginal likelihood is not finite");
  return val;
}

void check_data(const Vector& y, const Matrix& F, int n) {
  if (y.size() == 0) throw InvalidArgument("empty output data");
  if (F.rows() != y.size()) throw InvalidArgument("basis matrix rows must match the output length");
  if (n < 1) throw InvalidArgument("impulse response length must be positive");
}

double sample_variance(const Vector& r) {
  if (r.size() < 2) return r.squaredNorm();
  return (r.array() - r.mean()).square().sum() / static_cast<double>(r.size() - 1);
}

}  // namespace

void validate(const Hyperparameters& h) {
  check_beta(h.beta);
  if (!(h.sigma2 > 0.0) || !std::isfinite(h.sigma2))
    throw InvalidHyperparameter("noise variance must be positive and finite");
  if (h.c.size() == 0) throw InvalidHyperparameter("nonlinearity coefficients are empty");
  if (!h.c.allFinite()) throw InvalidHyperparameter("nonlinearity coefficients must be finite");
}

LeastSquaresFit least_squares(const Vector& y, const Matrix& Phi) {
  if (Phi.rows() != y.size()) throw InvalidArgument("least_squares: regressor rows must match the output length");
  if (Phi.rows() < Phi.cols())
    throw IllPosed("least_squares: fewer samples than parameters", std::numeric_limits<double>::infinity());

  LeastSquaresFit fit;
  if (static_cast<double>(Phi.rows()) * Phi.cols() <= kQrMaxEntries) {
    Eigen::ColPivHouseholderQR<Matrix> qr(Phi);
    const auto diag = qr.matrixQR().diagonal().cwiseAbs();
    const double top = diag.size() ? diag[0] : 0.0;
    const double bottom = diag.size() ? diag[diag.size() - 1] : 0.0;
    fit.condition = bottom > 0.0 ? top / bottom : std::numeric_limits<double>::infinity();
    if (qr.rank() < Phi.cols())
      throw IllPosed("least_squares: regressor is rank deficient (condition estimate " +
                         std::to_string(fit.condition) + ")",
                     fit.condition);
    fit.theta = qr.solve(y);
  } else {
    const Matrix G = Phi.transpose() * Phi;
    Eigen::LLT<Matrix> llt(G);
    const Vector d = llt.matrixLLT().diagonal();
    fit.condition = d.minCoeff() > 0.0 ? std::pow(d.maxCoeff() / d.minCoeff(), 2) : std::numeric_limits<double>::infinity();
    if (llt.info() != Eigen::Success || fit.condition > 1e14)
      throw IllPosed("least_squares: normal equations are singular", fit.condition);
    fit.theta = llt.solve(Phi.transpose() * y);
  }
  fit.residual_variance = sample_variance(y - Phi * fit.theta);
  return fit;
}

EstimateReport ls_op(const Vector& y, const Matrix& Phi, int n, int p) {
  const auto t0 = Clock::now();
  if (Phi.cols() != static_cast<Eigen::Index>(n) * p)
    throw InvalidArgument("ls_op: regressor must have n*p columns");
  const LeastSquaresFit fit = least_squares(y, Phi);
  if (fit.theta.norm() == 0.0) throw IllPosed("ls_op: least-squares estimate is zero", fit.condition);

  const Matrix M = reshape_kop(fit.theta, n, p);
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector s = svd.singularValues();
  const Vector v1 = svd.matrixV().col(0);
  const Vector u1 = svd.matrixU().col(0);
  const double sign = leading_sign(v1);

  EstimateReport rep;
  rep.method = "lsop";
  rep.theta_hat = fit.theta;
  rep.g_hat = sign * v1;
  rep.c_hat = (sign * s[0]) * u1;
  rep.diagnostics.rank_ratio = s.size() > 1 ? s[1] / s[0] : 0.0;
  rep.diagnostics.condition = fit.condition;
  rep.seconds = seconds_since(t0);
  return rep;
}

double neg_log_marginal(const Vector& y, const Matrix& F, int n, const Hyperparameters& h, LikelihoodForm form) {
  validate(h);
  check_data(y, F, n);
  if (F.cols() != h.c.size()) throw InvalidArgument("basis matrix columns must match c");
  switch (form) {
    case LikelihoodForm::Woodbury:
      return core_from_signal(y, F * h.c, n, h.beta, h.sigma2).nll;
    case LikelihoodForm::DenseW: {
      const Matrix W = toeplitz_vec(F * h.c, n);
      Matrix Sigma = W * stable_spline(h.beta, n) * W.transpose();
      Sigma.diagonal().array() += h.sigma2;
      return dense_nll(y, Sigma);
    }
    case LikelihoodForm::DensePhi: {
      const Matrix Phi = toeplitz_mat(F, n);
      Matrix Sigma = Phi * kop_kernel(h.beta, h.c, n) * Phi.transpose();
      Sigma.diagonal().array() += h.sigma2;
      return dense_nll(y, Sigma);
    }
  }
  throw InvalidArgument("unknown likelihood form");
}

Vector g_space_estimate(const Vector& y, const Matrix& W, double beta, double sigma2) {
  if (W.rows() != y.size()) throw InvalidArgument("g_space_estimate: W rows must match the output length");
  if (!(sigma2 > 0.0)) throw InvalidHyperparameter("noise variance must be positive");
  const int n = static_cast<int>(W.cols());
  const Matrix L = stable_spline_factor(beta, n);
  const Vector s = stable_spline_increments(beta, n);
  const Matrix U = W * L;
  return solve_core(U.transpose() * U, U.transpose() * y, s, sigma2, y, [&](const Vector& g) { return Vector(W * g); })
      .g_raw;
}

Vector g_space_estimate_signal(const Vector& y, const Vector& w, int n, double beta, double sigma2) {
  if (!(sigma2 > 0.0)) throw InvalidHyperparameter("noise variance must be positive");
  return core_from_signal(y, w, n, beta, sigma2).g_raw;
}

Vector kop_posterior_mean(const Vector& y, const Matrix& F, int n, const Hyperparameters& h) {
  validate(h);
  check_data(y, F, n);
  return kron(g_space_estimate_signal(y, F * h.c, n, h.beta, h.sigma2), h.c);
}

Vector to_search_space(const Hyperparameters& h) {
  Vector x(h.c.size() + 2);
  x[0] = std::log(h.beta / (1.0 - h.beta));
  x[1] = std::log(h.sigma2);
  x.tail(h.c.size()) = h.c;
  return x;
}

Hyperparameters from_search_space(const Vector& x) {
  Hyperparameters h;
  h.beta = 1.0 / (1.0 + std::exp(-x[0]));
  h.sigma2 = std::exp(x[1]);
  h.c = x.tail(x.size() - 2);
  return h;
}

FitResult fit_hyperparameters_from(const Vector& y, const Matrix& F, int n, const Hyperparameters& start,
                                   const SimplexOptions& opts) {
  validate(start);
  check_data(y, F, n);
  const Objective objective = [&](const Vector& x) {
    try {
      return neg_log_marginal(y, F, n, from_search_space(x));
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const SimplexResult sr = minimize(objective, to_search_space(start), opts);
  FitResult fit;
  fit.hyper = from_search_space(sr.x);
  fit.nll = sr.f;
  fit.iterations = sr.iterations;
  fit.evaluations = sr.evaluations;
  fit.converged = sr.converged;
  return fit;
}

FitResult fit_hyperparameters(const Vector& y, const Vector& u, const BasisSet& basis, int n, std::uint64_t seed,
                              const FitOptions& opts) {
  if (y.size() == 0 || u.size() != y.size()) throw InvalidArgument("fit_hyperparameters: u and y must share a nonzero length");
  const Matrix F = basis_matrix(u, basis);

  // sigma2 start: LS residual variance, or the output variance when LS is not
  // available. Floored so log(sigma2) stays finite on noiseless data.
  double sigma2 = sample_variance(y);
  double condition = 0.0;
  try {
    const auto ls = least_squares(y, toeplitz_mat(F, n));
    sigma2 = ls.residual_variance;
    condition = ls.condition;
  } catch (const IllPosed&) {
  }
  const double floor = 1e-14 * std::max(y.squaredNorm() / static_cast<double>(y.size()), 1e-300);
  sigma2 = std::max(sigma2, floor);

  FitResult best;
  best.nll = std::numeric_limits<double>::infinity();
  int total_iter = 0;
  int total_eval = 0;
  for (int r = 0; r < std::max(opts.restarts, 1); ++r) {
    Rng rng = substream(seed, 0x6b6f70ULL, static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Hyperparameters start;
    start.beta = 0.5;
    start.sigma2 = sigma2;
    start.c.resize(basis.p);
    for (int i = 0; i < basis.p; ++i) start.c[i] = unit(rng);

    FitResult fit = fit_hyperparameters_from(y, F, n, start, opts.simplex);
    total_iter += fit.iterations;
    total_eval += fit.evaluations;
    if (fit.nll < best.nll || r == 0) best = fit;
  }
  best.iterations = total_iter;
  best.evaluations = total_eval;
  best.ls_condition = condition;
  return best;
}

EstimateReport kop_estimate_at(const Vector& y, const Matrix& F, int n, const Hyperparameters& h) {
  validate(h);
  check_data(y, F, n);
  const int p = static_cast<int>(h.c.size());
  const WoodburyCore core = core_from_signal(y, F * h.c, n, h.beta, h.sigma2);

  EstimateReport rep;
  rep.method = "kop";
  rep.hyper = h;
  rep.g_raw = core.g_raw;
  rep.c_raw = h.c;
  rep.theta_hat = kron(core.g_raw, h.c);
  rep.diagnostics.nll = core.nll;
  rep.diagnostics.jitter = core.jitter;
  try {
    const KopFactorization fac = decompose_kop(rep.theta_hat, n, p);
    rep.g_hat = fac.g;
    rep.c_hat = fac.c;
    rep.diagnostics.rank_ratio = fac.rank_ratio;
  } catch (const NotKopVector& e) {
    throw InternalConsistency(std::string("kop_estimate: posterior mean failed the rank-one check: ") + e.what());
  } catch (const InvalidArgument&) {
    // theta_hat = 0 (c = 0 or y = 0): no direction to normalize.
    throw IllPosed("kop_estimate: posterior mean is zero", 0.0);
  }
  return rep;
}

EstimateReport kop_estimate(const Vector& y, const Vector& u, const BasisSet& basis, int n, std::uint64_t seed,
                            const FitOptions& opts) {
  const auto t0 = Clock::now();
  const FitResult fit = fit_hyperparameters(y, u, basis, n, seed, opts);
  EstimateReport rep = kop_estimate_at(y, basis_matrix(u, basis), n, fit.hyper);
  rep.diagnostics.iterations = fit.iterations;
  rep.diagnostics.evaluations = fit.evaluations;
  rep.diagnostics.converged = fit.converged;
  rep.diagnostics.condition = fit.ls_condition;
  rep.seconds = seconds_since(t0);
  return rep;
}

}  // namespace hammerstein
