#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hammerstein/model.hpp"
#include "hammerstein/optimizer.hpp"
#include "hammerstein/tensor_ops.hpp"

namespace hammerstein {

/// Kernel hyperparameters rho = (beta, c) plus the noise variance.
struct Hyperparameters {
  double beta = 0.5;
  Vector c;
  double sigma2 = 1.0;
};

/// Throws InvalidHyperparameter unless beta in [0,1), sigma2 > 0, c nonempty.
void validate(const Hyperparameters& h);

struct EstimateDiagnostics {
  double nll = 0.0;           // negative log marginal likelihood (KOP)
  int iterations = 0;         // simplex iterations over all restarts (KOP)
  int evaluations = 0;
  bool converged = true;
  double rank_ratio = 0.0;    // sigma_2 / sigma_1 of the reshaped theta_hat
  double condition = 0.0;     // |R_00 / R_kk| of the LS factorization (LS-OP, KOP init)
  double jitter = 0.0;        // diagonal jitter added to the Woodbury core
};

struct EstimateReport {
  std::string method;
  Vector g_hat;               // Assumption-1 gauge: unit norm, positive lead
  Vector c_hat;
  Vector theta_hat;
  std::optional<Hyperparameters> hyper;
  Vector g_raw;               // K W^T Sigma^-1 y before normalization (KOP)
  Vector c_raw;               // marginal-likelihood c before normalization (KOP)
  EstimateDiagnostics diagnostics;
  double seconds = 0.0;
};

// ---------------------------------------------------------------------------
// LS-OP

struct LeastSquaresFit {
  Vector theta;
  double residual_variance = 0.0;
  double condition = 0.0;
};

/// theta = argmin ||y - Phi theta||, column-pivoted QR. Throws IllPosed when
/// Phi is rank deficient or N < np.
LeastSquaresFit least_squares(const Vector& y, const Matrix& Phi);

/// Least squares on the overparameterized regression followed by a rank-one
/// SVD truncation of the p x n reshape. Throws IllPosed for rank-deficient Phi
/// or an all-zero estimate.
EstimateReport ls_op(const Vector& y, const Matrix& Phi, int n, int p);

// ---------------------------------------------------------------------------
// Marginal likelihood

enum class LikelihoodForm {
  Woodbury,  // W-form reduced to an n x n core, O(N n^2)
  DenseW,    // W K W^T + sigma^2 I, dense N x N Cholesky (reference)
  DensePhi,  // Phi H Phi^T + sigma^2 I, dense N x N Cholesky (reference)
};

/// log det Sigma_y + y^T Sigma_y^-1 y with Sigma_y = Phi H(rho) Phi^T + sigma^2 I
/// = W K_beta W^T + sigma^2 I, W = T_n(F c). F is the N x p basis matrix.
double neg_log_marginal(const Vector& y, const Matrix& F, int n, const Hyperparameters& h,
                        LikelihoodForm form = LikelihoodForm::Woodbury);

/// K_beta W^T (W K_beta W^T + sigma^2 I)^-1 y.
Vector g_space_estimate(const Vector& y, const Matrix& W, double beta, double sigma2);

/// Same estimate for W = T_n(w), never forming W.
Vector g_space_estimate_signal(const Vector& y, const Vector& w, int n, double beta, double sigma2);

/// H(rho) Phi^T Sigma_y^-1 y in the factored form [K W^T Sigma^-1 y] (x) c.
Vector kop_posterior_mean(const Vector& y, const Matrix& F, int n, const Hyperparameters& h);

// ---------------------------------------------------------------------------
// Hyperparameter fitting

struct FitOptions {
  int restarts = 1;
  SimplexOptions simplex{};
};

struct FitResult {
  Hyperparameters hyper;
  double nll = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  double ls_condition = 0.0;
};

/// Optimizer coordinates: x = [logit(beta), log(sigma2), c...].
Vector to_search_space(const Hyperparameters& h);
Hyperparameters from_search_space(const Vector& x);

/// Minimize the negative log marginal likelihood over (beta, c, sigma2) with
/// Nelder-Mead. Start: beta = 0.5, c_i ~ U[0,1] from `seed`, sigma2 = sample
/// variance of the LS residuals. Non-convergence is reported, not thrown.
FitResult fit_hyperparameters(const Vector& y, const Vector& u, const BasisSet& basis, int n, std::uint64_t seed,
                              const FitOptions& opts = {});

/// Refine from a given starting point (no LS initialization).
FitResult fit_hyperparameters_from(const Vector& y, const Matrix& F, int n, const Hyperparameters& start,
                                   const SimplexOptions& opts = {});

/// Full KOP pipeline: fit hyperparameters, form the posterior mean of theta
/// and split it into (g, c).
EstimateReport kop_estimate(const Vector& y, const Vector& u, const BasisSet& basis, int n, std::uint64_t seed,
                            const FitOptions& opts = {});

/// KOP estimate at fixed hyperparameters.
EstimateReport kop_estimate_at(const Vector& y, const Matrix& F, int n, const Hyperparameters& h);

}  // namespace hammerstein
