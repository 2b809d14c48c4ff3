#include "hammerstein/kernels.hpp"

#include <cmath>
#include <string>

#include "hammerstein/errors.hpp"

namespace hammerstein {

void check_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw InvalidHyperparameter("stable spline beta must lie in [0, 1), got " + std::to_string(beta));
}

Matrix stable_spline(double beta, int n) {
  check_beta(beta);
  if (n < 1) throw InvalidArgument("stable_spline: dimension must be positive");
  Matrix K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = std::pow(beta, std::max(i, j) + 1);
  return K;
}

Vector stable_spline_increments(double beta, int n) {
  check_beta(beta);
  if (n < 1) throw InvalidArgument("stable_spline: dimension must be positive");
  Vector s(n);
  for (int k = 0; k < n; ++k) {
    const double pk = std::pow(beta, k + 1);
    s[k] = std::sqrt(k + 1 < n ? pk * (1.0 - beta) : pk);
  }
  return s;
}

Matrix stable_spline_factor(double beta, int n) {
  const Vector s = stable_spline_increments(beta, n);
  Matrix L = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) L.col(k).head(k + 1).setConstant(s[k]);
  return L;
}

Matrix kop_kernel(double beta, const Vector& c, int n) {
  if (c.size() == 0) throw InvalidArgument("kop_kernel: empty nonlinearity coefficients");
  const Matrix K = stable_spline(beta, n);
  return kron(K, Matrix(c * c.transpose()));
}

}  // namespace hammerstein
