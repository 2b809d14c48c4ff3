#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "hammerstein/tensor_ops.hpp"

namespace hammerstein {

using Rng = std::mt19937_64;

/// Independent stream for (master seed, a, b). Streams for different keys
/// do not depend on the order in which they are created.
Rng substream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

inline constexpr int kMaxLegendreDegree = 10;

/// P_degree(u) for degree in [0, 10], coefficients expanded once from the
/// Rodrigues formula.
double legendre_eval(int degree, double u);

/// Monomial coefficients of P_degree, lowest power first.
const std::vector<double>& legendre_coefficients(int degree);

/// Legendre family P_0 ... P_{p-1}.
struct BasisSet {
  int p = 1;
  double operator()(int i, double u) const { return legendre_eval(i, u); }
};

/// F(t, i) = phi_i(u_t); row t pairs with sample u_t.
Matrix basis_matrix(const Vector& u, const BasisSet& basis);

struct HammersteinSystem {
  Vector g;  // n taps at lags 1..n, unit norm, positive leading sign
  Vector c;  // p basis coefficients
  std::vector<std::complex<double>> poles;
  std::vector<std::complex<double>> zeros;
  double tail_energy = 0.0;  // energy fraction beyond lag n of the untruncated response

  int n() const { return static_cast<int>(g.size()); }
  int p() const { return static_cast<int>(c.size()); }
};

struct Dataset {
  Vector u;  // u_0 .. u_{N-1}
  Vector y;  // y_1 .. y_N
  double sigma2 = 0.0;
  double snr = 0.0;  // 0 when not generated from an SNR target
};

/// y = T_n(F c) g, the noiseless output on null initial conditions.
Vector noiseless_output(const HammersteinSystem& system, const Vector& u);

/// y = T_n(F c) g + e with e ~ N(0, sigma^2 I).
Dataset simulate(const HammersteinSystem& system, const Vector& u, double sigma, Rng& rng);

/// Output-error system from two conjugate pole pairs and two conjugate zero
/// pairs (radius U[0.5, 0.95], angle U[0, pi]) with a one-sample delay, and
/// c_i ~ U[-1, 1].
HammersteinSystem random_system(Rng& rng, int n, int p);

/// sigma^2 = Var(noiseless output) / snr (sample variance, N - 1 divisor).
double snr_to_sigma2(const HammersteinSystem& system, const Vector& u, double snr);

/// Zero-mean unit-variance Gaussian white input.
Vector gaussian_input(Rng& rng, int N);

}  // namespace hammerstein
