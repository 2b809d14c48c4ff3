#include "hammerstein/model.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "hammerstein/errors.hpp"

namespace hammerstein {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// (u^2 - 1)^i = sum_k C(i,k) (-1)^(i-k) u^(2k); differentiate i times and
// divide by 2^i i!.
std::vector<double> rodrigues(int degree) {
  std::vector<double> poly(2 * degree + 1, 0.0);
  for (int k = 0; k <= degree; ++k) poly[2 * k] = binomial(degree, k) * (((degree - k) % 2) ? -1.0 : 1.0);
  for (int d = 0; d < degree; ++d) {
    for (std::size_t j = 0; j + 1 < poly.size(); ++j) poly[j] = poly[j + 1] * static_cast<double>(j + 1);
    poly.pop_back();
  }
  double scale = 1.0;
  for (int i = 1; i <= degree; ++i) scale *= 2.0 * i;
  for (double& v : poly) v /= scale;
  return poly;
}

const std::array<std::vector<double>, kMaxLegendreDegree + 1>& legendre_table() {
  static const auto table = [] {
    std::array<std::vector<double>, kMaxLegendreDegree + 1> t;
    for (int i = 0; i <= kMaxLegendreDegree; ++i) t[i] = rodrigues(i);
    return t;
  }();
  return table;
}

// Multiply a monic-form polynomial in q^-1 by (1 - 2 r cos(w) q^-1 + r^2 q^-2).
std::vector<double> times_pair(const std::vector<double>& poly, double r, double w) {
  const std::array<double, 3> quad{1.0, -2.0 * r * std::cos(w), r * r};
  std::vector<double> out(poly.size() + 2, 0.0);
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k) out[i + k] += poly[i] * quad[k];
  return out;
}

constexpr int kMaxSystemDraws = 100;
constexpr int kTailFactor = 10;

}  // namespace

Rng substream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(a),      static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b),      static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

const std::vector<double>& legendre_coefficients(int degree) {
  if (degree < 0 || degree > kMaxLegendreDegree)
    throw InvalidArgument("legendre degree must lie in [0, " + std::to_string(kMaxLegendreDegree) + "], got " +
                          std::to_string(degree));
  return legendre_table()[degree];
}

double legendre_eval(int degree, double u) {
  const auto& coeffs = legendre_coefficients(degree);
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
  return acc;
}

Matrix basis_matrix(const Vector& u, const BasisSet& basis) {
  if (basis.p < 1) throw InvalidArgument("basis_matrix: basis must contain at least one function");
  if (u.size() == 0) throw InvalidArgument("basis_matrix: empty input");
  Matrix F(u.size(), basis.p);
  for (int i = 0; i < basis.p; ++i) {
    const auto& coeffs = legendre_coefficients(i);
    for (Eigen::Index t = 0; t < u.size(); ++t) {
      double acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u[t] + *it;
      F(t, i) = acc;
    }
  }
  return F;
}

Vector noiseless_output(const HammersteinSystem& system, const Vector& u) {
  const Matrix F = basis_matrix(u, BasisSet{system.p()});
  return toeplitz_vec(F * system.c, system.n()) * system.g;
}

Dataset simulate(const HammersteinSystem& system, const Vector& u, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw InvalidArgument("simulate: noise standard deviation must be non-negative");
  Dataset data;
  data.u = u;
  data.y = noiseless_output(system, u);
  data.sigma2 = sigma * sigma;
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    for (Eigen::Index t = 0; t < data.y.size(); ++t) data.y[t] += noise(rng);
  }
  return data;
}

HammersteinSystem random_system(Rng& rng, int n, int p) {
  if (n < 1 || p < 1) throw InvalidArgument("random_system: n and p must be positive");
  std::uniform_real_distribution<double> radius(0.5, 0.95);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);

  for (int attempt = 0; attempt < kMaxSystemDraws; ++attempt) {
    HammersteinSystem sys;
    std::vector<double> den{1.0};
    std::vector<double> num{1.0};
    for (int k = 0; k < 2; ++k) {
      const double r = radius(rng);
      const double w = angle(rng);
      den = times_pair(den, r, w);
      sys.poles.push_back(std::polar(r, w));
      sys.poles.push_back(std::polar(r, -w));
    }
    for (int k = 0; k < 2; ++k) {
      const double r = radius(rng);
      const double w = angle(rng);
      num = times_pair(num, r, w);
      sys.zeros.push_back(std::polar(r, w));
      sys.zeros.push_back(std::polar(r, -w));
    }
    num.insert(num.begin(), 0.0);  // strictly causal: first tap at lag 1

    const int len = kTailFactor * n + 1;
    std::vector<double> h(len, 0.0);
    for (int k = 0; k < len; ++k) {
      double acc = k < static_cast<int>(num.size()) ? num[k] : 0.0;
      for (std::size_t i = 1; i < den.size() && static_cast<int>(i) <= k; ++i) acc -= den[i] * h[k - i];
      h[k] = acc;
    }

    Vector g(n);
    for (int k = 0; k < n; ++k) g[k] = h[k + 1];
    double total = 0.0;
    double tail = 0.0;
    for (int k = 1; k < len; ++k) {
      total += h[k] * h[k];
      if (k > n) tail += h[k] * h[k];
    }

    sys.c.resize(p);
    for (int i = 0; i < p; ++i) sys.c[i] = coeff(rng);

    const double norm = g.norm();
    if (!(norm >= 1e-12) || !std::isfinite(norm)) continue;
    sys.g = g * (leading_sign(g) / norm);
    sys.tail_energy = total > 0.0 ? tail / total : 0.0;
    return sys;
  }
  throw NumericalError("random_system: could not draw a non-degenerate impulse response");
}

double snr_to_sigma2(const HammersteinSystem& system, const Vector& u, double snr) {
  if (!(snr > 0.0)) throw InvalidArgument("snr must be positive");
  const Vector y0 = noiseless_output(system, u);
  if (y0.size() < 2) throw InvalidArgument("snr_to_sigma2: need at least two samples");
  const double var = (y0.array() - y0.mean()).square().sum() / static_cast<double>(y0.size() - 1);
  if (!(var > 0.0)) throw NumericalError("snr_to_sigma2: noiseless output has zero variance");
  return var / snr;
}

Vector gaussian_input(Rng& rng, int N) {
  if (N < 1) throw InvalidArgument("gaussian_input: N must be positive");
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector u(N);
  for (int t = 0; t < N; ++t) u[t] = dist(rng);
  return u;
}

}  // namespace hammerstein
