#include "hammerstein/parallel.hpp"

#include <omp.h>

#include "hammerstein/errors.hpp"

namespace hammerstein::parallel {
namespace {

void check(const Vector& w, const Vector& y, int n) {
  if (n < 1) throw InvalidArgument("toeplitz_gram: width must be positive");
  if (w.size() != y.size() || w.size() == 0) throw InvalidArgument("toeplitz_gram: w and y must share a nonzero length");
}

// G(i, j), i <= j: sum over rows t >= j of w[t - i] * w[t - j].
inline double gram_entry(const double* w, Eigen::Index N, int i, int j) {
  double acc = 0.0;
  for (Eigen::Index t = j; t < N; ++t) acc += w[t - i] * w[t - j];
  return acc;
}

inline double cross_entry(const double* w, const double* y, Eigen::Index N, int i) {
  double acc = 0.0;
  for (Eigen::Index t = i; t < N; ++t) acc += w[t - i] * y[t];
  return acc;
}

}  // namespace

ToeplitzGram toeplitz_gram_serial(const Vector& w, const Vector& y, int n) {
  check(w, y, n);
  const Eigen::Index N = w.size();
  ToeplitzGram out{Matrix(n, n), Vector(n)};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) out.gram(i, j) = out.gram(j, i) = gram_entry(w.data(), N, i, j);
    out.cross[j] = cross_entry(w.data(), y.data(), N, j);
  }
  return out;
}

ToeplitzGram toeplitz_gram_omp(const Vector& w, const Vector& y, int n) {
  check(w, y, n);
  const Eigen::Index N = w.size();
  ToeplitzGram out{Matrix(n, n), Vector(n)};
  const double* wd = w.data();
  const double* yd = y.data();
  const int pairs = n * (n + 1) / 2;
#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (int k = 0; k < pairs; ++k) {
      // Unrank k into (i, j) with i <= j, column-major over the upper triangle.
      int j = 0;
      while ((j + 1) * (j + 2) / 2 <= k) ++j;
      const int i = k - j * (j + 1) / 2;
      const double v = gram_entry(wd, N, i, j);
      out.gram(i, j) = v;
      out.gram(j, i) = v;
    }
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) out.cross[i] = cross_entry(wd, yd, N, i);
  }
  return out;
}

ToeplitzGram toeplitz_gram(const Vector& w, const Vector& y, int n) {
  const double work = static_cast<double>(w.size()) * n * n;
  if (!omp_in_parallel() && omp_get_max_threads() > 1 && work > 4e6) return toeplitz_gram_omp(w, y, n);
  return toeplitz_gram_serial(w, y, n);
}

}  // namespace hammerstein::parallel
