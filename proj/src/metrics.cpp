#include "hammerstein/metrics.hpp"

#include "hammerstein/errors.hpp"

namespace hammerstein {

double fit_score(const Vector& truth, const Vector& estimate) {
  if (truth.size() != estimate.size() || truth.size() == 0)
    throw InvalidArgument("fit: truth and estimate must have the same nonzero length");
  const double spread = (truth.array() - truth.mean()).matrix().norm();
  if (!(spread > 0.0)) throw UndefinedFit("fit: truth is constant");
  return 100.0 * (1.0 - (truth - estimate).norm() / spread);
}

double fit_g(const Vector& g_true, const Vector& g_hat) { return fit_score(g_true, g_hat); }

double fit_f(const Vector& f_true, const Vector& f_hat) { return fit_score(f_true, f_hat); }

}  // namespace hammerstein
