#include "hammerstein/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hammerstein/errors.hpp"

namespace hammerstein {
namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

SimplexResult minimize(const Objective& f, const Vector& x0, const SimplexOptions& opts) {
  const Eigen::Index d = x0.size();
  if (d == 0) throw InvalidArgument("minimize: empty starting point");
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : 200 * static_cast<int>(d);

  SimplexResult res;
  auto eval = [&](const Vector& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Vector> xs(d + 1, x0);
  std::vector<double> fs(d + 1);
  fs[0] = eval(x0);
  if (!std::isfinite(fs[0])) throw InvalidStart("minimize: objective is not finite at the starting point");
  for (Eigen::Index i = 0; i < d; ++i) {
    xs[i + 1][i] = x0[i] != 0.0 ? 1.05 * x0[i] : 0.00025;
    fs[i + 1] = eval(xs[i + 1]);
  }

  std::vector<std::size_t> order(d + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<Vector> xs2;
    std::vector<double> fs2;
    for (std::size_t k : order) {
      xs2.push_back(std::move(xs[k]));
      fs2.push_back(fs[k]);
    }
    xs = std::move(xs2);
    fs = std::move(fs2);
  };
  sort_simplex();

  while (res.iterations < max_iter) {
    double spread = 0.0;
    double diameter = 0.0;
    for (Eigen::Index i = 1; i <= d; ++i) {
      spread = std::max(spread, std::abs(fs[i] - fs[0]));
      diameter = std::max(diameter, (xs[i] - xs[0]).cwiseAbs().maxCoeff());
    }
    if (spread <= opts.f_tol && diameter <= opts.x_tol) {
      res.converged = true;
      break;
    }

    Vector centroid = Vector::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) centroid += xs[i];
    centroid /= static_cast<double>(d);
    const Vector& worst = xs[d];

    const Vector xr = centroid + kReflect * (centroid - worst);
    const double fr = eval(xr);
    bool shrink = false;
    if (fr < fs[0]) {
      const Vector xe = centroid + kReflect * kExpand * (centroid - worst);
      const double fe = eval(xe);
      if (fe < fr) {
        xs[d] = xe;
        fs[d] = fe;
      } else {
        xs[d] = xr;
        fs[d] = fr;
      }
    } else if (fr < fs[d - 1]) {
      xs[d] = xr;
      fs[d] = fr;
    } else if (fr < fs[d]) {
      const Vector xc = centroid + kContract * kReflect * (centroid - worst);
      const double fc = eval(xc);
      if (fc <= fr) {
        xs[d] = xc;
        fs[d] = fc;
      } else {
        shrink = true;
      }
    } else {
      const Vector xcc = centroid - kContract * (centroid - worst);
      const double fcc = eval(xcc);
      if (fcc < fs[d]) {
        xs[d] = xcc;
        fs[d] = fcc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (Eigen::Index i = 1; i <= d; ++i) {
        xs[i] = xs[0] + kShrink * (xs[i] - xs[0]);
        fs[i] = eval(xs[i]);
      }
    }
    sort_simplex();
    ++res.iterations;
    if (opts.record_trace) res.best_trace.push_back(fs[0]);
  }

  res.x = xs[0];
  res.f = fs[0];
  return res;
}

}  // namespace hammerstein
