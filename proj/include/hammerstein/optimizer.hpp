#pragma once

#include <functional>
#include <vector>

#include "hammerstein/tensor_ops.hpp"

namespace hammerstein {

struct SimplexOptions {
  int max_iter = 0;  // 0 selects 200 * dimension
  double x_tol = 1e-4;
  double f_tol = 1e-4;
  bool record_trace = false;
};

struct SimplexResult {
  Vector x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> best_trace;  // best value after each iteration, if requested
};

using Objective = std::function<double(const Vector&)>;

// Nelder-Mead simplex with reflection 1, expansion 2, contraction 0.5 and
// shrink 0.5. The initial simplex perturbs each coordinate by 5% (0.00025 for
// zero entries). Non-finite objective values are treated as +inf. Stops when
// both the simplex diameter (max-norm from the best vertex) is below x_tol and
// the objective spread is below f_tol, or after max_iter iterations.
SimplexResult minimize(const Objective& f, const Vector& x0, const SimplexOptions& opts = {});

}  // namespace hammerstein
