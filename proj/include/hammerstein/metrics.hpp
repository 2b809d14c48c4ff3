#pragma once

#include "hammerstein/tensor_ops.hpp"

namespace hammerstein {

/// 100 (1 - ||truth - estimate|| / ||truth - mean(truth)||). Throws
/// UndefinedFit when the truth is constant and InvalidArgument on a size
/// mismatch.
double fit_score(const Vector& truth, const Vector& estimate);

/// Impulse-response fit.
double fit_g(const Vector& g_true, const Vector& g_hat);

/// Static nonlinearity fit from f and f_hat evaluated on the same input samples.
double fit_f(const Vector& f_true, const Vector& f_hat);

}  // namespace hammerstein
