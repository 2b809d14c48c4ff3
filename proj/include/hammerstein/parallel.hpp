#pragma once

// Data-parallel kernels used on the hot path of the marginal likelihood.
// Each kernel has a serial reference and an OpenMP variant; both compute every
// output entry with the same summation order, so results are bit-identical
// regardless of thread count.

#include "hammerstein/tensor_ops.hpp"

namespace hammerstein::parallel {

struct ToeplitzGram {
  Matrix gram;   // W^T W, n x n
  Vector cross;  // W^T y, n
};

// W = toeplitz_vec(w, n). Only w is touched; W is never formed.
ToeplitzGram toeplitz_gram_serial(const Vector& w, const Vector& y, int n);
ToeplitzGram toeplitz_gram_omp(const Vector& w, const Vector& y, int n);

// Dispatches to the OpenMP variant for large problems outside an enclosing
// parallel region, to the serial reference otherwise.
ToeplitzGram toeplitz_gram(const Vector& w, const Vector& y, int n);

}  // namespace hammerstein::parallel
