#pragma once

#include "hammerstein/tensor_ops.hpp"

namespace hammerstein {

// First-order stable spline (TC) kernel, K(i, j) = beta^max(i, j) with
// 1-based indices. beta must lie in [0, 1).
Matrix stable_spline(double beta, int n);

// Upper-triangular factor L with L L^T = K_beta, built in closed form:
// K(i,j) = sum_{k >= max(i,j)} d_k with d_k = beta^k (1 - beta) for k < n and
// d_n = beta^n, so L = B diag(sqrt(d)) where B is the upper-triangular ones
// matrix. Valid for beta = 0 (L = 0) and needs no Cholesky.
Matrix stable_spline_factor(double beta, int n);

// sqrt(d_k) from the factorization above, k = 1..n.
Vector stable_spline_increments(double beta, int n);

// Kronecker overparameterized kernel H = K_beta (x) c c^T, size np x np.
Matrix kop_kernel(double beta, const Vector& c, int n);

void check_beta(double beta);

}  // namespace hammerstein
