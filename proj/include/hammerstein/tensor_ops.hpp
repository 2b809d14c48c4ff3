#pragma once

#include <Eigen/Dense>

namespace hammerstein {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// m x n lower-triangular Toeplitz matrix: column j is `a` delayed by j
/// samples, truncated to m rows.
Matrix toeplitz_vec(const Vector& a, int n);

/// m x np block Toeplitz matrix: block j (m x p) is `A` shifted down j rows.
/// Equivalent to [I S ... S^{n-1}] (I_n (x) A) with S the m x m down-shift.
Matrix toeplitz_mat(const Matrix& A, int n);

/// Kronecker product of two vectors; block i (length b.size()) is a_i * b.
Vector kron(const Vector& a, const Vector& b);

/// Kronecker product of two dense matrices.
Matrix kron(const Matrix& A, const Matrix& B);

/// Reshape an overparameterized vector of length n*p into the p x n matrix M
/// with M(i, j) = theta[j*p + i]. For theta = g (x) c this is exactly c g^T.
Matrix reshape_kop(const Vector& theta, int n, int p);

/// sigma_2 / sigma_1 of the p x n reshape; 0 when min(n, p) == 1.
double rank_one_ratio(const Vector& theta, int n, int p);

struct KopFactorization {
  Vector g;           // unit norm, first non-negligible entry positive
  Vector c;
  double rank_ratio;  // sigma_2 / sigma_1 of the reshape
};

inline constexpr double kDefaultRankTol = 1e-8;
inline constexpr double kLeadingSignTol = 1e-8;

/// Index of the first entry with |v_i| > tol * ||v||, or -1 for a zero vector.
int first_significant(const Vector& v, double tol = kLeadingSignTol);

/// +1 or -1 so that sign * v has a positive first significant entry.
double leading_sign(const Vector& v, double tol = kLeadingSignTol);

/// Split a KOP vector theta = g (x) c into the unit-norm, positive-leading g
/// and the matching c. The row of the reshape with the largest norm gives the
/// direction of g; the largest-magnitude entry of that row picks the column
/// used for c. Throws NotKopVector when sigma_2/sigma_1 > rank_tol and
/// InvalidArgument for a zero or mis-sized theta.
KopFactorization decompose_kop(const Vector& theta, int n, int p, double rank_tol = kDefaultRankTol);

}  // namespace hammerstein
