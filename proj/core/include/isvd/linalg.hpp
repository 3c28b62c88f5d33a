// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/weight.hpp"

namespace isvd {

/// a^T W b. For the identity weight this is a plain dot product and W is
/// never applied.
double w_inner(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b,
               const WeightOperator& w);

/// sqrt(max(v^T W v, 0)).
double w_norm(const Eigen::Ref<const Vector>& v, const WeightOperator& w);

struct Residual {
  Vector d;  // Q^T W u
  Vector e;  // u - Q d
  double p;  // ||e||_W
};

/// Projection of u onto span(Q) in the W inner product. W is applied to u
/// once; the product is reused for d.
Residual residual(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Matrix>& q,
                  const WeightOperator& w);

/// Reusable m-length buffers for the allocation-free residual used on the
/// streaming hot path.
struct ResidualWorkspace {
  Vector wu;
  Vector e;
  Vector we;
  /// Number of times the buffers had to be (re)allocated.
  long allocations = 0;

  void reserve(Index m);
};

/// Same result as residual(), writing e into ws.e and d into `d`, touching
/// no heap memory of length m once `ws` has been sized.
double residual_into(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Matrix>& q,
                     const WeightOperator& w, ResidualWorkspace& ws, Vector& d);

/// Y = U diag(s) V^T with s descending.
///
/// Sign convention: in each column of U the entry of largest magnitude is
/// nonnegative (ties go to the lowest row index); V follows U.
struct SvdResult {
  Matrix u;
  Vector s;
  Matrix v;
};

/// Full SVD of a small square matrix (two-sided Jacobi). U and V are square
/// and orthogonal to working precision.
SvdResult svd_full(const Eigen::Ref<const Matrix>& y);

/// Economy SVD of a wide k x (k+s) matrix: U is k x k, s has length k, V is
/// (k+s) x k with orthonormal columns.
SvdResult svd_thin_wide(const Eigen::Ref<const Matrix>& y);

/// Moore-Penrose inverse of a square matrix through svd_full. Throws
/// DegenerateInputError when the smallest singular value is below
/// n * eps * s_max (the matrix is numerically singular).
Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& a);

/// Modified Gram-Schmidt in the W inner product, triggered only when the
/// last and first columns fail the W-orthogonality test
/// |(Q(:,end), Q(:,1))_W| > tol. Column order is preserved.
///
/// Throws DegenerateInputError if a column collapses (W-norm below 1e-300
/// after projection).
Matrix gram_schmidt_w(const Eigen::Ref<const Matrix>& q, const WeightOperator& w, double tol);

/// In-place form of gram_schmidt_w. Returns true when the pass ran.
bool reorthogonalize_w(Matrix& q, const WeightOperator& w, double tol);

}  // namespace isvd
