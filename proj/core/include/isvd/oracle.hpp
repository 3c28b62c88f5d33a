// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/types.hpp"

#include <string>
#include <vector>

namespace isvd {

/// Batch W-weighted core SVD used as ground truth. Factors W = L L^T
/// (Cholesky), takes a dense SVD of L^T U and maps back Q = L^{-T} Q_hat.
/// Singular values below 1e-14 * sigma_1 are dropped.
///
/// Throws DegenerateInputError if W is not positive definite and
/// DimensionError past the desk-scale limit m * n > 1e8.
CoreSVD dense_svd_oracle(const Eigen::Ref<const Matrix>& u, const WeightOperator& w);

/// ||I - Q^T W Q||_F.
double orthogonality_error(const Eigen::Ref<const Matrix>& q, const WeightOperator& w);

/// Principal angles between span(Q1) and span(Q2) in the W inner product,
/// ascending. Small angles are recovered from the sine side so they stay
/// accurate below sqrt(eps).
std::vector<double> principal_angles(const Eigen::Ref<const Matrix>& q1,
                                     const Eigen::Ref<const Matrix>& q2, const WeightOperator& w);

struct InterlacingCheck {
  bool pass = true;
  Vector mu;
  std::vector<std::string> violations;
};

/// Builds [[diag(sigma), d], [0, p]], computes its spectrum mu with svd_full
/// and checks mu_{k+1} <= p and
/// mu_{k+1} <= sigma_k <= mu_k <= ... <= sigma_1 <= mu_1, each within
/// slack * sigma_1.
InterlacingCheck check_interlacing(const Eigen::Ref<const Vector>& sigma,
                                   const Eigen::Ref<const Vector>& d, double p,
                                   double slack = 1e-12);

/// Overload for instrumentation hooks, reusing the spectrum already computed.
InterlacingCheck check_interlacing(const BorderedStep& step, double slack = 1e-12);

struct BlockIdentityCheck {
  bool pass = true;
  double max_abs_diff = 0.0;
  double max_abs_entry = 0.0;
};

/// Compares [[[A, 0], [0, 1]] B, 0], [0, 1]] with [[A, 0], [0, I_2]] [[B, 0], [0, 1]]
/// entrywise for A m x n and B (n+1) x n; pass means the difference is at
/// most 1e-15 * max|entry|.
BlockIdentityCheck check_block_identity(const Eigen::Ref<const Matrix>& a,
                                        const Eigen::Ref<const Matrix>& b);

/// ||P x - P' x|| / ||x|| where P = Q Q^T W and P' is the same projector
/// built from Q G. Zero up to roundoff for any orthogonal k x k G.
double projection_invariance_error(const Eigen::Ref<const Matrix>& q, const Eigen::Ref<const Matrix>& g,
                                   const Eigen::Ref<const Vector>& x, const WeightOperator& w);

struct ZeroRowCheck {
  double spectrum_rel_error = 0.0;  // max_i |mu_i - nu_i| / sigma_1
  double trailing_value = 0.0;      // (k+1)-th value of the square route, relative to sigma_1
  double left_factor_error = 0.0;   // max column distance up to sign
};

/// Compares the square route svd([[diag(sigma), d], [0, 0]]) with the wide
/// route svd([diag(sigma) | d]): same leading spectrum, a zero trailing
/// value, and the same left singular vectors up to sign.
ZeroRowCheck check_zero_row_route(const Eigen::Ref<const Vector>& sigma, const Eigen::Ref<const Vector>& d);

struct SpectrumComparison {
  std::vector<double> abs_error;
  std::vector<double> rel_error;
  double max_rel_error = 0.0;
  /// Indices where either spectrum reaches the floor; only these enter
  /// max_rel_error.
  Index count = 0;
};

/// Compares candidate `b` against reference `a`, padding the shorter one
/// with zeros. rel_error(i) = |a_i - b_i| / max(a_i, floor).
SpectrumComparison compare_spectra(const Eigen::Ref<const Vector>& a,
                                   const Eigen::Ref<const Vector>& b, double floor);

}  // namespace isvd
