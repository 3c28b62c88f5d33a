// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/types.hpp"

namespace isvd {

/// Core SVD of the single column u1: sigma = ||u1||_W, Q = u1 / sigma,
/// R = [1]. Throws DegenerateInputError when ||u1||_W < 1e-300.
CoreSVD initialize(const Eigen::Ref<const Vector>& u1, const WeightOperator& w);

/// Direct rank-one update of the core SVD with column u.
///
/// p < tol: rotate within the current subspace using the leading k x k
/// block of the bordered SVD (rank held). Otherwise append u's W-normalized
/// residual, rotate the full m x (k+1) factor, then drop trailing singular
/// values below tol.
UpdateReport update_isvd1(CoreSVD& s, const Eigen::Ref<const Vector>& u, const WeightOperator& w,
                          const ToleranceConfig& cfg, const UpdateHooks* hooks = nullptr);

/// Index r such that sigma(0..r) >= tol and sigma(r..) < tol, for sigma
/// sorted descending.
Index count_at_least(const Eigen::Ref<const Vector>& sigma, double tol) noexcept;

/// [[a, 0], [0, I_extra]].
Matrix block_identity_pad(const Eigen::Ref<const Matrix>& a, Index extra);

}  // namespace isvd
