// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/linalg.hpp"
#include "isvd/types.hpp"

#include <vector>

namespace isvd {

/// State of the buffered variants (III and IV).
///
/// The current core SVD is (base.q * q0, base.sigma, base.r) once the
/// coefficient buffer `v` has been flushed. Columns whose residual falls
/// below tol only append a k-vector to `v`.
struct BufferedState {
  CoreSVD base;
  Matrix q0;
  std::vector<Vector> v;
  OpCounters counters;
  ResidualWorkspace workspace;

  static BufferedState from(CoreSVD init);
  Index q() const noexcept { return static_cast<Index>(v.size()); }
  Index rank() const noexcept { return base.rank(); }
  /// base.q * q0.
  Matrix left_factor() const;
};

/// Variant III: buffers Q0^T d; the small rotation Q0 accumulates and is
/// never reorthogonalized; the outer Q receives one optional re-projection
/// of each appended direction.
UpdateReport update_isvd3(BufferedState& s, const Eigen::Ref<const Vector>& u,
                          const WeightOperator& w, const ToleranceConfig& cfg,
                          const UpdateHooks* hooks = nullptr);

/// Flushes any buffered coefficients and folds Q0 into Q.
CoreSVD finalize_isvd3(const BufferedState& s);

/// Variant IV: like III, but Q0 is folded into Q at every rank event and the
/// trailing singular value of each bordered update is dropped when below tol.
UpdateReport update_isvd4(BufferedState& s, const Eigen::Ref<const Vector>& u,
                          const WeightOperator& w, const ToleranceConfig& cfg,
                          const UpdateHooks* hooks = nullptr);

CoreSVD finalize_isvd4(const BufferedState& s);

}  // namespace isvd
