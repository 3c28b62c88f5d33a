// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/types.hpp"

namespace isvd {

/// Five-factor form U = Q_out Q_small diag(sigma) R_small^T R_out^T with
/// the cached inverse R_small^+ used to append rows to R_out.
struct FiveMatrixState {
  Matrix q_out;
  Matrix q_small;
  Vector sigma;
  Matrix r_small;
  Matrix r_small_pinv;
  Matrix r_out;
  Index columns_seen = 0;
  OpCounters counters;

  static FiveMatrixState from(const CoreSVD& init);
  Index rank() const noexcept { return sigma.size(); }
  /// Left factor as used by the algorithm: Q_out Q_small.
  Matrix left_factor() const { return q_out * q_small; }
  CoreSVD assemble() const;
};

/// One update of the five-factor variant. Only the small factor Q_small is
/// reorthogonalized (classical first/last trigger); Q_out never is, so
/// orthogonality of the outer basis may decay on hard streams.
///
/// Throws DegenerateInputError when the right-factor block to be inverted
/// is numerically singular.
UpdateReport update_isvd2(FiveMatrixState& s, const Eigen::Ref<const Vector>& u,
                          const WeightOperator& w, const ToleranceConfig& cfg,
                          const UpdateHooks* hooks = nullptr);

}  // namespace isvd
