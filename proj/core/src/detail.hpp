// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/errors.hpp"
#include "isvd/linalg.hpp"
#include "isvd/types.hpp"

#include <string>

namespace isvd::detail {

/// [[diag(sigma), d], [0, p]].
inline Matrix bordered_matrix(const Vector& sigma, const Vector& d, double p) {
  const Index k = sigma.size();
  Matrix y = Matrix::Zero(k + 1, k + 1);
  y.topLeftCorner(k, k).diagonal() = sigma;
  y.topRightCorner(k, 1) = d;
  y(k, k) = p;
  return y;
}

inline void notify_bordered(const UpdateHooks* hooks, const Vector& sigma, const Vector& d, double p,
                            const Vector& mu) {
  if (hooks != nullptr && hooks->on_bordered) hooks->on_bordered(BorderedStep{sigma, d, p, mu});
}

inline void check_rank_cap(Index next_rank, Index m, const ToleranceConfig& cfg) {
  const Index cap = cfg.rank_cap(m);
  if (next_rank > cap) {
    throw DegenerateInputError("rank cap " + std::to_string(cap) +
                               " exceeded; the stream is not low rank at this tolerance");
  }
}

inline void check_column(const Eigen::Ref<const Vector>& u, Index m) {
  if (u.size() != m) {
    throw DimensionError("column length " + std::to_string(u.size()) + " does not match m = " +
                         std::to_string(m));
  }
  if (!u.allFinite()) throw NumericalError("column has non-finite entries");
}

}  // namespace isvd::detail
