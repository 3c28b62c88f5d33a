// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/weight.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

namespace isvd {

/// Rank-k truncated core SVD U = Q diag(sigma) R^T with Q^T W Q = I and
/// R^T R = I.
struct CoreSVD {
  Matrix q;
  Vector sigma;
  Matrix r;
  Index columns_seen = 0;

  Index rank() const noexcept { return sigma.size(); }
  Index rows() const noexcept { return q.rows(); }
};

struct ToleranceConfig {
  /// Residual and singular-value threshold.
  double tol = 1e-12;
  /// Threshold used when auditing orthogonality of the factors.
  double tol_orth = 1e-10;
  /// Hard cap on the rank; unset means min(m, 2000).
  std::optional<Index> max_rank;

  Index rank_cap(Index m) const noexcept;
  /// Throws std::invalid_argument unless both tolerances are positive.
  void validate() const;
};

enum class Branch : std::uint8_t {
  buffered,      // column absorbed into the coefficient buffer (III/IV)
  rank_grew,     // bordered update appended a direction
  rank_held,     // p < tol, rotated in place (I/II)
  sv_truncated,  // bordered update whose trailing singular value was dropped
};

std::string_view to_string(Branch b) noexcept;

struct UpdateReport {
  Index column_index = 0;  // 0-based index of the column just consumed
  Branch branch = Branch::rank_held;
  double p = 0.0;
  Index rank_after = 0;
  bool reorth_fired = false;
  int svd_calls = 0;            // kernel SVDs executed by this update
  long m_allocations = 0;       // m-length heap blocks allocated (buffered variants only)
};

/// Running totals kept by every state so callers can audit work.
struct OpCounters {
  long svd_calls = 0;
  long m_allocations = 0;
  long flushes = 0;
};


/// One bordered (k+1)x(k+1) step Y = [[diag(sigma), d], [0, p]] and the
/// spectrum mu computed for it.
struct BorderedStep {
  Vector sigma;
  Vector d;
  double p = 0.0;
  Vector mu;
};

/// Optional instrumentation. Hooks run synchronously inside the update.
struct UpdateHooks {
  std::function<void(const BorderedStep&)> on_bordered;
};

}  // namespace isvd
