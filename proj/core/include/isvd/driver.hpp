// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/errors.hpp"
#include "isvd/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace isvd {

enum class Algorithm { isvd1, isvd2, isvd3, isvd4 };

std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

/// Pull-style column stream: fills `out` with the next column and returns
/// true, or returns false at the end of the stream.
using ColumnSource = std::function<bool(Vector& out)>;

/// Streams the columns of `u`, which must outlive the source.
ColumnSource matrix_columns(const Matrix& u);

struct OrthSample {
  Index column = 0;
  double e_w = 0.0;
};

struct RunStats {
  Index columns = 0;
  long buffered = 0;
  long rank_grew = 0;
  long rank_held = 0;
  long sv_truncated = 0;
  long reorth_fired = 0;
  long svd_calls = 0;
  long m_allocations = 0;
  std::vector<OrthSample> orth_samples;
  double final_orthogonality = 0.0;
  double wall_seconds = 0.0;

  long branch_total() const noexcept { return buffered + rank_grew + rank_held + sv_truncated; }
};

struct RunOptions {
  /// Record E_W of the working left factor after every n-th update; 0 disables.
  Index sample_every = 10;
  /// Variant I only: run the W-weighted Gram-Schmidt pass after each update.
  bool reorthogonalize = true;
  UpdateHooks hooks;
  std::function<void(const UpdateReport&)> on_update;
};

struct RunResult {
  CoreSVD svd;
  RunStats stats;
};

/// Raised when an update fails mid-stream (rank cap, collapsed direction).
/// Carries the factorization of every column consumed before the failing one.
class RunAborted : public DegenerateInputError {
 public:
  RunAborted(const std::string& what, RunResult partial)
      : DegenerateInputError(what), partial_(std::make_shared<const RunResult>(std::move(partial))) {}
  const RunResult& partial() const noexcept { return *partial_; }

 private:
  std::shared_ptr<const RunResult> partial_;
};

/// Initialize on the first column, update on every later one, finalize.
/// Throws DegenerateInputError on an empty stream and RunAborted when a later
/// update fails.
RunResult run_isvd1(const ColumnSource& columns, const WeightOperator& w, const ToleranceConfig& cfg,
                    const RunOptions& opts = {});
RunResult run_isvd2(const ColumnSource& columns, const WeightOperator& w, const ToleranceConfig& cfg,
                    const RunOptions& opts = {});
RunResult run_isvd3(const ColumnSource& columns, const WeightOperator& w, const ToleranceConfig& cfg,
                    const RunOptions& opts = {});
RunResult run_isvd4(const ColumnSource& columns, const WeightOperator& w, const ToleranceConfig& cfg,
                    const RunOptions& opts = {});

RunResult run(Algorithm algorithm, const ColumnSource& columns, const WeightOperator& w,
              const ToleranceConfig& cfg, const RunOptions& opts = {});

}  // namespace isvd
