// SPDX-License-Identifier: Apache-2.0
#include "isvd/driver.hpp"

#include "isvd/buffered.hpp"
#include "isvd/errors.hpp"
#include "isvd/isvd1.hpp"
#include "isvd/isvd2.hpp"
#include "isvd/linalg.hpp"
#include "isvd/oracle.hpp"

#include <chrono>
#include <memory>

namespace isvd {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Vector first_column(const ColumnSource& columns) {
  Vector u;
  if (!columns(u)) throw DegenerateInputError("empty column stream");
  return u;
}

void tally(RunStats& stats, const UpdateReport& r) {
  switch (r.branch) {
    case Branch::buffered:
      ++stats.buffered;
      break;
    case Branch::rank_grew:
      ++stats.rank_grew;
      break;
    case Branch::rank_held:
      ++stats.rank_held;
      break;
    case Branch::sv_truncated:
      ++stats.sv_truncated;
      break;
  }
  if (r.reorth_fired) ++stats.reorth_fired;
  stats.svd_calls += r.svd_calls;
  stats.m_allocations += r.m_allocations;
}

// Shared loop: `update` consumes one column and returns its report,
// `left` yields the working left factor for E_W sampling and `snapshot` the
// current factorization should an update abort.
template <typename Update, typename Left, typename Snapshot>
void drive(const ColumnSource& columns, const WeightOperator& w, const RunOptions& opts,
           RunStats& stats, const Stopwatch& clock, Update&& update, Left&& left,
           Snapshot&& snapshot) {
  Vector u;
  while (columns(u)) {
    UpdateReport r;
    try {
      r = update(u);
    } catch (const DegenerateInputError& e) {
      RunResult partial{snapshot(), stats};
      partial.stats.final_orthogonality = orthogonality_error(partial.svd.q, w);
      partial.stats.wall_seconds = clock.seconds();
      throw RunAborted("update of column " + std::to_string(stats.columns) + " aborted: " + e.what(),
                       std::move(partial));
    }
    tally(stats, r);
    ++stats.columns;
    if (opts.on_update) opts.on_update(r);
    if (opts.sample_every > 0 && r.column_index % opts.sample_every == 0) {
      stats.orth_samples.push_back({r.column_index, orthogonality_error(left(), w)});
    }
  }
}

const UpdateHooks* hooks_of(const RunOptions& opts) {
  return opts.hooks.on_bordered ? &opts.hooks : nullptr;
}

}  // namespace

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::isvd1:
      return "isvd1";
    case Algorithm::isvd2:
      return "isvd2";
    case Algorithm::isvd3:
      return "isvd3";
    case Algorithm::isvd4:
      return "isvd4";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  for (Algorithm a : {Algorithm::isvd1, Algorithm::isvd2, Algorithm::isvd3, Algorithm::isvd4}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

ColumnSource matrix_columns(const Matrix& u) {
  auto next = std::make_shared<Index>(0);
  return [&u, next](Vector& out) {
    if (*next >= u.cols()) return false;
    out = u.col((*next)++);
    return true;
  };
}

RunResult run_isvd1(const ColumnSource& columns, const WeightOperator& w, const ToleranceConfig& cfg,
                    const RunOptions& opts) {
  cfg.validate();
  const Stopwatch clock;
  RunResult out;
  out.svd = initialize(first_column(columns), w);
  out.stats.columns = 1;
  CoreSVD& s = out.svd;
  drive(
      columns, w, opts, out.stats, clock,
      [&](const Vector& u) {
        UpdateReport r = update_isvd1(s, u, w, cfg, hooks_of(opts));
        if (opts.reorthogonalize) r.reorth_fired = reorthogonalize_w(s.q, w, cfg.tol);
        return r;
      },
      [&]() -> const Matrix& { return s.q; }, [&]() { return s; });
  out.stats.final_orthogonality = orthogonality_error(s.q, w);
  out.stats.wall_seconds = clock.seconds();
  return out;
}

RunResult run_isvd2(const ColumnSource& columns, const WeightOperator& w, const ToleranceConfig& cfg,
                    const RunOptions& opts) {
  cfg.validate();
  const Stopwatch clock;
  RunResult out;
  FiveMatrixState s = FiveMatrixState::from(initialize(first_column(columns), w));
  out.stats.columns = 1;
  drive(
      columns, w, opts, out.stats, clock,
      [&](const Vector& u) { return update_isvd2(s, u, w, cfg, hooks_of(opts)); },
      [&]() { return s.left_factor(); }, [&]() { return s.assemble(); });
  out.svd = s.assemble();
  out.stats.final_orthogonality = orthogonality_error(out.svd.q, w);
  out.stats.wall_seconds = clock.seconds();
  return out;
}

namespace {

RunResult run_buffered(const ColumnSource& columns, const WeightOperator& w,
                       const ToleranceConfig& cfg, const RunOptions& opts, bool variant_four) {
  cfg.validate();
  const Stopwatch clock;
  RunResult out;
  BufferedState s = BufferedState::from(initialize(first_column(columns), w));
  out.stats.columns = 1;
  drive(
      columns, w, opts, out.stats, clock,
      [&](const Vector& u) {
        return variant_four ? update_isvd4(s, u, w, cfg, hooks_of(opts))
                            : update_isvd3(s, u, w, cfg, hooks_of(opts));
      },
      [&]() { return s.left_factor(); },
      [&]() { return variant_four ? finalize_isvd4(s) : finalize_isvd3(s); });
  out.svd = variant_four ? finalize_isvd4(s) : finalize_isvd3(s);
  if (s.q() > 0) ++out.stats.svd_calls;
  out.stats.final_orthogonality = orthogonality_error(out.svd.q, w);
  out.stats.wall_seconds = clock.seconds();
  return out;
}

}  // namespace

RunResult run_isvd3(const ColumnSource& columns, const WeightOperator& w, const ToleranceConfig& cfg,
                    const RunOptions& opts) {
  return run_buffered(columns, w, cfg, opts, false);
}

RunResult run_isvd4(const ColumnSource& columns, const WeightOperator& w, const ToleranceConfig& cfg,
                    const RunOptions& opts) {
  return run_buffered(columns, w, cfg, opts, true);
}

RunResult run(Algorithm algorithm, const ColumnSource& columns, const WeightOperator& w,
              const ToleranceConfig& cfg, const RunOptions& opts) {
  switch (algorithm) {
    case Algorithm::isvd1:
      return run_isvd1(columns, w, cfg, opts);
    case Algorithm::isvd2:
      return run_isvd2(columns, w, cfg, opts);
    case Algorithm::isvd3:
      return run_isvd3(columns, w, cfg, opts);
    case Algorithm::isvd4:
      return run_isvd4(columns, w, cfg, opts);
  }
  return run_isvd3(columns, w, cfg, opts);
}

}  // namespace isvd
