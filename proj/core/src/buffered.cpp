// SPDX-License-Identifier: Apache-2.0
#include "isvd/buffered.hpp"

#include "isvd/isvd1.hpp"

#include "detail.hpp"

#include <cmath>

namespace isvd {

namespace {

// Absorbs the buffered coefficient vectors with one thin SVD of
// [diag(sigma) | V]. Returns the left rotation Q_Y; sigma and R are updated
// in place and the buffer is cleared.
Matrix flush(BufferedState& s) {
  const Index k = s.rank();
  const Index nq = s.q();
  Matrix y(k, k + nq);
  y.leftCols(k).setZero();
  y.leftCols(k).diagonal() = s.base.sigma;
  for (Index j = 0; j < nq; ++j) y.col(k + j) = s.v[static_cast<std::size_t>(j)];

  SvdResult f = svd_thin_wide(y);
  ++s.counters.svd_calls;
  ++s.counters.flushes;

  const Index rows = s.base.r.rows();
  Matrix r(rows + nq, k);
  r.topRows(rows) = s.base.r * f.v.topRows(k);
  r.bottomRows(nq) = f.v.bottomRows(nq);
  s.base.r = std::move(r);
  s.base.sigma = f.s;
  s.v.clear();
  return std::move(f.u);
}

// New W-unit direction from the residual held in the workspace, with the
// one-shot re-projection when it fails the test against Q(:,1).
Vector new_direction(const BufferedState& s, double p, const WeightOperator& w, double tol,
                     bool& reprojected) {
  Vector e = s.workspace.e / p;
  const Matrix& q = s.base.q;
  reprojected = std::abs(w_inner(e, q.col(0), w)) > tol;
  if (reprojected) {
    const Vector we = w.apply(e);
    e.noalias() -= q * (q.transpose() * we);
    const double p1 = w_norm(e, w);
    if (!(p1 >= 1e-300)) throw DegenerateInputError("re-projected residual collapsed");
    e /= p1;
  }
  return e;
}

enum class Variant { three, four };

UpdateReport update_buffered(BufferedState& s, const Eigen::Ref<const Vector>& u,
                             const WeightOperator& w, const ToleranceConfig& cfg,
                             const UpdateHooks* hooks, Variant variant) {
  const Index m = w.dimension();
  const Index k = s.rank();
  detail::check_column(u, m);

  UpdateReport report;
  report.column_index = s.base.columns_seen;
  const long allocs_before = s.workspace.allocations;
  Vector d;
  const double p = residual_into(u, s.base.q, w, s.workspace, d);
  report.p = p;
  ++s.base.columns_seen;

  if (p < cfg.tol) {
    if (variant == Variant::three) {
      s.v.push_back(s.q0.transpose() * d);
    } else {
      s.v.push_back(std::move(d));
    }
    report.branch = Branch::buffered;
    report.rank_after = k;
    report.m_allocations = s.workspace.allocations - allocs_before;
    s.counters.m_allocations += report.m_allocations;
    return report;
  }

  detail::check_rank_cap(k + 1, m, cfg);
  if (s.q() > 0) {
    s.q0 = s.q0 * flush(s);
    ++report.svd_calls;
  }
  const Vector dt = s.q0.transpose() * d;
  Vector e = new_direction(s, p, w, cfg.tol, report.reorth_fired);

  const SvdResult f = svd_full(detail::bordered_matrix(s.base.sigma, dt, p));
  ++report.svd_calls;
  ++s.counters.svd_calls;
  detail::notify_bordered(hooks, s.base.sigma, dt, p, f.s);

  const Matrix q0 = block_identity_pad(s.q0, 1) * f.u;
  Matrix qe(m, k + 1);
  qe.leftCols(k) = s.base.q;
  qe.col(k) = std::move(e);
  // e, qe, the re-projection product and, for IV, the rotated basis.
  report.m_allocations = s.workspace.allocations - allocs_before + 2 + (report.reorth_fired ? 1 : 0) +
                         (variant == Variant::four ? 1 : 0);
  const Matrix r = block_identity_pad(s.base.r, 1);

  if (variant == Variant::three) {
    s.q0 = q0;
    s.base.q = std::move(qe);
    s.base.sigma = f.s;
    s.base.r = r * f.v;
    report.branch = Branch::rank_grew;
  } else if (f.s(k) >= cfg.tol) {
    s.base.q = qe * q0;
    s.base.sigma = f.s;
    s.base.r = r * f.v;
    s.q0 = Matrix::Identity(k + 1, k + 1);
    report.branch = Branch::rank_grew;
  } else {
    s.base.q = qe * q0.leftCols(k);
    s.base.sigma = f.s.head(k);
    s.base.r = r * f.v.leftCols(k);
    s.q0 = Matrix::Identity(k, k);
    report.branch = Branch::sv_truncated;
  }
  s.counters.m_allocations += report.m_allocations;
  report.rank_after = s.rank();
  return report;
}

CoreSVD finalize_buffered(const BufferedState& s) {
  BufferedState tmp{s.base, s.q0, s.v, s.counters, {}};
  if (tmp.q() > 0) tmp.q0 = tmp.q0 * flush(tmp);
  CoreSVD out = std::move(tmp.base);
  out.q = out.q * tmp.q0;
  return out;
}

}  // namespace

BufferedState BufferedState::from(CoreSVD init) {
  BufferedState s;
  const Index k = init.rank();
  s.base = std::move(init);
  s.q0 = Matrix::Identity(k, k);
  return s;
}

Matrix BufferedState::left_factor() const { return base.q * q0; }

UpdateReport update_isvd3(BufferedState& s, const Eigen::Ref<const Vector>& u,
                          const WeightOperator& w, const ToleranceConfig& cfg,
                          const UpdateHooks* hooks) {
  return update_buffered(s, u, w, cfg, hooks, Variant::three);
}

UpdateReport update_isvd4(BufferedState& s, const Eigen::Ref<const Vector>& u,
                          const WeightOperator& w, const ToleranceConfig& cfg,
                          const UpdateHooks* hooks) {
  return update_buffered(s, u, w, cfg, hooks, Variant::four);
}

CoreSVD finalize_isvd3(const BufferedState& s) { return finalize_buffered(s); }

CoreSVD finalize_isvd4(const BufferedState& s) { return finalize_buffered(s); }

}  // namespace isvd
