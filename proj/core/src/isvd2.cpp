// SPDX-License-Identifier: Apache-2.0
#include "isvd/isvd2.hpp"

#include "isvd/isvd1.hpp"

#include "detail.hpp"

namespace isvd {

FiveMatrixState FiveMatrixState::from(const CoreSVD& init) {
  FiveMatrixState s;
  const Index k = init.rank();
  s.q_out = init.q;
  s.q_small = Matrix::Identity(k, k);
  s.sigma = init.sigma;
  s.r_small = Matrix::Identity(k, k);
  s.r_small_pinv = Matrix::Identity(k, k);
  s.r_out = init.r;
  s.columns_seen = init.columns_seen;
  return s;
}

CoreSVD FiveMatrixState::assemble() const {
  return CoreSVD{q_out * q_small, sigma, r_out * r_small, columns_seen};
}

UpdateReport update_isvd2(FiveMatrixState& s, const Eigen::Ref<const Vector>& u,
                          const WeightOperator& w, const ToleranceConfig& cfg,
                          const UpdateHooks* hooks) {
  const Index m = w.dimension();
  const Index k = s.rank();
  detail::check_column(u, m);

  UpdateReport report;
  report.column_index = s.columns_seen;
  const Residual res = residual(u, s.q_out, w);
  report.p = res.p;
  // Coefficients with respect to the effective basis Q_out Q_small.
  const Vector d = s.q_small.transpose() * res.d;

  if (res.p < cfg.tol) {
    const SvdResult f = svd_full(detail::bordered_matrix(s.sigma, d, 0.0));
    report.svd_calls = 1;
    detail::notify_bordered(hooks, s.sigma, d, 0.0, f.s);
    const Matrix r1 = f.v.topLeftCorner(k, k);
    const Matrix r2 = f.v.block(k, 0, 1, k);
    s.q_small = s.q_small * f.u.topLeftCorner(k, k);
    s.sigma = f.s.head(k);
    s.r_small = s.r_small * r1;
    s.r_small_pinv = pseudo_inverse(r1) * s.r_small_pinv;
    const Index rows = s.r_out.rows();
    s.r_out.conservativeResize(rows + 1, Eigen::NoChange);
    s.r_out.row(rows) = r2 * s.r_small_pinv;
    report.branch = Branch::rank_held;
  } else {
    detail::check_rank_cap(k + 1, m, cfg);
    const SvdResult f = svd_full(detail::bordered_matrix(s.sigma, d, res.p));
    report.svd_calls = 1;
    detail::notify_bordered(hooks, s.sigma, d, res.p, f.s);
    s.q_small = block_identity_pad(s.q_small, 1) * f.u;
    s.q_out.conservativeResize(Eigen::NoChange, k + 1);
    s.q_out.col(k) = res.e / res.p;
    s.sigma = f.s;
    s.r_out = block_identity_pad(s.r_out, 1);
    s.r_small = block_identity_pad(s.r_small, 1) * f.v;
    s.r_small_pinv = f.v.transpose() * block_identity_pad(s.r_small_pinv, 1);
    report.branch = Branch::rank_grew;
  }
  s.counters.svd_calls += report.svd_calls;

  const Index kk = s.q_small.cols();
  report.reorth_fired = reorthogonalize_w(s.q_small, WeightOperator::identity(kk), cfg.tol);
  ++s.columns_seen;
  report.rank_after = s.rank();
  return report;
}

}  // namespace isvd
