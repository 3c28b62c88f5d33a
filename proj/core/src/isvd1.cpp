// SPDX-License-Identifier: Apache-2.0
#include "isvd/isvd1.hpp"

#include "detail.hpp"


namespace isvd {

Index count_at_least(const Eigen::Ref<const Vector>& sigma, double tol) noexcept {
  Index r = 0;
  while (r < sigma.size() && sigma(r) >= tol) ++r;
  return r;
}

Matrix block_identity_pad(const Eigen::Ref<const Matrix>& a, Index extra) {
  Matrix out = Matrix::Zero(a.rows() + extra, a.cols() + extra);
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(extra, extra).setIdentity();
  return out;
}

CoreSVD initialize(const Eigen::Ref<const Vector>& u1, const WeightOperator& w) {
  detail::check_column(u1, w.dimension());
  const double sigma = w_norm(u1, w);
  if (!(sigma >= 1e-300)) throw DegenerateInputError("first column is zero in the W norm");
  CoreSVD s;
  s.q = u1 / sigma;
  s.sigma = Vector::Constant(1, sigma);
  s.r = Matrix::Ones(1, 1);
  s.columns_seen = 1;
  return s;
}

UpdateReport update_isvd1(CoreSVD& s, const Eigen::Ref<const Vector>& u, const WeightOperator& w,
                          const ToleranceConfig& cfg, const UpdateHooks* hooks) {
  const Index m = w.dimension();
  const Index k = s.rank();
  detail::check_column(u, m);

  UpdateReport report;
  report.column_index = s.columns_seen;
  const Residual res = residual(u, s.q, w);
  report.p = res.p;

  if (res.p < cfg.tol) {
    const SvdResult f = svd_full(detail::bordered_matrix(s.sigma, res.d, 0.0));
    report.svd_calls = 1;
    detail::notify_bordered(hooks, s.sigma, res.d, 0.0, f.s);
    s.q = s.q * f.u.topLeftCorner(k, k);
    s.sigma = f.s.head(k);
    s.r = block_identity_pad(s.r, 1) * f.v.leftCols(k);
    report.branch = Branch::rank_held;
  } else {
    detail::check_rank_cap(k + 1, m, cfg);
    const SvdResult f = svd_full(detail::bordered_matrix(s.sigma, res.d, res.p));
    report.svd_calls = 1;
    detail::notify_bordered(hooks, s.sigma, res.d, res.p, f.s);
    Matrix qe(m, k + 1);
    qe.leftCols(k) = s.q;
    qe.col(k) = res.e / res.p;
    s.q = qe * f.u;
    s.sigma = f.s;
    s.r = block_identity_pad(s.r, 1) * f.v;

    const Index keep = count_at_least(s.sigma, cfg.tol);
    if (keep < k + 1) {
      s.q.conservativeResize(Eigen::NoChange, keep);
      s.sigma.conservativeResize(keep);
      s.r.conservativeResize(Eigen::NoChange, keep);
      report.branch = Branch::sv_truncated;
    } else {
      report.branch = Branch::rank_grew;
    }
  }
  ++s.columns_seen;
  report.rank_after = s.rank();
  return report;
}

}  // namespace isvd
