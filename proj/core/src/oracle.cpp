// SPDX-License-Identifier: Apache-2.0
#include "isvd/oracle.hpp"

#include "isvd/errors.hpp"
#include "isvd/isvd1.hpp"
#include "isvd/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace isvd {

namespace {

constexpr double kDeskScaleLimit = 1e8;

// Plain triple loop: both sides of the block identity must be summed in the
// same order so that only exact zeros differ between them.
Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (Index l = 0; l < a.cols(); ++l) acc += a(i, l) * b(l, j);
      c(i, j) = acc;
    }
  }
  return c;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

CoreSVD dense_svd_oracle(const Eigen::Ref<const Matrix>& u, const WeightOperator& w) {
  if (u.rows() != w.dimension()) {
    throw DimensionError("oracle input has " + std::to_string(u.rows()) +
                         " rows but the weight has dimension " + std::to_string(w.dimension()));
  }
  if (static_cast<double>(u.rows()) * static_cast<double>(u.cols()) > kDeskScaleLimit) {
    throw DimensionError("dense oracle refuses inputs with m*n > 1e8");
  }

  Matrix q;
  Vector s;
  Matrix r;
  if (w.is_identity()) {
    Eigen::BDCSVD<Matrix> svd(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
    q = svd.matrixU();
    s = svd.singularValues();
    r = svd.matrixV();
  } else {
    const Eigen::LLT<Matrix> llt(w.to_dense());
    if (llt.info() != Eigen::Success) {
      throw DegenerateInputError("weight matrix is not positive definite");
    }
    const Matrix b = llt.matrixU() * u;
    Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    q = llt.matrixU().solve(svd.matrixU());
    s = svd.singularValues();
    r = svd.matrixV();
  }

  Index keep = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    const double cutoff = 1e-14 * s(0);
    while (keep < s.size() && s(keep) > cutoff) ++keep;
  }
  return CoreSVD{q.leftCols(keep), s.head(keep), r.leftCols(keep), u.cols()};
}

double orthogonality_error(const Eigen::Ref<const Matrix>& q, const WeightOperator& w) {
  if (q.rows() != w.dimension()) throw DimensionError("orthogonality_error: row count mismatch");
  const Matrix g = w.is_identity() ? Matrix(q.transpose() * q) : Matrix(q.transpose() * w.apply_columns(q));
  return (Matrix::Identity(q.cols(), q.cols()) - g).norm();
}

std::vector<double> principal_angles(const Eigen::Ref<const Matrix>& q1,
                                     const Eigen::Ref<const Matrix>& q2, const WeightOperator& w) {
  if (q1.rows() != w.dimension() || q2.rows() != w.dimension() || q1.cols() != q2.cols()) {
    throw DimensionError("principal_angles: factors must share shape and match the weight");
  }
  const Index k = q1.cols();
  const Matrix wq2 = w.apply_columns(q2);
  const Matrix c = q1.transpose() * wq2;
  const Eigen::JacobiSVD<Matrix> svd(c);
  const Vector cosines = svd.singularValues();  // descending

  const Matrix s = q2 - q1 * c;
  const Matrix g = w.is_identity() ? Matrix(s.transpose() * s) : Matrix(s.transpose() * w.apply_columns(s));
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
  const Vector sines_sq = eig.eigenvalues();  // ascending

  std::vector<double> angles(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    const double cs = std::clamp(cosines(i), 0.0, 1.0);
    const double sn = std::clamp(std::sqrt(std::max(sines_sq(i), 0.0)), 0.0, 1.0);
    angles[static_cast<std::size_t>(i)] = sn < std::sqrt(0.5) ? std::asin(sn) : std::acos(cs);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

InterlacingCheck check_interlacing(const Eigen::Ref<const Vector>& sigma,
                                   const Eigen::Ref<const Vector>& d, double p, double slack) {
  const Index k = sigma.size();
  if (d.size() != k) throw DimensionError("check_interlacing: d must match sigma");
  Matrix y = Matrix::Zero(k + 1, k + 1);
  y.topLeftCorner(k, k).diagonal() = sigma;
  y.topRightCorner(k, 1) = d;
  y(k, k) = p;
  return check_interlacing(BorderedStep{sigma, d, p, svd_full(y).s}, slack);
}

InterlacingCheck check_interlacing(const BorderedStep& step, double slack) {
  const Vector& sigma = step.sigma;
  const Vector& mu = step.mu;
  const Index k = sigma.size();
  InterlacingCheck out;
  out.mu = mu;
  if (mu.size() != k + 1) {
    out.pass = false;
    out.violations.push_back("spectrum has wrong length");
    return out;
  }
  const double t = k > 0 ? slack * sigma(0) : 0.0;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) {
      out.pass = false;
      out.violations.push_back(what);
    }
  };
  require(mu(k) <= step.p + t, "mu_{k+1}=" + fmt(mu(k)) + " > p=" + fmt(step.p));
  for (Index i = 0; i < k; ++i) {
    require(sigma(i) <= mu(i) + t, "sigma_" + std::to_string(i + 1) + "=" + fmt(sigma(i)) +
                                       " > mu_" + std::to_string(i + 1) + "=" + fmt(mu(i)));
    require(mu(i + 1) <= sigma(i) + t, "mu_" + std::to_string(i + 2) + "=" + fmt(mu(i + 1)) +
                                           " > sigma_" + std::to_string(i + 1) + "=" + fmt(sigma(i)));
  }
  return out;
}

BlockIdentityCheck check_block_identity(const Eigen::Ref<const Matrix>& a,
                                        const Eigen::Ref<const Matrix>& b) {
  if (b.rows() != a.cols() + 1 || b.cols() != a.cols()) {
    throw DimensionError("check_block_identity: B must be (n+1) x n for A m x n");
  }
  const Matrix lhs = block_identity_pad(naive_product(block_identity_pad(a, 1), b), 1);
  const Matrix rhs = naive_product(block_identity_pad(a, 2), block_identity_pad(b, 1));
  BlockIdentityCheck out;
  out.max_abs_entry = std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff());
  out.max_abs_diff = (lhs - rhs).cwiseAbs().maxCoeff();
  out.pass = out.max_abs_diff <= 1e-15 * out.max_abs_entry;
  return out;
}

double projection_invariance_error(const Eigen::Ref<const Matrix>& q, const Eigen::Ref<const Matrix>& g,
                                   const Eigen::Ref<const Vector>& x, const WeightOperator& w) {
  if (q.rows() != w.dimension() || x.size() != w.dimension() || g.rows() != q.cols() ||
      g.cols() != q.cols()) {
    throw DimensionError("projection_invariance_error: shape mismatch");
  }
  const Vector wx = w.apply(x);
  const Matrix qg = q * g;
  const Vector a = q * (q.transpose() * wx);
  const Vector b = qg * (qg.transpose() * wx);
  const double nx = x.norm();
  return nx > 0.0 ? (a - b).norm() / nx : (a - b).norm();
}

ZeroRowCheck check_zero_row_route(const Eigen::Ref<const Vector>& sigma, const Eigen::Ref<const Vector>& d) {
  const Index k = sigma.size();
  if (d.size() != k || k == 0) throw DimensionError("check_zero_row_route: d must match a nonempty sigma");
  Matrix wide = Matrix::Zero(k, k + 1);
  wide.leftCols(k).diagonal() = sigma;
  wide.col(k) = d;
  Matrix square = Matrix::Zero(k + 1, k + 1);
  square.topRows(k) = wide;
  const SvdResult sq = svd_full(square);
  const SvdResult wd = svd_thin_wide(wide);
  const double scale = std::max(sq.s(0), std::numeric_limits<double>::min());

  ZeroRowCheck out;
  out.spectrum_rel_error = (sq.s.head(k) - wd.s).cwiseAbs().maxCoeff() / scale;
  out.trailing_value = sq.s(k) / scale;
  for (Index j = 0; j < k; ++j) {
    const auto a = sq.u.col(j).head(k);
    const auto b = wd.u.col(j);
    out.left_factor_error = std::max(out.left_factor_error, std::min((a - b).norm(), (a + b).norm()));
  }
  return out;
}

SpectrumComparison compare_spectra(const Eigen::Ref<const Vector>& a,
                                   const Eigen::Ref<const Vector>& b, double floor) {
  const Index n = std::max(a.size(), b.size());
  SpectrumComparison out;
  out.abs_error.reserve(static_cast<std::size_t>(n));
  out.rel_error.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double ai = i < a.size() ? a(i) : 0.0;
    const double bi = i < b.size() ? b(i) : 0.0;
    const double abs_err = std::abs(ai - bi);
    const double denom = std::max(ai, floor);
    double rel = 0.0;
    if (denom > 0.0) {
      rel = abs_err / denom;
    } else if (abs_err > 0.0) {
      rel = std::numeric_limits<double>::infinity();
    }
    out.abs_error.push_back(abs_err);
    out.rel_error.push_back(rel);
    if (ai >= floor || bi >= floor) {
      ++out.count;
      out.max_rel_error = std::max(out.max_rel_error, rel);
    }
  }
  return out;
}

}  // namespace isvd
