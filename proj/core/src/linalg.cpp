// SPDX-License-Identifier: Apache-2.0
#include "isvd/linalg.hpp"

#include "isvd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace isvd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();
constexpr int kMaxSweeps = 100;

void check_same_length(Index a, Index b) {
  if (a != b) {
    throw DimensionError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

void require_finite(const Eigen::Ref<const Matrix>& y) {
  if (!y.allFinite()) throw NumericalError("SVD input has non-finite entries");
}

// 2x2 matrix [[m00, m01], [m10, m11]].
struct Mat2 {
  double m00, m01, m10, m11;
};

Mat2 multiply(const Mat2& a, const Mat2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

// rows (p, q) <- G^T rows (p, q)
void rotate_rows(Matrix& a, Index p, Index q, const Mat2& g) {
  for (Index j = 0; j < a.cols(); ++j) {
    const double x = a(p, j);
    const double y = a(q, j);
    a(p, j) = g.m00 * x + g.m10 * y;
    a(q, j) = g.m01 * x + g.m11 * y;
  }
}

// columns (p, q) <- columns (p, q) G
void rotate_cols(Matrix& a, Index p, Index q, const Mat2& g) {
  auto cp = a.col(p);
  auto cq = a.col(q);
  for (Index i = 0; i < a.rows(); ++i) {
    const double x = cp(i);
    const double y = cq(i);
    cp(i) = x * g.m00 + y * g.m10;
    cq(i) = x * g.m01 + y * g.m11;
  }
}

// Rotations L, J with L^T [[a, b], [g, h]] J diagonal.
void two_by_two_svd(double a, double b, double g, double h, Mat2& left, Mat2& right) {
  // Symmetrize: P^T A symmetric with P = [[c, -s], [s, c]].
  double c1 = 1.0;
  double s1 = 0.0;
  const double rho = std::hypot(a + h, g - b);
  if (rho > 0.0) {
    c1 = (a + h) / rho;
    s1 = (g - b) / rho;
  }
  const Mat2 pmat{c1, -s1, s1, c1};
  const double x = c1 * a + s1 * g;
  const double y = c1 * b + s1 * h;
  const double z = -s1 * b + c1 * h;
  // Symmetric Schur step on [[x, y], [y, z]].
  double c = 1.0;
  double s = 0.0;
  if (y != 0.0) {
    const double tau = (z - x) / (2.0 * y);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
    c = 1.0 / std::hypot(1.0, t);
    s = t * c;
  }
  right = {c, s, -s, c};
  left = multiply(pmat, right);
}

// Sort descending, make the diagonal nonnegative and fix signs.
SvdResult canonicalize(const Matrix& work, Matrix u, Matrix v) {
  const Index n = work.rows();
  Vector d = work.diagonal();
  for (Index i = 0; i < n; ++i) {
    if (d(i) < 0.0) {
      d(i) = -d(i);
      u.col(i) = -u.col(i);
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return d(i) > d(j); });

  SvdResult out{Matrix(u.rows(), n), Vector(n), Matrix(v.rows(), n)};
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.s(k) = d(src);
    out.u.col(k) = u.col(src);
    out.v.col(k) = v.col(src);
  }
  for (Index k = 0; k < n; ++k) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < out.u.rows(); ++i) {
      const double a = std::abs(out.u(i, k));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (out.u(best, k) < 0.0) {
      out.u.col(k) = -out.u.col(k);
      out.v.col(k) = -out.v.col(k);
    }
  }
  return out;
}

}  // namespace

double w_inner(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b,
               const WeightOperator& w) {
  check_same_length(a.size(), w.dimension());
  check_same_length(b.size(), w.dimension());
  if (w.is_identity()) return a.dot(b);
  return a.dot(w.apply(b));
}

double w_norm(const Eigen::Ref<const Vector>& v, const WeightOperator& w) {
  return std::sqrt(std::max(w_inner(v, v, w), 0.0));
}

Residual residual(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Matrix>& q,
                  const WeightOperator& w) {
  ResidualWorkspace ws;
  Vector d;
  const double p = residual_into(u, q, w, ws, d);
  return {std::move(d), std::move(ws.e), p};
}

void ResidualWorkspace::reserve(Index m) {
  if (e.size() != m) {
    wu.resize(m);
    e.resize(m);
    we.resize(m);
    ++allocations;
  }
}

double residual_into(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Matrix>& q,
                     const WeightOperator& w, ResidualWorkspace& ws, Vector& d) {
  const Index m = w.dimension();
  check_same_length(u.size(), m);
  check_same_length(q.rows(), m);
  ws.reserve(m);
  if (d.size() != q.cols()) d.resize(q.cols());
  if (w.is_identity()) {
    d.noalias() = q.transpose() * u;
  } else {
    w.apply_into(u, ws.wu);
    d.noalias() = q.transpose() * ws.wu;
  }
  ws.e = u;
  ws.e.noalias() -= q * d;
  double pp = 0.0;
  if (w.is_identity()) {
    pp = ws.e.squaredNorm();
  } else {
    w.apply_into(ws.e, ws.we);
    pp = ws.e.dot(ws.we);
  }
  return std::sqrt(std::max(pp, 0.0));
}

SvdResult svd_full(const Eigen::Ref<const Matrix>& y) {
  if (y.rows() != y.cols()) {
    throw DimensionError("svd_full expects a square matrix, got " + std::to_string(y.rows()) + "x" +
                         std::to_string(y.cols()));
  }
  require_finite(y);
  const Index n = y.rows();
  Matrix work = y;
  Matrix u = Matrix::Identity(n, n);
  Matrix v = Matrix::Identity(n, n);

  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double a = work(p, p);
        const double b = work(p, q);
        const double g = work(q, p);
        const double h = work(q, q);
        const double threshold = std::max(kTiny, 2.0 * kEps * std::sqrt(std::abs(a) * std::abs(h)));
        if (std::abs(b) <= threshold && std::abs(g) <= threshold) continue;
        converged = false;
        Mat2 left;
        Mat2 right;
        two_by_two_svd(a, b, g, h, left, right);
        rotate_rows(work, p, q, left);
        rotate_cols(work, p, q, right);
        work(p, q) = 0.0;
        work(q, p) = 0.0;
        rotate_cols(u, p, q, left);
        rotate_cols(v, p, q, right);
      }
    }
  }
  if (!converged) throw NumericalError("Jacobi SVD did not converge");
  return canonicalize(work, std::move(u), std::move(v));
}

SvdResult svd_thin_wide(const Eigen::Ref<const Matrix>& y) {
  const Index k = y.rows();
  const Index n = y.cols();
  if (n < k) {
    throw DimensionError("svd_thin_wide expects a wide matrix, got " + std::to_string(k) + "x" +
                         std::to_string(n));
  }
  require_finite(y);
  // Y^T = H R  =>  Y = R^T H^T; only the k x k triangle goes through Jacobi.
  Eigen::HouseholderQR<Matrix> qr(y.transpose());
  const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Matrix h = qr.householderQ() * Matrix::Identity(n, k);
  SvdResult inner = svd_full(r.transpose());
  return {std::move(inner.u), std::move(inner.s), h * inner.v};
}

Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& a) {
  const SvdResult f = svd_full(a);
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);
  const double cutoff = static_cast<double>(n) * kEps * f.s(0);
  if (f.s(n - 1) <= cutoff) {
    throw DegenerateInputError("pseudo-inverse of a numerically singular update block (sigma_min=" +
                               std::to_string(f.s(n - 1)) + ")");
  }
  return f.v * f.s.cwiseInverse().asDiagonal() * f.u.transpose();
}

bool reorthogonalize_w(Matrix& q, const WeightOperator& w, double tol) {
  check_same_length(q.rows(), w.dimension());
  const Index k = q.cols();
  if (k == 0) return false;
  // With a single column the first/last test degenerates to a norm test.
  const double probe = w_inner(q.col(k - 1), q.col(0), w);
  const bool fire = k == 1 ? std::abs(probe - 1.0) > tol : std::abs(probe) > tol;
  if (!fire) return false;

  Matrix wq = w.is_identity() ? Matrix() : Matrix(q.rows(), k);
  for (Index i = 0; i < k; ++i) {
    auto qi = q.col(i);
    for (Index j = 0; j < i; ++j) {
      const double c = w.is_identity() ? qi.dot(q.col(j)) : qi.dot(wq.col(j));
      qi -= c * q.col(j);
    }
    double nn = 0.0;
    if (w.is_identity()) {
      nn = qi.squaredNorm();
    } else {
      w.apply_into(qi, wq.col(i));
      nn = qi.dot(wq.col(i));
    }
    const double norm = std::sqrt(std::max(nn, 0.0));
    if (!(norm >= 1e-300)) {
      throw DegenerateInputError("Gram-Schmidt column " + std::to_string(i) + " collapsed");
    }
    qi /= norm;
    if (!w.is_identity()) wq.col(i) /= norm;
  }
  return true;
}

Matrix gram_schmidt_w(const Eigen::Ref<const Matrix>& q, const WeightOperator& w, double tol) {
  Matrix out = q;
  reorthogonalize_w(out, w, tol);
  return out;
}

}  // namespace isvd
