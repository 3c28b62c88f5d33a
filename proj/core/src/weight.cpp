// SPDX-License-Identifier: Apache-2.0
#include "isvd/weight.hpp"

#include "isvd/errors.hpp"

#include <cmath>
#include <string>

namespace isvd {

namespace {

void require_square(Index rows, Index cols) {
  if (rows != cols || rows < 1) {
    throw DimensionError("weight matrix must be square and nonempty, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
}

}  // namespace

WeightOperator WeightOperator::identity(Index m) {
  if (m < 1) throw DimensionError("identity weight needs m >= 1");
  return WeightOperator(WeightKind::identity, m);
}

WeightOperator WeightOperator::dense(Matrix w) {
  require_square(w.rows(), w.cols());
  const double scale = w.cwiseAbs().maxCoeff();
  if (!w.allFinite()) throw NumericalError("weight matrix has non-finite entries");
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DimensionError("dense weight matrix is not symmetric");
  }
  WeightOperator op(WeightKind::dense, w.rows());
  op.dense_ = std::make_shared<const Matrix>(std::move(w));
  return op;
}

WeightOperator WeightOperator::sparse(SparseMatrix w) {
  require_square(w.rows(), w.cols());
  w.makeCompressed();
  const SparseMatrix wt = w.transpose();
  double scale = 0.0;
  for (Index k = 0; k < w.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(w, k); it; ++it) {
      if (!std::isfinite(it.value())) throw NumericalError("weight matrix has non-finite entries");
      scale = std::max(scale, std::abs(it.value()));
    }
  }
  const SparseMatrix diff = w - wt;
  for (Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      if (std::abs(it.value()) > 1e-12 * scale) {
        throw DimensionError("sparse weight matrix is not symmetric");
      }
    }
  }
  WeightOperator op(WeightKind::sparse, w.rows());
  op.sparse_ = std::make_shared<const SparseMatrix>(std::move(w));
  return op;
}

void WeightOperator::check_length(Index n) const {
  if (n != m_) {
    throw DimensionError("vector length " + std::to_string(n) + " does not match weight dimension " +
                         std::to_string(m_));
  }
}

Vector WeightOperator::apply(const Eigen::Ref<const Vector>& v) const {
  Vector out(m_);
  apply_into(v, out);
  return out;
}

Matrix WeightOperator::apply_columns(const Eigen::Ref<const Matrix>& x) const {
  check_length(x.rows());
  switch (kind_) {
    case WeightKind::identity:
      return x;
    case WeightKind::dense:
      return (*dense_) * x;
    case WeightKind::sparse:
      return (*sparse_) * x;
  }
  return x;
}

void WeightOperator::apply_into(const Eigen::Ref<const Vector>& v, Eigen::Ref<Vector> out) const {
  check_length(v.size());
  check_length(out.size());
  switch (kind_) {
    case WeightKind::identity:
      out = v;
      break;
    case WeightKind::dense:
      out.noalias() = (*dense_) * v;
      break;
    case WeightKind::sparse:
      out.noalias() = (*sparse_) * v;
      break;
  }
}

Matrix WeightOperator::to_dense() const {
  switch (kind_) {
    case WeightKind::identity:
      return Matrix::Identity(m_, m_);
    case WeightKind::dense:
      return *dense_;
    case WeightKind::sparse:
      return Matrix(*sparse_);
  }
  return {};
}

}  // namespace isvd
