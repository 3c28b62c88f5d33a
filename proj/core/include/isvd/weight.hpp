// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <memory>

namespace isvd {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

enum class WeightKind { identity, dense, sparse };

/// Symmetric positive definite weight W defining (a, b)_W = a^T W b.
///
/// Cheap to copy: dense and sparse storage is shared and immutable, so a
/// WeightOperator may be handed to several threads at once.
class WeightOperator {
 public:
  static WeightOperator identity(Index m);
  static WeightOperator dense(Matrix w);
  static WeightOperator sparse(SparseMatrix w);

  WeightKind kind() const noexcept { return kind_; }
  Index dimension() const noexcept { return m_; }
  bool is_identity() const noexcept { return kind_ == WeightKind::identity; }

  /// Returns W v.
  Vector apply(const Eigen::Ref<const Vector>& v) const;
  /// Returns W X column by column.
  Matrix apply_columns(const Eigen::Ref<const Matrix>& x) const;
  /// out = W v without allocating when `out` already has length m.
  void apply_into(const Eigen::Ref<const Vector>& v, Eigen::Ref<Vector> out) const;

  Matrix to_dense() const;
  /// Non-null only for kind() == sparse.
  const SparseMatrix* sparse_matrix() const noexcept { return sparse_.get(); }
  /// Non-null only for kind() == dense.
  const Matrix* dense_matrix() const noexcept { return dense_.get(); }

 private:
  WeightOperator(WeightKind kind, Index m) : kind_(kind), m_(m) {}
  void check_length(Index n) const;

  WeightKind kind_;
  Index m_;
  std::shared_ptr<const Matrix> dense_;
  std::shared_ptr<const SparseMatrix> sparse_;
};

}  // namespace isvd
