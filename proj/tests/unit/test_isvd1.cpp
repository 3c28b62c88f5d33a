// SPDX-License-Identifier: Apache-2.0
#include "isvd/driver.hpp"
#include "isvd/errors.hpp"
#include "isvd/isvd1.hpp"
#include "isvd/oracle.hpp"
#include "isvd/properties.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace isvd {
namespace {

using test::column_distance_up_to_sign;
using test::diag;
using test::diag_weight;
using test::vec;

TEST(Initialize, Examples) {
  CoreSVD s = initialize(vec({3, 4}), WeightOperator::identity(2));
  EXPECT_EQ(s.sigma, vec({5}));
  EXPECT_LE((s.q.col(0) - vec({0.6, 0.8})).norm(), 1e-16);
  EXPECT_EQ(s.r, Matrix::Ones(1, 1));
  EXPECT_EQ(s.columns_seen, 1);

  s = initialize(vec({1, 1}), diag_weight({4, 1}));
  EXPECT_DOUBLE_EQ(s.sigma(0), std::sqrt(5.0));
  EXPECT_LE((s.q.col(0) - vec({1, 1}) / std::sqrt(5.0)).norm(), 1e-16);
}

TEST(Initialize, ZeroColumnThrows) {
  EXPECT_THROW(initialize(vec({0, 0}), WeightOperator::identity(2)), DegenerateInputError);
}

TEST(UpdateIsvd1, OrthogonalColumnGrowsRank) {
  const WeightOperator w = WeightOperator::identity(2);
  CoreSVD s = initialize(vec({1, 0}), w);
  const UpdateReport r = update_isvd1(s, vec({0, 1}), w, ToleranceConfig{});
  EXPECT_EQ(r.branch, Branch::rank_grew);
  EXPECT_EQ(s.rank(), 2);
  EXPECT_LE((s.sigma - vec({1, 1})).norm(), 1e-15);
  EXPECT_LE(column_distance_up_to_sign(s.q, Matrix::Identity(2, 2)), 1e-15);
}

TEST(UpdateIsvd1, DependentColumnHoldsRank) {
  const WeightOperator w = WeightOperator::identity(2);
  CoreSVD s = initialize(vec({1, 0}), w);
  const UpdateReport r = update_isvd1(s, vec({2, 0}), w, ToleranceConfig{});
  EXPECT_EQ(r.branch, Branch::rank_held);
  EXPECT_EQ(r.p, 0.0);
  EXPECT_EQ(s.rank(), 1);
  EXPECT_NEAR(s.sigma(0), std::sqrt(5.0), 1e-15);
  EXPECT_LE(column_distance_up_to_sign(s.r, vec({1, 2}) / std::sqrt(5.0)), 1e-15);
  EXPECT_EQ(s.columns_seen, 2);
}

TEST(UpdateIsvd1, TruncatesTrailingValuesBelowTol) {
  const WeightOperator w = WeightOperator::identity(2);
  CoreSVD s = initialize(vec({1, 0}), w);
  ToleranceConfig cfg;
  cfg.tol = 1e-3;
  const UpdateReport r = update_isvd1(s, vec({1, 1.01e-3}), w, cfg);
  EXPECT_EQ(r.branch, Branch::sv_truncated);
  EXPECT_EQ(s.rank(), 1);
  EXPECT_NEAR(s.sigma(0), 1.4142137427030366, 1e-15);
}

TEST(UpdateIsvd1, CountAtLeast) {
  EXPECT_EQ(count_at_least(vec({3, 2, 1e-13}), 1e-12), 2);
  EXPECT_EQ(count_at_least(vec({3, 2, 1e-12}), 1e-12), 3);
}

TEST(UpdateIsvd1, BlockIdentityPad) {
  const Matrix p = block_identity_pad(Matrix::Constant(2, 1, 5.0), 2);
  EXPECT_EQ(p.rows(), 4);
  EXPECT_EQ(p.cols(), 3);
  EXPECT_EQ(p(0, 0), 5.0);
  EXPECT_EQ(p(2, 1), 1.0);
  EXPECT_EQ(p(3, 2), 1.0);
  EXPECT_EQ(p(2, 0), 0.0);
}

TEST(RunIsvd1, SingleColumnEqualsInitialize) {
  const Matrix u = vec({3, 4});
  const RunResult r = run_isvd1(matrix_columns(u), WeightOperator::identity(2), ToleranceConfig{});
  const CoreSVD s = initialize(u.col(0), WeightOperator::identity(2));
  EXPECT_EQ(r.svd.sigma, s.sigma);
  EXPECT_EQ(r.svd.q, s.q);
}

TEST(RunIsvd1, DiagonalMatrix) {
  const Matrix u = diag({3, 2, 1});
  const RunResult r = run_isvd1(matrix_columns(u), WeightOperator::identity(3), ToleranceConfig{});
  EXPECT_LE((r.svd.sigma - vec({3, 2, 1})).norm(), 1e-15);
}

TEST(RunIsvd1, RandomLowRankMatchesOracle) {
  Rng rng(21);
  const Matrix u = random_low_rank(rng, 20, 30, 5);
  const WeightOperator w = WeightOperator::identity(20);
  const RunResult r = run_isvd1(matrix_columns(u), w, ToleranceConfig{});
  const CoreSVD ref = dense_svd_oracle(u, w);
  ASSERT_EQ(r.svd.rank(), 5);
  ASSERT_EQ(ref.rank(), 5);
  for (Index i = 0; i < 5; ++i) EXPECT_NEAR(r.svd.sigma(i), ref.sigma(i), 1e-10 * ref.sigma(i));
  EXPECT_LE((u - r.svd.q * r.svd.sigma.asDiagonal() * r.svd.r.transpose()).norm(), 1e-9 * u.norm());
}

TEST(RunIsvd1, WeightedFactorsAreOrthonormal) {
  Rng rng(22);
  const Matrix u = random_low_rank(rng, 30, 40, 6);
  const WeightOperator w = random_diagonal_weight(rng, 30);
  const RunResult r = run_isvd1(matrix_columns(u), w, ToleranceConfig{});
  EXPECT_LE(orthogonality_error(r.svd.q, w), 1e-10);
  EXPECT_LE((r.svd.r.transpose() * r.svd.r - Matrix::Identity(6, 6)).norm(), 1e-10);
}

}  // namespace
}  // namespace isvd
