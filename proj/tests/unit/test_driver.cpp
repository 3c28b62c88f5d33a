// SPDX-License-Identifier: Apache-2.0
#include "isvd/driver.hpp"
#include "isvd/errors.hpp"
#include "isvd/properties.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace isvd {
namespace {

constexpr Algorithm kAll[] = {Algorithm::isvd1, Algorithm::isvd2, Algorithm::isvd3, Algorithm::isvd4};

TEST(Algorithm, NamesRoundTrip) {
  for (Algorithm a : kAll) EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_FALSE(parse_algorithm("isvd5").has_value());
}

TEST(MatrixColumns, YieldsEachColumnOnce) {
  const Matrix u = Matrix::Random(3, 4);
  const ColumnSource src = matrix_columns(u);
  Vector col;
  Index count = 0;
  while (src(col)) {
    EXPECT_EQ(col, u.col(count));
    ++count;
  }
  EXPECT_EQ(count, 4);
}

TEST(Run, EmptyStreamThrows) {
  const Matrix u(3, 0);
  for (Algorithm a : kAll) {
    EXPECT_THROW(run(a, matrix_columns(u), WeightOperator::identity(3), ToleranceConfig{}), DegenerateInputError);
  }
}

TEST(Run, BranchCountsSumToUpdates) {
  Rng rng(51);
  Matrix u = random_low_rank(rng, 30, 45, 5);
  u.col(20).setZero();
  for (Algorithm a : kAll) {
    const RunResult r = run(a, matrix_columns(u), WeightOperator::identity(30), ToleranceConfig{});
    EXPECT_EQ(r.stats.columns, 45) << to_string(a);
    EXPECT_EQ(r.stats.branch_total(), 44) << to_string(a);
    EXPECT_EQ(r.svd.columns_seen, 45) << to_string(a);
    EXPECT_EQ(r.svd.r.rows(), 45) << to_string(a);
  }
}

TEST(Run, OrthogonalitySamplingCadence) {
  Rng rng(52);
  const Matrix u = random_low_rank(rng, 20, 35, 3);
  RunOptions opts;
  opts.sample_every = 10;
  const RunResult r = run_isvd3(matrix_columns(u), WeightOperator::identity(20), ToleranceConfig{}, opts);
  ASSERT_EQ(r.stats.orth_samples.size(), 3u);
  EXPECT_EQ(r.stats.orth_samples[0].column, 10);
  EXPECT_EQ(r.stats.orth_samples[2].column, 30);
  for (const OrthSample& s : r.stats.orth_samples) EXPECT_LE(s.e_w, 1e-12);
}

TEST(Run, UpdateCallbackSeesEveryUpdate) {
  const Matrix u = Matrix::Identity(4, 4);
  RunOptions opts;
  Index seen = 0;
  opts.on_update = [&](const UpdateReport& r) {
    EXPECT_EQ(r.column_index, seen + 1);
    ++seen;
  };
  run_isvd4(matrix_columns(u), WeightOperator::identity(4), ToleranceConfig{}, opts);
  EXPECT_EQ(seen, 3);
}

TEST(Run, RankCapAbortCarriesPartialFactorization) {
  Rng rng(53);
  const Matrix u = random_gaussian(rng, 10, 20);
  ToleranceConfig cfg;
  cfg.max_rank = 4;
  for (Algorithm a : kAll) {
    try {
      run(a, matrix_columns(u), WeightOperator::identity(10), cfg);
      ADD_FAILURE() << to_string(a) << " should abort";
    } catch (const RunAborted& e) {
      EXPECT_EQ(e.partial().stats.columns, 4) << to_string(a);
      EXPECT_EQ(e.partial().svd.rank(), 4) << to_string(a);
      EXPECT_NE(std::string(e.what()).find("column 4"), std::string::npos) << e.what();
    }
  }
}

TEST(Run, InvalidToleranceRejected) {
  ToleranceConfig cfg;
  cfg.tol = 0.0;
  EXPECT_THROW(run_isvd3(matrix_columns(Matrix::Identity(2, 2)), WeightOperator::identity(2), cfg),
               std::invalid_argument);
}

TEST(Run, DefaultRankCap) {
  ToleranceConfig cfg;
  EXPECT_EQ(cfg.rank_cap(50), 50);
  EXPECT_EQ(cfg.rank_cap(5000), 2000);
  cfg.max_rank = 7;
  EXPECT_EQ(cfg.rank_cap(50), 7);
}

TEST(Branch, Names) {
  EXPECT_EQ(to_string(Branch::buffered), "buffered");
  EXPECT_EQ(to_string(Branch::rank_grew), "rank-grew");
  EXPECT_EQ(to_string(Branch::rank_held), "rank-held");
  EXPECT_EQ(to_string(Branch::sv_truncated), "sv-truncated");
}

}  // namespace
}  // namespace isvd
