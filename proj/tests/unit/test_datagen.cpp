// SPDX-License-Identifier: Apache-2.0
#include "isvd/datagen.hpp"
#include "isvd/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace isvd {
namespace {

TEST(Mesh, SingleCell) {
  const StructuredMesh mesh = build_mesh(1);
  EXPECT_EQ(mesh.vertex_count(), 4);
  ASSERT_EQ(mesh.triangles.size(), 2u);
  for (std::size_t t = 0; t < 2; ++t) EXPECT_DOUBLE_EQ(mesh.triangle_area(t), 0.5);
}

TEST(Mesh, Sizes) {
  const StructuredMesh m16 = build_mesh(16);
  EXPECT_EQ(m16.vertex_count(), 289);
  EXPECT_EQ(m16.triangles.size(), 512u);
  EXPECT_EQ(build_mesh(512).triangles.size(), 524288u);
  EXPECT_THROW(build_mesh(0), std::invalid_argument);
}

TEST(Mass, TotalIsArea) {
  for (Index n : {1, 4, 16}) {
    const SparseMatrix mass = assemble_mass_matrix(build_mesh(n));
    EXPECT_NEAR(Matrix(mass).sum(), 1.0, 1e-14) << n;
  }
}

TEST(Mass, SingleCellEntriesAndSpectrum) {
  const Matrix mass = Matrix(assemble_mass_matrix(build_mesh(1)));
  Matrix expected(4, 4);
  expected << 4, 1, 1, 2, 1, 2, 0, 1, 1, 0, 2, 1, 2, 1, 1, 4;
  expected /= 24.0;
  EXPECT_LE((mass - expected).cwiseAbs().maxCoeff(), 1e-16);

  const Vector rows = mass.rowwise().sum();
  EXPECT_NEAR(rows(0), 1.0 / 3, 1e-16);
  EXPECT_NEAR(rows(1), 1.0 / 6, 1e-16);
  EXPECT_NEAR(rows(2), 1.0 / 6, 1e-16);
  EXPECT_NEAR(rows(3), 1.0 / 3, 1e-16);

  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(mass).eigenvalues();
  EXPECT_NEAR(ev(0), 0.04881553646890879, 1e-15);
  EXPECT_NEAR(ev(1), 0.08333333333333333, 1e-15);
  EXPECT_NEAR(ev(2), 0.0833333333333334, 1e-15);
  EXPECT_NEAR(ev(3), 0.28451779686442463, 1e-15);
}

TEST(Snapshots, ColumnCount) {
  SnapshotConfig cfg;
  EXPECT_EQ(cfg.column_count(), 1001);
  cfg.dt = 0.1;
  cfg.t_end = 1.0;
  EXPECT_EQ(cfg.column_count(), 11);
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Snapshots, NodalValues) {
  const StructuredMesh mesh = build_mesh(1);
  EXPECT_EQ(snapshot_column(0.0, mesh), Vector::Ones(4));
  const Vector u = snapshot_column(std::numbers::pi, mesh);
  EXPECT_NEAR(u(1), -1.0, 1e-15);  // vertex (1, 0)
  EXPECT_NEAR(u(0), 1.0, 1e-15);
}

TEST(Snapshots, LoadIsMassTimesNodal) {
  const StructuredMesh mesh = build_mesh(4);
  const SparseMatrix mass = assemble_mass_matrix(mesh);
  const Vector b = load_column(0.7, mesh, mass);
  EXPECT_LE((b - mass * snapshot_column(0.7, mesh)).norm(), 1e-16);
}

TEST(Snapshots, StreamMatchesMatrix) {
  const StructuredMesh mesh = build_mesh(2);
  const SparseMatrix mass = assemble_mass_matrix(mesh);
  SnapshotConfig cfg;
  cfg.t_end = 0.5;
  cfg.dt = 0.1;
  const Matrix all = snapshot_matrix(mesh, mass, cfg);
  ASSERT_EQ(all.cols(), 6);
  const ColumnSource src = snapshot_stream(mesh, mass, cfg);
  Vector col;
  Index j = 0;
  while (src(col)) EXPECT_EQ(col, all.col(j++));
  EXPECT_EQ(j, 6);
}

TEST(Snapshots, LoadSpectrumNumericalRank) {
  const StructuredMesh mesh = build_mesh(16);
  const SparseMatrix mass = assemble_mass_matrix(mesh);
  const Matrix b = snapshot_matrix(mesh, mass, SnapshotConfig{});
  const CoreSVD s = dense_svd_oracle(b, WeightOperator::identity(b.rows()));
  const Index above = (s.sigma.array() > 1e-12 * s.sigma(0)).count();
  EXPECT_EQ(above, 16);
  EXPECT_NEAR(s.sigma(0), 7.062e-01, 1e-3);
}

}  // namespace
}  // namespace isvd
