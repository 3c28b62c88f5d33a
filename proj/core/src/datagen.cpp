// SPDX-License-Identifier: Apache-2.0
#include "isvd/datagen.hpp"

#include "isvd/errors.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace isvd {

double StructuredMesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles.at(t);
  const auto& a = vertices[static_cast<std::size_t>(tri[0])];
  const auto& b = vertices[static_cast<std::size_t>(tri[1])];
  const auto& c = vertices[static_cast<std::size_t>(tri[2])];
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

StructuredMesh build_mesh(Index n) {
  if (n < 1) throw std::invalid_argument("mesh subdivision count must be >= 1");
  StructuredMesh mesh;
  mesh.subdivisions = n;
  const Index side = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(side * side));
  for (Index j = 0; j < side; ++j) {
    for (Index i = 0; i < side; ++i) {
      mesh.vertices.push_back({static_cast<double>(i) / static_cast<double>(n),
                               static_cast<double>(j) / static_cast<double>(n)});
    }
  }
  mesh.triangles.reserve(static_cast<std::size_t>(2 * n * n));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Index v00 = j * side + i;
      const Index v10 = v00 + 1;
      const Index v01 = v00 + side;
      const Index v11 = v01 + 1;
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

SparseMatrix assemble_mass_matrix(const StructuredMesh& mesh) {
  const Index m = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(mesh.triangles.size() * 9);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0)) throw DegenerateInputError("degenerate triangle " + std::to_string(t));
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        entries.emplace_back(tri[static_cast<std::size_t>(a)], tri[static_cast<std::size_t>(b)],
                             area / 12.0 * (a == b ? 2.0 : 1.0));
      }
    }
  }
  SparseMatrix mass(m, m);
  mass.setFromTriplets(entries.begin(), entries.end());
  mass.makeCompressed();
  return mass;
}

Index SnapshotConfig::column_count() const {
  validate();
  return static_cast<Index>(std::floor(t_end / dt * (1.0 + 1e-12))) + 1;
}

void SnapshotConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be >= 0");
}

Vector snapshot_column(double t, const StructuredMesh& mesh) {
  Vector u(mesh.vertex_count());
  for (Index i = 0; i < u.size(); ++i) {
    const auto& v = mesh.vertices[static_cast<std::size_t>(i)];
    u(i) = std::cos(t * (v[0] + v[1]));
  }
  return u;
}

Vector load_column(double t, const StructuredMesh& mesh, const SparseMatrix& mass) {
  if (mass.rows() != mesh.vertex_count()) {
    throw DimensionError("mass matrix does not match the mesh");
  }
  return mass * snapshot_column(t, mesh);
}

ColumnSource snapshot_stream(const StructuredMesh& mesh, const SparseMatrix& mass,
                             const SnapshotConfig& cfg) {
  const Index n = cfg.column_count();
  auto next = std::make_shared<Index>(0);
  return [&mesh, &mass, cfg, n, next](Vector& out) {
    if (*next >= n) return false;
    const double t = cfg.time((*next)++);
    out = cfg.kind == SnapshotKind::load_b ? load_column(t, mesh, mass) : snapshot_column(t, mesh);
    return true;
  };
}

Matrix snapshot_matrix(const StructuredMesh& mesh, const SparseMatrix& mass,
                       const SnapshotConfig& cfg) {
  const Index n = cfg.column_count();
  Matrix u(mesh.vertex_count(), n);
  const ColumnSource source = snapshot_stream(mesh, mass, cfg);
  Vector col;
  for (Index j = 0; source(col); ++j) u.col(j) = col;
  return u;
}

}  // namespace isvd
