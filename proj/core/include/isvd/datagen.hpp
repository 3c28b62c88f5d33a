// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/driver.hpp"
#include "isvd/weight.hpp"

#include <array>
#include <vector>

namespace isvd {

/// Uniform right-triangle grid on the unit square: (N+1)^2 vertices in
/// row-major order (x fastest), 2 N^2 triangles, every cell split along its
/// lower-left to upper-right diagonal.
struct StructuredMesh {
  Index subdivisions = 0;
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<Index, 3>> triangles;

  Index vertex_count() const noexcept { return static_cast<Index>(vertices.size()); }
  double triangle_area(std::size_t t) const;
};

StructuredMesh build_mesh(Index n);

/// Consistent P1 mass matrix; element matrix (area / 12) [[2,1,1],[1,2,1],[1,1,2]].
SparseMatrix assemble_mass_matrix(const StructuredMesh& mesh);

enum class SnapshotKind { nodal_u, load_b };

struct SnapshotConfig {
  double t_end = 10.0;
  double dt = 1e-2;
  SnapshotKind kind = SnapshotKind::load_b;

  /// floor(t_end / dt) + 1, robust to dt not being exactly representable.
  Index column_count() const;
  double time(Index i) const noexcept { return static_cast<double>(i) * dt; }
  /// Throws std::invalid_argument for dt <= 0 or t_end < 0.
  void validate() const;
};

/// Nodal values cos(t (x_i + y_i)).
Vector snapshot_column(double t, const StructuredMesh& mesh);

/// Load vector with f replaced by its nodal interpolant: M * snapshot_column(t).
Vector load_column(double t, const StructuredMesh& mesh, const SparseMatrix& mass);

/// Lazily generated snapshot stream; mesh and mass must outlive the source.
ColumnSource snapshot_stream(const StructuredMesh& mesh, const SparseMatrix& mass,
                             const SnapshotConfig& cfg);

/// All columns of the stream as a dense m x n matrix.
Matrix snapshot_matrix(const StructuredMesh& mesh, const SparseMatrix& mass,
                       const SnapshotConfig& cfg);

}  // namespace isvd
