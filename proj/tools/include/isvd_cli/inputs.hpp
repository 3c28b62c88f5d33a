// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/datagen.hpp"
#include "isvd/driver.hpp"
#include "isvd/weight.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>

namespace isvd::cli {

/// Parsed `gen:` shortcut, e.g. "gen:mesh16,dt0.01,t10,kindB". Unlisted
/// keys keep their defaults (mesh 16, dt 0.01, t 10, kind B).
struct GenSpec {
  Index mesh_n = 16;
  SnapshotConfig snapshots;
};

/// Throws std::invalid_argument on unknown keys or malformed numbers.
GenSpec parse_gen_spec(const std::string& text);

/// A replayable column source: either a column-stream file or generated
/// snapshot data.
class InputSource {
 public:
  /// Accepts a file path or a "gen:" spec.
  static InputSource open(const std::string& spec);

  Index rows() const noexcept { return m_; }
  /// Declared column count; 0 when a file stream leaves it open.
  Index declared_columns() const noexcept { return n_; }
  /// A fresh pass over the columns.
  ColumnSource columns() const;
  /// All columns as a dense matrix.
  Matrix matrix() const;

  bool generated() const noexcept { return gen_ != nullptr; }
  const std::filesystem::path& path() const noexcept { return path_; }
  /// Mass matrix of the generating mesh; null for file inputs.
  const SparseMatrix* mass() const noexcept;

 private:
  struct Generated {
    GenSpec spec;
    StructuredMesh mesh;
    SparseMatrix mass;
  };
  std::shared_ptr<const Generated> gen_;
  std::filesystem::path path_;
  Index m_ = 0;
  Index n_ = 0;
};

/// Where `gen --out PATH` places the mass matrix, and where `--weight mass`
/// looks for it next to a stream file.
std::filesystem::path mass_path_for(const std::filesystem::path& stream);

/// Resolves identity | mass | file:<path> against an input; throws
/// DimensionError when the weight does not match the input's m.
WeightOperator resolve_weight(const std::string& spec, const InputSource& input);

}  // namespace isvd::cli
