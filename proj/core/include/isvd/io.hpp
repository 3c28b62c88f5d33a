// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/driver.hpp"
#include "isvd/types.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>

namespace isvd {

// Column stream layout (all little endian):
//   bytes 0..3   magic "ISVD"
//   bytes 4..7   u32 format version (1)
//   bytes 8..15  u64 m
//   bytes 16..23 u64 n (0 = unknown, read until end of file)
// followed by n columns of m IEEE-754 doubles each.
inline constexpr std::uint32_t kColumnStreamVersion = 1;
inline constexpr std::size_t kColumnStreamHeaderBytes = 24;

struct ColumnStreamHeader {
  std::uint32_t version = kColumnStreamVersion;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
};

class ColumnStreamWriter {
 public:
  /// Writes the header immediately. n = 0 declares an open-ended stream.
  ColumnStreamWriter(const std::filesystem::path& path, Index m, Index n = 0);
  ~ColumnStreamWriter();
  ColumnStreamWriter(const ColumnStreamWriter&) = delete;
  ColumnStreamWriter& operator=(const ColumnStreamWriter&) = delete;

  /// Throws NumericalError on NaN/Inf and DimensionError on length mismatch.
  void append(const Eigen::Ref<const Vector>& column);
  /// Flushes and checks that a declared n was honoured.
  void close();
  Index written() const noexcept { return written_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  Index m_;
  Index n_;
  Index written_ = 0;
};

/// Sequential reader; holds at most one column in memory.
class ColumnStreamReader {
 public:
  explicit ColumnStreamReader(const std::filesystem::path& path);

  const ColumnStreamHeader& header() const noexcept { return header_; }
  Index rows() const noexcept { return static_cast<Index>(header_.m); }
  /// Reads the next column into `out`. Returns false at a clean end and
  /// throws FormatError naming the column index when the file is truncated.
  bool next(Vector& out);
  Index columns_read() const noexcept { return read_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  ColumnStreamHeader header_;
  Index read_ = 0;
  std::vector<char> buffer_;
};

void write_column_stream(const std::filesystem::path& path, const Eigen::Ref<const Matrix>& columns);
Matrix read_column_stream(const std::filesystem::path& path);
/// Opens `path` and streams it column by column.
ColumnSource open_column_source(const std::filesystem::path& path);

/// Matrix Market coordinate file (real or integer; general or symmetric)
/// as a sparse SPD weight. The stored triangle of a symmetric file is
/// mirrored; a general file must be symmetric to 1e-12 * max|entry|.
WeightOperator read_weight_matrix(const std::filesystem::path& path);

/// Writes the lower triangle in Matrix Market symmetric coordinate format.
void write_weight_matrix(const std::filesystem::path& path, const SparseMatrix& w);

struct SavedFactors {
  CoreSVD svd;
  double tol = 0.0;
};

/// Writes Q.isvd, R.isvd and sigma.isvd (column streams) plus manifest.json
/// into `dir`, creating it if needed.
void save_factors(const std::filesystem::path& dir, const CoreSVD& s, double tol);
SavedFactors load_factors(const std::filesystem::path& dir);

}  // namespace isvd
