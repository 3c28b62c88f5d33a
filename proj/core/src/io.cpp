// SPDX-License-Identifier: Apache-2.0
#include "isvd/io.hpp"

#include "isvd/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

namespace isvd {

namespace {

constexpr std::array<char, 4> kMagic{'I', 'S', 'V', 'D'};

template <typename T>
void put_le(char* dst, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::memcpy(dst, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(dst, dst + sizeof(T));
}

template <typename T>
T get_le(const char* src) {
  std::array<char, sizeof(T)> tmp;
  std::memcpy(tmp.data(), src, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(tmp.begin(), tmp.end());
  T value;
  std::memcpy(&value, tmp.data(), sizeof(T));
  return value;
}

std::string describe(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

ColumnStreamWriter::ColumnStreamWriter(const std::filesystem::path& path, Index m, Index n)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), m_(m), n_(n) {
  if (m < 1) throw DimensionError("column stream needs m >= 1");
  if (n < 0) throw DimensionError("column stream needs n >= 0");
  if (!out_) throw FormatError("cannot open " + describe(path) + " for writing");
  std::array<char, kColumnStreamHeaderBytes> header{};
  std::copy(kMagic.begin(), kMagic.end(), header.begin());
  put_le<std::uint32_t>(header.data() + 4, kColumnStreamVersion);
  put_le<std::uint64_t>(header.data() + 8, static_cast<std::uint64_t>(m));
  put_le<std::uint64_t>(header.data() + 16, static_cast<std::uint64_t>(n));
  out_.write(header.data(), header.size());
}

ColumnStreamWriter::~ColumnStreamWriter() {
  if (out_.is_open()) out_.close();
}

void ColumnStreamWriter::append(const Eigen::Ref<const Vector>& column) {
  if (column.size() != m_) {
    throw DimensionError("column of length " + std::to_string(column.size()) + " written to stream with m = " +
                         std::to_string(m_));
  }
  if (!column.allFinite()) {
    throw NumericalError("refusing to write non-finite value in column " + std::to_string(written_));
  }
  std::vector<char> bytes(static_cast<std::size_t>(m_) * sizeof(double));
  for (Index i = 0; i < m_; ++i) put_le<double>(bytes.data() + i * sizeof(double), column(i));
  out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out_) throw FormatError("write failed on " + describe(path_));
  ++written_;
}

void ColumnStreamWriter::close() {
  out_.flush();
  if (!out_) throw FormatError("write failed on " + describe(path_));
  out_.close();
  if (n_ != 0 && written_ != n_) {
    throw FormatError("stream " + describe(path_) + " declared " + std::to_string(n_) +
                      " columns but " + std::to_string(written_) + " were written");
  }
}

ColumnStreamReader::ColumnStreamReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw FormatError("cannot open " + describe(path));
  std::array<char, kColumnStreamHeaderBytes> header{};
  in_.read(header.data(), header.size());
  if (in_.gcount() != static_cast<std::streamsize>(header.size())) {
    throw FormatError(describe(path) + ": truncated header");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), header.begin())) {
    throw FormatError(describe(path) + ": bad magic");
  }
  header_.version = get_le<std::uint32_t>(header.data() + 4);
  header_.m = get_le<std::uint64_t>(header.data() + 8);
  header_.n = get_le<std::uint64_t>(header.data() + 16);
  if (header_.version != kColumnStreamVersion) {
    throw FormatError(describe(path) + ": unsupported version " + std::to_string(header_.version));
  }
  if (header_.m < 1) throw FormatError(describe(path) + ": m must be >= 1");
  buffer_.resize(static_cast<std::size_t>(header_.m) * sizeof(double));
}

bool ColumnStreamReader::next(Vector& out) {
  if (header_.n != 0 && static_cast<std::uint64_t>(read_) >= header_.n) return false;
  in_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  const auto got = in_.gcount();
  if (got == 0 && header_.n == 0) return false;
  if (got != static_cast<std::streamsize>(buffer_.size())) {
    throw FormatError(describe(path_) + ": column " + std::to_string(read_) + " is truncated");
  }
  const Index m = rows();
  if (out.size() != m) out.resize(m);
  for (Index i = 0; i < m; ++i) out(i) = get_le<double>(buffer_.data() + i * sizeof(double));
  ++read_;
  return true;
}

void write_column_stream(const std::filesystem::path& path, const Eigen::Ref<const Matrix>& columns) {
  ColumnStreamWriter writer(path, columns.rows(), columns.cols());
  for (Index j = 0; j < columns.cols(); ++j) writer.append(columns.col(j));
  writer.close();
}

Matrix read_column_stream(const std::filesystem::path& path) {
  ColumnStreamReader reader(path);
  std::vector<Vector> cols;
  Vector col;
  while (reader.next(col)) cols.push_back(col);
  Matrix out(reader.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = cols[j];
  return out;
}

ColumnSource open_column_source(const std::filesystem::path& path) {
  auto reader = std::make_shared<ColumnStreamReader>(path);
  return [reader](Vector& out) { return reader->next(out); };
}

WeightOperator read_weight_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + describe(path));
  std::string line;
  if (!std::getline(in, line)) throw FormatError(describe(path) + ": empty file");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (tag != "%%MatrixMarket" || object != "matrix" || format != "coordinate") {
    throw FormatError(describe(path) + ": expected a Matrix Market coordinate matrix");
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw FormatError(describe(path) + ": unsupported field '" + field + "'");
  }
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    throw FormatError(describe(path) + ": unsupported symmetry '" + symmetry + "'");
  }

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz)) throw FormatError(describe(path) + ": bad size line");
  }
  if (rows != cols) throw FormatError(describe(path) + ": weight matrix is not square");
  if (rows < 1 || nnz < 0) throw FormatError(describe(path) + ": bad dimensions");

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  double scale = 0.0;
  for (long long k = 0; k < nnz; ++k) {
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) {
      throw FormatError(describe(path) + ": entry " + std::to_string(k) + " unreadable");
    }
    if (i < 1 || j < 1 || i > rows || j > cols) {
      throw FormatError(describe(path) + ": entry " + std::to_string(k) + " out of range");
    }
    if (!std::isfinite(v)) throw FormatError(describe(path) + ": non-finite entry");
    scale = std::max(scale, std::abs(v));
    entries.emplace_back(i - 1, j - 1, v);
    if (symmetric && i != j) entries.emplace_back(j - 1, i - 1, v);
  }
  SparseMatrix w(rows, cols);
  w.setFromTriplets(entries.begin(), entries.end());
  w.makeCompressed();
  if (!symmetric) {
    const SparseMatrix diff = w - SparseMatrix(w.transpose());
    for (Index k = 0; k < diff.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
        if (std::abs(it.value()) > 1e-12 * scale) {
          throw FormatError(describe(path) + ": matrix is not symmetric at (" +
                            std::to_string(it.row() + 1) + ", " + std::to_string(it.col() + 1) + ")");
        }
      }
    }
  }
  return WeightOperator::sparse(std::move(w));
}

void write_weight_matrix(const std::filesystem::path& path, const SparseMatrix& w) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + describe(path) + " for writing");
  long long nnz = 0;
  for (Index k = 0; k < w.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(w, k); it; ++it) {
      if (it.row() >= it.col()) ++nnz;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << w.rows() << ' ' << w.cols() << ' ' << nnz << '\n';
  out.precision(17);
  for (Index k = 0; k < w.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(w, k); it; ++it) {
      if (it.row() >= it.col()) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  if (!out) throw FormatError("write failed on " + describe(path));
}

void save_factors(const std::filesystem::path& dir, const CoreSVD& s, double tol) {
  std::filesystem::create_directories(dir);
  write_column_stream(dir / "Q.isvd", s.q);
  write_column_stream(dir / "R.isvd", s.r);
  write_column_stream(dir / "sigma.isvd", s.sigma);
  nlohmann::json manifest{{"format", "isvd-factors"},
                          {"version", 1},
                          {"m", s.q.rows()},
                          {"n", s.r.rows()},
                          {"k", s.rank()},
                          {"tol", tol}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw FormatError("cannot write manifest in " + describe(dir));
  out << manifest.dump(2) << '\n';
}

SavedFactors load_factors(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw FormatError("missing manifest.json in " + describe(dir));
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("unreadable manifest in " + describe(dir) + ": " + e.what());
  }
  Index m = 0, n = 0, k = 0;
  double tol = 0.0;
  try {
    m = manifest.at("m").get<Index>();
    n = manifest.at("n").get<Index>();
    k = manifest.at("k").get<Index>();
    tol = manifest.at("tol").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("incomplete manifest in " + describe(dir) + ": " + e.what());
  }
  SavedFactors out;
  out.tol = tol;
  out.svd.q = read_column_stream(dir / "Q.isvd");
  out.svd.r = read_column_stream(dir / "R.isvd");
  const Matrix sigma = read_column_stream(dir / "sigma.isvd");
  if (sigma.cols() != 1) throw FormatError("sigma.isvd must hold exactly one column");
  out.svd.sigma = sigma.col(0);
  out.svd.columns_seen = n;
  if (out.svd.q.rows() != m || out.svd.q.cols() != k || out.svd.r.rows() != n ||
      out.svd.r.cols() != k || out.svd.sigma.size() != k) {
    throw FormatError("factor files in " + describe(dir) + " do not match the manifest (m=" +
                      std::to_string(m) + ", n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  return out;
}

}  // namespace isvd
