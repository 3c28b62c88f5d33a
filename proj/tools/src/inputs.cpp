// SPDX-License-Identifier: Apache-2.0
#include "isvd_cli/inputs.hpp"

#include "isvd/errors.hpp"
#include "isvd/io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace isvd::cli {

namespace {

constexpr std::string_view kGenPrefix = "gen:";

double parse_number(std::string_view text, const std::string& key) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw std::invalid_argument("gen spec: bad value for " + key + ": '" + std::string(text) + "'");
  }
  return value;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

}  // namespace

GenSpec parse_gen_spec(const std::string& text) {
  std::string_view body = text;
  if (starts_with(body, kGenPrefix)) body.remove_prefix(kGenPrefix.size());
  GenSpec spec;
  std::stringstream tokens{std::string(body)};
  std::string token;
  while (std::getline(tokens, token, ',')) {
    if (token.empty()) continue;
    std::string_view t = token;
    if (starts_with(t, "mesh")) {
      const double n = parse_number(t.substr(4), "mesh");
      if (n != static_cast<double>(static_cast<Index>(n))) throw std::invalid_argument("gen spec: mesh must be an integer");
      spec.mesh_n = static_cast<Index>(n);
    } else if (starts_with(t, "dt")) {
      spec.snapshots.dt = parse_number(t.substr(2), "dt");
    } else if (starts_with(t, "kind")) {
      const std::string_view k = t.substr(4);
      if (k == "B") {
        spec.snapshots.kind = SnapshotKind::load_b;
      } else if (k == "U") {
        spec.snapshots.kind = SnapshotKind::nodal_u;
      } else {
        throw std::invalid_argument("gen spec: kind must be B or U");
      }
    } else if (starts_with(t, "t")) {
      spec.snapshots.t_end = parse_number(t.substr(1), "t");
    } else {
      throw std::invalid_argument("gen spec: unknown key '" + token + "'");
    }
  }
  if (spec.mesh_n < 1) throw std::invalid_argument("gen spec: mesh must be >= 1");
  spec.snapshots.validate();
  return spec;
}

InputSource InputSource::open(const std::string& spec) {
  InputSource in;
  if (starts_with(spec, kGenPrefix)) {
    auto gen = std::make_shared<Generated>();
    gen->spec = parse_gen_spec(spec);
    gen->mesh = build_mesh(gen->spec.mesh_n);
    gen->mass = assemble_mass_matrix(gen->mesh);
    in.m_ = gen->mesh.vertex_count();
    in.n_ = gen->spec.snapshots.column_count();
    in.gen_ = std::move(gen);
  } else {
    in.path_ = spec;
    const ColumnStreamReader reader(in.path_);
    in.m_ = reader.rows();
    in.n_ = static_cast<Index>(reader.header().n);
  }
  return in;
}

ColumnSource InputSource::columns() const {
  if (gen_) {
    auto gen = gen_;
    ColumnSource inner = snapshot_stream(gen->mesh, gen->mass, gen->spec.snapshots);
    return [gen, inner](Vector& out) { return inner(out); };
  }
  return open_column_source(path_);
}

Matrix InputSource::matrix() const {
  if (gen_) return snapshot_matrix(gen_->mesh, gen_->mass, gen_->spec.snapshots);
  return read_column_stream(path_);
}

const SparseMatrix* InputSource::mass() const noexcept { return gen_ ? &gen_->mass : nullptr; }

std::filesystem::path mass_path_for(const std::filesystem::path& stream) {
  std::filesystem::path p = stream;
  p.replace_extension(".mass.mtx");
  return p;
}

WeightOperator resolve_weight(const std::string& spec, const InputSource& input) {
  WeightOperator w = WeightOperator::identity(input.rows());
  if (spec == "identity") {
    return w;
  }
  if (spec == "mass") {
    if (input.mass() != nullptr) {
      w = WeightOperator::sparse(*input.mass());
    } else {
      const auto path = mass_path_for(input.path());
      if (!std::filesystem::exists(path)) {
        throw FormatError("--weight mass needs " + path.string() + " next to the input stream");
      }
      w = read_weight_matrix(path);
    }
  } else if (starts_with(spec, "file:")) {
    w = read_weight_matrix(spec.substr(5));
  } else {
    throw std::invalid_argument("weight must be identity, mass or file:<path>, got '" + spec + "'");
  }
  if (w.dimension() != input.rows()) {
    throw DimensionError("weight dimension " + std::to_string(w.dimension()) + " does not match m = " +
                         std::to_string(input.rows()));
  }
  return w;
}

}  // namespace isvd::cli
