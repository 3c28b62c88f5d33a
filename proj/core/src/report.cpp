// SPDX-License-Identifier: Apache-2.0
#include "isvd/report.hpp"

#include "isvd/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace isvd {

namespace {

using nlohmann::json;

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunReport make_report(Algorithm algorithm, const std::string& weight, double tol, Index sample_every,
                      const RunResult& result) {
  RunReport r;
  r.algorithm = std::string(to_string(algorithm));
  r.weight = weight;
  r.tol = tol;
  r.m = result.svd.rows();
  r.n = result.stats.columns;
  r.rank = result.svd.rank();
  r.singular_values.assign(result.svd.sigma.data(), result.svd.sigma.data() + result.svd.sigma.size());
  r.sample_every = sample_every;
  r.orth_samples = result.stats.orth_samples;
  r.final_orthogonality = result.stats.final_orthogonality;
  r.wall_seconds = result.stats.wall_seconds;
  r.branches = {result.stats.buffered, result.stats.rank_grew, result.stats.rank_held,
                result.stats.sv_truncated, result.stats.reorth_fired};
  r.svd_calls = result.stats.svd_calls;
  return r;
}

std::string report_to_json(const RunReport& r) {
  json samples = json::array();
  for (const auto& s : r.orth_samples) samples.push_back({{"column", s.column}, {"e_w", s.e_w}});
  json j{{"algorithm", r.algorithm},
         {"weight", r.weight},
         {"tol", r.tol},
         {"m", r.m},
         {"n", r.n},
         {"rank", r.rank},
         {"singular_values", r.singular_values},
         {"sample_every", r.sample_every},
         {"orthogonality_samples", samples},
         {"final_orthogonality", r.final_orthogonality},
         {"wall_seconds", r.wall_seconds},
         {"branch_counts",
          {{"buffered", r.branches.buffered},
           {"rank_grew", r.branches.rank_grew},
           {"rank_held", r.branches.rank_held},
           {"sv_truncated", r.branches.sv_truncated},
           {"reorth_fired", r.branches.reorth_fired}}},
         {"svd_calls", r.svd_calls}};
  if (r.oracle) {
    j["oracle_check"] = {{"floor", r.oracle->floor},
                         {"compared", r.oracle->compared},
                         {"max_rel_error", r.oracle->max_rel_error},
                         {"diverged", r.oracle->diverged}};
  }
  if (r.aborted) j["aborted"] = *r.aborted;
  return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.weight = j.at("weight").get<std::string>();
    r.tol = j.at("tol").get<double>();
    r.m = j.at("m").get<Index>();
    r.n = j.at("n").get<Index>();
    r.rank = j.at("rank").get<Index>();
    r.singular_values = j.at("singular_values").get<std::vector<double>>();
    r.sample_every = j.at("sample_every").get<Index>();
    for (const auto& s : j.at("orthogonality_samples")) {
      r.orth_samples.push_back({s.at("column").get<Index>(), s.at("e_w").get<double>()});
    }
    r.final_orthogonality = j.at("final_orthogonality").get<double>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    const auto& b = j.at("branch_counts");
    r.branches = {b.at("buffered").get<long>(), b.at("rank_grew").get<long>(), b.at("rank_held").get<long>(),
                  b.at("sv_truncated").get<long>(), b.at("reorth_fired").get<long>()};
    r.svd_calls = j.at("svd_calls").get<long>();
    if (j.contains("oracle_check")) {
      const auto& o = j.at("oracle_check");
      r.oracle = OracleCheck{o.at("floor").get<double>(), o.at("compared").get<Index>(),
                             o.at("max_rel_error").get<double>(), o.at("diverged").get<bool>()};
    }
    if (j.contains("aborted")) r.aborted = j.at("aborted").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed run report: ") + e.what());
  }
}

std::string report_to_csv(const RunReport& r) {
  std::ostringstream out;
  auto row = [&out](const std::string& field, const std::string& index, const std::string& value) {
    out << field << ',' << index << ',' << value << '\n';
  };
  row("field", "index", "value");
  row("algorithm", "", r.algorithm);
  row("weight", "", r.weight);
  row("tol", "", full_precision(r.tol));
  row("m", "", std::to_string(r.m));
  row("n", "", std::to_string(r.n));
  row("rank", "", std::to_string(r.rank));
  row("sample_every", "", std::to_string(r.sample_every));
  row("final_orthogonality", "", full_precision(r.final_orthogonality));
  row("wall_seconds", "", full_precision(r.wall_seconds));
  row("buffered", "", std::to_string(r.branches.buffered));
  row("rank_grew", "", std::to_string(r.branches.rank_grew));
  row("rank_held", "", std::to_string(r.branches.rank_held));
  row("sv_truncated", "", std::to_string(r.branches.sv_truncated));
  row("reorth_fired", "", std::to_string(r.branches.reorth_fired));
  row("svd_calls", "", std::to_string(r.svd_calls));
  if (r.oracle) {
    row("oracle_floor", "", full_precision(r.oracle->floor));
    row("oracle_compared", "", std::to_string(r.oracle->compared));
    row("oracle_max_rel_error", "", full_precision(r.oracle->max_rel_error));
    row("oracle_diverged", "", r.oracle->diverged ? "true" : "false");
  }
  if (r.aborted) row("aborted", "", "\"" + *r.aborted + "\"");
  for (std::size_t i = 0; i < r.singular_values.size(); ++i) {
    row("singular_value", std::to_string(i), full_precision(r.singular_values[i]));
  }
  for (const auto& s : r.orth_samples) row("orth_sample", std::to_string(s.column), full_precision(s.e_w));
  return out.str();
}

void write_report(const std::filesystem::path& path, const RunReport& r, ReportFormat format) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write report to '" + path.string() + "'");
  out << (format == ReportFormat::json ? report_to_json(r) : report_to_csv(r));
  if (!out) throw FormatError("write failed on '" + path.string() + "'");
}

ReportFormat report_format_for(const std::filesystem::path& path) noexcept {
  return path.extension() == ".csv" ? ReportFormat::csv : ReportFormat::json;
}

}  // namespace isvd
