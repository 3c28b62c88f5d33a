// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/driver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace isvd {

struct BranchCounts {
  long buffered = 0;
  long rank_grew = 0;
  long rank_held = 0;
  long sv_truncated = 0;
  long reorth_fired = 0;

  long total() const noexcept { return buffered + rank_grew + rank_held + sv_truncated; }
};

/// Spectrum check against the dense oracle, attached when the run was small
/// enough to hold in memory.
struct OracleCheck {
  double floor = 0.0;       // absolute floor used for the comparison
  Index compared = 0;
  double max_rel_error = 0.0;
  bool diverged = false;    // max_rel_error above the divergence threshold
};

struct RunReport {
  std::string algorithm;
  std::string weight;
  double tol = 0.0;
  Index m = 0;
  Index n = 0;
  Index rank = 0;
  std::vector<double> singular_values;
  Index sample_every = 0;
  std::vector<OrthSample> orth_samples;
  double final_orthogonality = 0.0;
  double wall_seconds = 0.0;
  BranchCounts branches;
  long svd_calls = 0;
  std::optional<OracleCheck> oracle;
  /// Diagnostic of a run that stopped early; the other fields then describe
  /// the columns consumed before the failure.
  std::optional<std::string> aborted;
};

RunReport make_report(Algorithm algorithm, const std::string& weight, double tol, Index sample_every,
                      const RunResult& result);

enum class ReportFormat { json, csv };

std::string report_to_json(const RunReport& r);
/// Throws FormatError on malformed input or missing fields.
RunReport report_from_json(const std::string& text);
/// Long format: one `field,index,value` row per scalar or series entry.
std::string report_to_csv(const RunReport& r);

/// Throws FormatError if the path cannot be written.
void write_report(const std::filesystem::path& path, const RunReport& r, ReportFormat format);
/// Picks csv for a ".csv" extension and json otherwise.
ReportFormat report_format_for(const std::filesystem::path& path) noexcept;

}  // namespace isvd
