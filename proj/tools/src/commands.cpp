// SPDX-License-Identifier: Apache-2.0
#include "isvd_cli/commands.hpp"

#include "isvd/errors.hpp"
#include "isvd/io.hpp"
#include "isvd/oracle.hpp"
#include "isvd/properties.hpp"
#include "isvd/report.hpp"
#include "isvd_cli/inputs.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <map>
#include <ostream>

namespace isvd::cli {

namespace {

// Runs whose input holds at most this many entries also get a dense-oracle
// spectrum check in their report.
constexpr double kReportOracleLimit = 1e7;
// Above this relative error the computed spectrum is flagged as unrelated.
constexpr double kDivergenceThreshold = 1e-2;
constexpr double kDefaultFloor = 1e-10;

struct GenOptions {
  Index mesh_n = 16;
  double dt = 1e-2;
  double t_end = 10.0;
  std::string kind = "B";
  std::string out;
  std::string weight = "identity";
};

struct RunCliOptions {
  std::string algorithm = "isvd4";
  std::string input;
  std::string weight = "identity";
  double tol = 1e-12;
  std::string report;
  std::string save_factors;
};

struct VerifyOptions {
  std::string suite;
  std::uint64_t seed = 1;
  long trials = 0;
};

struct CompareOptions {
  std::string factors;
  std::string input;
  std::string weight = "identity";
  double floor = kDefaultFloor;
};

int cmd_gen(const GenOptions& o, std::ostream& out) {
  SnapshotConfig cfg;
  cfg.dt = o.dt;
  cfg.t_end = o.t_end;
  cfg.kind = o.kind == "U" ? SnapshotKind::nodal_u : SnapshotKind::load_b;
  cfg.validate();
  const StructuredMesh mesh = build_mesh(o.mesh_n);
  const SparseMatrix mass = assemble_mass_matrix(mesh);

  const Index n = cfg.column_count();
  ColumnStreamWriter writer(o.out, mesh.vertex_count(), n);
  const ColumnSource source = snapshot_stream(mesh, mass, cfg);
  Vector col;
  while (source(col)) writer.append(col);
  writer.close();
  out << "wrote " << o.out << " (m=" << mesh.vertex_count() << ", n=" << n << ")\n";

  if (cfg.kind == SnapshotKind::load_b || o.weight == "mass") {
    const auto path = mass_path_for(o.out);
    write_weight_matrix(path, mass);
    out << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

OracleCheck oracle_check(const Matrix& u, const WeightOperator& w, const CoreSVD& svd) {
  const CoreSVD ref = dense_svd_oracle(u, w);
  OracleCheck check;
  check.floor = ref.rank() > 0 ? kDefaultFloor * ref.sigma(0) : 0.0;
  const SpectrumComparison cmp = compare_spectra(ref.sigma, svd.sigma, check.floor);
  check.compared = cmp.count;
  check.max_rel_error = cmp.max_rel_error;
  check.diverged = cmp.max_rel_error > kDivergenceThreshold;
  return check;
}

int cmd_run(const RunCliOptions& o, std::ostream& out, std::ostream& err) {
  const auto algorithm = parse_algorithm(o.algorithm);
  if (!algorithm) throw std::invalid_argument("unknown algorithm '" + o.algorithm + "'");
  const InputSource input = InputSource::open(o.input);
  const WeightOperator w = resolve_weight(o.weight, input);
  ToleranceConfig cfg;
  cfg.tol = o.tol;
  cfg.validate();
  RunOptions opts;

  RunResult result;
  std::optional<std::string> aborted;
  try {
    result = run(*algorithm, input.columns(), w, cfg, opts);
  } catch (const RunAborted& e) {
    result = e.partial();
    aborted = e.what();
  }

  RunReport report = make_report(*algorithm, o.weight, cfg.tol, opts.sample_every, result);
  report.aborted = aborted;
  const double entries = static_cast<double>(input.rows()) * static_cast<double>(input.declared_columns());
  if (input.declared_columns() > 0 && entries <= kReportOracleLimit) {
    const Matrix u = input.matrix().leftCols(result.stats.columns);
    report.oracle = oracle_check(u, w, result.svd);
  }

  if (!o.report.empty()) write_report(o.report, report, report_format_for(o.report));
  if (!o.save_factors.empty() && !aborted) save_factors(o.save_factors, result.svd, cfg.tol);

  out << report.algorithm << ": m=" << report.m << " n=" << report.n << " rank=" << report.rank
      << " E_W=" << report.final_orthogonality;
  if (report.oracle) {
    out << " oracle_max_rel_error=" << report.oracle->max_rel_error
        << (report.oracle->diverged ? " (spectrum diverged from oracle)" : "");
  }
  out << "\n";
  if (aborted) {
    err << "error: " << *aborted << "\n";
    return kExitInputError;
  }
  return kExitOk;
}

long default_trials(Suite s) {
  switch (s) {
    case Suite::identities:
      return 100;
    case Suite::interlace:
      return 1000;
    case Suite::equivalence:
      return 50;
    case Suite::orthogonality:
      return 20;
  }
  return 10;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const auto suite = parse_suite(o.suite);
  if (!suite) throw std::invalid_argument("unknown suite '" + o.suite + "'");
  const long trials = o.trials > 0 ? o.trials : default_trials(*suite);
  bool ok = true;
  for (const PropertyResult& r : run_suite(*suite, o.seed, trials)) {
    ok = ok && r.pass();
    out << (r.pass() ? "PASS " : "FAIL ") << r.name << ": trials=" << r.trials << " failures=" << r.failures
        << " worst=" << r.worst << " bound=" << r.bound << "\n";
    if (!r.pass()) out << "  witness: " << r.witness << "\n";
  }
  return ok ? kExitOk : kExitPropertyFailure;
}

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  const SavedFactors saved = load_factors(o.factors);
  const InputSource input = InputSource::open(o.input);
  if (saved.svd.rows() != input.rows()) {
    throw DimensionError("factors have m = " + std::to_string(saved.svd.rows()) + " but the input has m = " +
                         std::to_string(input.rows()));
  }
  const double entries = static_cast<double>(input.rows()) * static_cast<double>(input.declared_columns());
  if (entries > 1e8) throw DimensionError("dense oracle refuses inputs with m*n > 1e8");
  const WeightOperator w = resolve_weight(o.weight, input);
  const Matrix u = input.matrix();
  const CoreSVD ref = dense_svd_oracle(u, w);
  const double floor = ref.rank() > 0 ? o.floor * ref.sigma(0) : 0.0;
  const SpectrumComparison cmp = compare_spectra(ref.sigma, saved.svd.sigma, floor);

  const nlohmann::json j{{"m", input.rows()},
                         {"n", u.cols()},
                         {"oracle_rank", ref.rank()},
                         {"factor_rank", saved.svd.rank()},
                         {"floor", floor},
                         {"compared", cmp.count},
                         {"max_rel_error", cmp.max_rel_error},
                         {"abs_error", cmp.abs_error},
                         {"rel_error", cmp.rel_error},
                         {"e_w", orthogonality_error(saved.svd.q, w)}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming incremental SVD under weighted inner products", "isvd"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a snapshot column stream");
  gen_cmd->add_option("--mesh-n", gen.mesh_n, "Mesh subdivisions per side")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--dt", gen.dt, "Time step");
  gen_cmd->add_option("--t-end", gen.t_end, "Final time");
  gen_cmd->add_option("--kind", gen.kind, "B (load vectors) or U (nodal values)")
      ->check(CLI::IsMember({"B", "U"}));
  gen_cmd->add_option("--out", gen.out, "Output stream path")->required();
  gen_cmd->add_option("--weight", gen.weight, "identity or mass (mass also writes the mass matrix)")
      ->check(CLI::IsMember({"identity", "mass"}));

  RunCliOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run an incremental SVD over a stream");
  run_cmd->add_option("--algorithm", run_opts.algorithm, "isvd1 | isvd2 | isvd3 | isvd4")
      ->check(CLI::IsMember({"isvd1", "isvd2", "isvd3", "isvd4"}));
  run_cmd->add_option("--input", run_opts.input, "Column stream path or gen:mesh16,dt0.01,...")->required();
  run_cmd->add_option("--weight", run_opts.weight, "identity | mass | file:<path>");
  run_cmd->add_option("--tol", run_opts.tol, "Residual and truncation tolerance");
  run_cmd->add_option("--report", run_opts.report, "Report path (.json or .csv)");
  run_cmd->add_option("--save-factors", run_opts.save_factors, "Directory for Q, R, sigma and manifest");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a seeded property suite");
  verify_cmd->add_option("--suite", verify.suite, "identities | interlace | equivalence | orthogonality")
      ->required()
      ->check(CLI::IsMember({"identities", "interlace", "equivalence", "orthogonality"}));
  verify_cmd->add_option("--seed", verify.seed, "Random seed");
  verify_cmd->add_option("--trials", verify.trials, "Trials per property (suite default when omitted)");

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Compare saved factors against the dense oracle");
  compare_cmd->add_option("--factors", compare.factors, "Directory written by run --save-factors")->required();
  compare_cmd->add_option("--input", compare.input, "Column stream path or gen: spec")->required();
  compare_cmd->add_option("--weight", compare.weight, "identity | mass | file:<path>");
  compare_cmd->add_option("--floor", compare.floor, "Relative-error floor as a fraction of sigma_1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*run_cmd) return cmd_run(run_opts, out, err);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*compare_cmd) return cmd_compare(compare, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace isvd::cli
