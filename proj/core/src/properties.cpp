// SPDX-License-Identifier: Apache-2.0
#include "isvd/properties.hpp"

#include "isvd/driver.hpp"
#include "isvd/oracle.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isvd {

namespace {

Index uniform_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Records one observation against an upper bound.
void observe(PropertyResult& r, double value, const std::string& instance) {
  ++r.trials;
  r.worst = std::max(r.worst, value);
  if (!(value <= r.bound)) {
    if (r.failures == 0) {
      std::ostringstream os;
      os.precision(6);
      os << instance << ": " << value << " > " << r.bound;
      r.witness = os.str();
    }
    ++r.failures;
  }
}

std::string trial_tag(std::uint64_t seed, long t) {
  return "seed " + std::to_string(seed) + " trial " + std::to_string(t);
}

}  // namespace

Matrix random_gaussian(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> n01;
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) a(i, j) = n01(rng);
  }
  return a;
}

Matrix random_orthonormal(Rng& rng, Index m, Index k) {
  const Eigen::HouseholderQR<Matrix> qr(random_gaussian(rng, m, k));
  return qr.householderQ() * Matrix::Identity(m, k);
}

Matrix random_low_rank(Rng& rng, Index m, Index n, Index r) {
  const Matrix u = random_gaussian(rng, m, r) * random_gaussian(rng, r, n);
  return u / u.norm();
}

WeightOperator random_diagonal_weight(Rng& rng, Index m) {
  Vector w(m);
  for (Index i = 0; i < m; ++i) w(i) = uniform(rng, 0.5, 2.0);
  return WeightOperator::dense(w.asDiagonal().toDenseMatrix());
}

Vector random_spectrum(Rng& rng, Index k) {
  Vector s(k);
  for (Index i = 0; i < k; ++i) s(i) = std::pow(10.0, uniform(rng, -4.0, 0.0));
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::vector<PropertyResult> equivalence_properties(std::uint64_t seed, long trials) {
  PropertyResult spectra{"equivalence: singular values (relative)", 0, 0, 0.0, 1e-10, {}};
  PropertyResult left{"equivalence: left principal angles", 0, 0, 0.0, 1e-8, {}};
  PropertyResult right{"equivalence: right principal angles", 0, 0, 0.0, 1e-8, {}};
  Rng rng(seed);
  ToleranceConfig cfg;
  RunOptions opts;
  opts.sample_every = 0;
  for (long t = 0; t < trials; ++t) {
    const Index m = uniform_index(rng, 10, 100);
    const Index n = uniform_index(rng, 5, 150);
    const Index r = uniform_index(rng, 1, std::min<Index>(12, std::min(m, n)));
    const Matrix u = random_low_rank(rng, m, n, r);
    const bool weighted = t % 2 == 1;
    const WeightOperator w = weighted ? random_diagonal_weight(rng, m) : WeightOperator::identity(m);
    const std::string tag = trial_tag(seed, t) + " (m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                            ", r=" + std::to_string(r) + (weighted ? ", diagonal W)" : ", W=I)");

    const RunResult a = run_isvd1(matrix_columns(u), w, cfg, opts);
    const RunResult b = run_isvd3(matrix_columns(u), w, cfg, opts);
    if (a.svd.rank() != b.svd.rank()) {
      observe(spectra, std::numeric_limits<double>::infinity(),
              tag + " rank " + std::to_string(a.svd.rank()) + " vs " + std::to_string(b.svd.rank()));
      continue;
    }
    double rel = 0.0;
    for (Index i = 0; i < a.svd.rank(); ++i) {
      rel = std::max(rel, std::abs(a.svd.sigma(i) - b.svd.sigma(i)) / a.svd.sigma(i));
    }
    observe(spectra, rel, tag);
    const auto la = principal_angles(a.svd.q, b.svd.q, w);
    observe(left, la.empty() ? 0.0 : la.back(), tag);
    const auto ra = principal_angles(a.svd.r, b.svd.r, WeightOperator::identity(n));
    observe(right, ra.empty() ? 0.0 : ra.back(), tag);
  }
  return {spectra, left, right};
}

PropertyResult interlacing_property(std::uint64_t seed, long trials) {
  PropertyResult out{"interlacing of the bordered spectrum", 0, 0, 0.0, 0.0, {}};
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    const Index k = uniform_index(rng, 1, 20);
    const Vector sigma = random_spectrum(rng, k);
    const Vector d = random_gaussian(rng, k, 1).col(0) * std::pow(10.0, uniform(rng, -6.0, 0.0));
    const double p = t % 10 == 0 ? 0.0 : std::pow(10.0, uniform(rng, -8.0, 0.5));
    const InterlacingCheck c = check_interlacing(sigma, d, p);
    observe(out, c.pass ? 0.0 : 1.0,
            trial_tag(seed, t) + " k=" + std::to_string(k) + (c.pass ? "" : " " + c.violations.front()));
  }
  return out;
}

PropertyResult block_identity_property(std::uint64_t seed, long trials) {
  PropertyResult out{"block identity (|lhs - rhs| / max|entry|)", 0, 0, 0.0, 1e-15, {}};
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    const Index m = uniform_index(rng, 1, 30);
    const Index n = uniform_index(rng, 1, 30);
    const BlockIdentityCheck c = check_block_identity(random_gaussian(rng, m, n), random_gaussian(rng, n + 1, n));
    observe(out, c.max_abs_entry > 0.0 ? c.max_abs_diff / c.max_abs_entry : c.max_abs_diff,
            trial_tag(seed, t) + " A " + std::to_string(m) + "x" + std::to_string(n));
  }
  return out;
}

PropertyResult projection_invariance_property(std::uint64_t seed, long trials) {
  PropertyResult out{"projection invariance under rotation", 0, 0, 0.0, 1e-12, {}};
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    const Index m = uniform_index(rng, 2, 200);
    const Index k = uniform_index(rng, 1, std::min<Index>(m, 40));
    const Matrix q = random_orthonormal(rng, m, k);
    const Matrix g = random_orthonormal(rng, k, k);
    const Vector x = random_gaussian(rng, m, 1).col(0);
    observe(out, projection_invariance_error(q, g, x, WeightOperator::identity(m)),
            trial_tag(seed, t) + " m=" + std::to_string(m) + " k=" + std::to_string(k));
  }
  return out;
}

PropertyResult zero_row_route_property(std::uint64_t seed, long trials) {
  PropertyResult out{"zero-row bordered route vs wide route (spectrum)", 0, 0, 0.0, 1e-12, {}};
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    const Index k = uniform_index(rng, 1, 20);
    const Vector sigma = random_spectrum(rng, k);
    const Vector d = random_gaussian(rng, k, 1).col(0);
    const ZeroRowCheck c = check_zero_row_route(sigma, d);
    observe(out, std::max(c.spectrum_rel_error, c.trailing_value),
            trial_tag(seed, t) + " k=" + std::to_string(k));
  }
  return out;
}

PropertyResult orthogonality_property(std::uint64_t seed, long trials) {
  PropertyResult out{"final orthogonality error of variants III and IV", 0, 0, 0.0, 1e-10, {}};
  Rng rng(seed);
  ToleranceConfig cfg;
  RunOptions opts;
  opts.sample_every = 0;
  for (long t = 0; t < trials; ++t) {
    const Index m = uniform_index(rng, 20, 150);
    const Index n = uniform_index(rng, 20, 200);
    const Index r = uniform_index(rng, 1, std::min<Index>(15, std::min(m, n)));
    Matrix u = random_low_rank(rng, m, n, r);
    u += 1e-13 * random_gaussian(rng, m, n);
    const WeightOperator w = t % 2 == 1 ? random_diagonal_weight(rng, m) : WeightOperator::identity(m);
    const std::string tag = trial_tag(seed, t) + " m=" + std::to_string(m) + " n=" + std::to_string(n);
    observe(out, run_isvd3(matrix_columns(u), w, cfg, opts).stats.final_orthogonality, tag + " III");
    observe(out, run_isvd4(matrix_columns(u), w, cfg, opts).stats.final_orthogonality, tag + " IV");
  }
  return out;
}

std::string_view to_string(Suite s) noexcept {
  switch (s) {
    case Suite::identities:
      return "identities";
    case Suite::interlace:
      return "interlace";
    case Suite::equivalence:
      return "equivalence";
    case Suite::orthogonality:
      return "orthogonality";
  }
  return "unknown";
}

std::optional<Suite> parse_suite(std::string_view name) noexcept {
  for (Suite s : {Suite::identities, Suite::interlace, Suite::equivalence, Suite::orthogonality}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<PropertyResult> run_suite(Suite suite, std::uint64_t seed, long trials) {
  switch (suite) {
    case Suite::identities:
      return {block_identity_property(seed, trials), projection_invariance_property(seed + 1, trials),
              zero_row_route_property(seed + 2, trials)};
    case Suite::interlace:
      return {interlacing_property(seed, trials)};
    case Suite::equivalence:
      return equivalence_properties(seed, trials);
    case Suite::orthogonality:
      return {orthogonality_property(seed, trials)};
  }
  return {};
}

}  // namespace isvd
