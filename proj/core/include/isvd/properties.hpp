// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isvd/weight.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace isvd {

using Rng = std::mt19937_64;

Matrix random_gaussian(Rng& rng, Index rows, Index cols);
/// Q with orthonormal columns (Euclidean), m x k, k <= m.
Matrix random_orthonormal(Rng& rng, Index m, Index k);
/// Product of two Gaussian factors scaled so that ||U||_F = 1; rank r almost surely.
Matrix random_low_rank(Rng& rng, Index m, Index n, Index r);
/// diag(w) with entries drawn from [0.5, 2].
WeightOperator random_diagonal_weight(Rng& rng, Index m);
/// Descending, strictly positive, spread over about four decades.
Vector random_spectrum(Rng& rng, Index k);

struct PropertyResult {
  std::string name;
  long trials = 0;
  long failures = 0;
  double worst = 0.0;  // largest observed value of the checked quantity
  double bound = 0.0;
  std::string witness;  // first failing instance, if any

  bool pass() const noexcept { return failures == 0; }
};

/// Variant III vs variant I (with per-update reorthogonalization) on random
/// low-rank streams, m <= 100, n <= 150, rank <= 12, W identity or random
/// diagonal. Produces three results: spectra (relative), left angles, right
/// angles.
std::vector<PropertyResult> equivalence_properties(std::uint64_t seed, long trials);

/// Bordered-matrix interlacing on random (sigma, d, p) with k <= 20.
PropertyResult interlacing_property(std::uint64_t seed, long trials);

PropertyResult block_identity_property(std::uint64_t seed, long trials);
PropertyResult projection_invariance_property(std::uint64_t seed, long trials);
PropertyResult zero_row_route_property(std::uint64_t seed, long trials);

/// Final E_W of variants III and IV on random low-rank streams with small
/// noise, W identity or random diagonal.
PropertyResult orthogonality_property(std::uint64_t seed, long trials);

enum class Suite { identities, interlace, equivalence, orthogonality };

std::string_view to_string(Suite s) noexcept;
std::optional<Suite> parse_suite(std::string_view name) noexcept;
std::vector<PropertyResult> run_suite(Suite suite, std::uint64_t seed, long trials);

}  // namespace isvd
