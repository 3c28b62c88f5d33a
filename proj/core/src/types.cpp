// SPDX-License-Identifier: Apache-2.0
#include "isvd/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace isvd {

Index ToleranceConfig::rank_cap(Index m) const noexcept {
  return max_rank ? *max_rank : std::min<Index>(m, 2000);
}

void ToleranceConfig::validate() const {
  if (!(tol > 0.0) || !(tol_orth > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
}

std::string_view to_string(Branch b) noexcept {
  switch (b) {
    case Branch::buffered:
      return "buffered";
    case Branch::rank_grew:
      return "rank-grew";
    case Branch::rank_held:
      return "rank-held";
    case Branch::sv_truncated:
      return "sv-truncated";
  }
  return "unknown";
}

}  // namespace isvd
