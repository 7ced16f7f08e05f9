#pragma once

#include "onebit/pursuit.hpp"

namespace onebit {

inline constexpr double kMaxOracleSupports = 1e5;

struct OracleResult {
  SparseEstimate estimate;
  double objective = 0.0;
  std::size_t supports_evaluated = 0;
};

/// Exact solution of the sparsity-constrained MAP problem by enumerating
/// every support of size <= L and maximizing h on each. Throws
/// CapacityError when more than kMaxOracleSupports supports would be needed.
OracleResult brute_force_map(const ObjectiveContext& ctx, Index L,
                             const RestrictedOptions& options = {});

}  // namespace onebit
