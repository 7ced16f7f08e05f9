#include "onebit/oracle.hpp"

#include <cmath>

namespace onebit {

namespace {

double count_supports(Index B, Index L) {
  double total = 0.0;
  double binom = 1.0;  // C(B, k)
  for (Index k = 0; k <= L && k <= B; ++k) {
    total += binom;
    binom = binom * static_cast<double>(B - k) / static_cast<double>(k + 1);
  }
  return total;
}

// Advances `idx` (strictly increasing, values < B) to the next combination
// in lexicographic order; false when exhausted.
bool next_combination(Support& idx, Index B) {
  const Index k = static_cast<Index>(idx.size());
  for (Index pos = k - 1; pos >= 0; --pos) {
    if (idx[pos] < B - k + pos) {
      ++idx[pos];
      for (Index q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

OracleResult brute_force_map(const ObjectiveContext& ctx, Index L,
                             const RestrictedOptions& options) {
  if (L < 0) throw std::invalid_argument("brute_force_map: L must be >= 0");
  const Index B = ctx.op.num_coeffs();
  if (count_supports(B, L) > kMaxOracleSupports) {
    throw CapacityError("brute_force_map: combinatorial budget exceeded");
  }
  const CVector zero = CVector::Zero(B);
  OracleResult best;
  best.estimate = {zero, {}};
  best.objective = objective_value(ctx, zero);
  best.supports_evaluated = 1;
  for (Index k = 1; k <= std::min(L, B); ++k) {
    Support idx(static_cast<std::size_t>(k));
    for (Index q = 0; q < k; ++q) idx[q] = q;
    do {
      const CVector x = restricted_maximize(ctx, idx, zero, options);
      const double h = objective_value(ctx, x);
      ++best.supports_evaluated;
      if (h > best.objective) {
        best.objective = h;
        best.estimate = {x, idx};
      }
    } while (next_combination(idx, B));
  }
  return best;
}

}  // namespace onebit
