#pragma once

#include <string>
#include <vector>

namespace onebit {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant checks on small random instances: operator routes and
/// adjoint identity, gradient vs finite differences, concavity, band
/// symmetry, quantizer properties and solver budgets.
std::vector<SelftestResult> run_selftest(unsigned long long seed = 7);

}  // namespace onebit
