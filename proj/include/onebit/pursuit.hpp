#pragma once

// Gradient support pursuit (GraSP) and gradient hard thresholding pursuit
// (GraHTP) for the sparsity-constrained MAP problem
//
//   maximize h(x)  subject to  |supp(x)| <= L.
//
// Passing a band-maximum Thresholder turns them into BMSGraSP / BMSGraHTP.

#include <string_view>

#include "onebit/restricted.hpp"
#include "onebit/thresholding.hpp"

namespace onebit {

struct SparseEstimate {
  CVector x_hat;
  Support support;  // sorted; supp(x_hat) is contained in it
};

struct SolverConfig {
  Index sparsity = 1;
  int max_outer_iters = 50;
  double inner_tol = 1e-8;
  int inner_max_iters = 100;
  LineSearch line_search;
  /// GraSP only: re-solve on supp(b|_L) instead of truncating b.
  bool debias = false;

  void validate() const;
  RestrictedOptions restricted() const { return {inner_tol, inner_max_iters, line_search}; }
};

enum class HaltReason { SupportFixed, MaxIters, Cycle };
std::string_view to_string(HaltReason r);

struct SolverReport {
  SparseEstimate estimate;
  int iterations = 0;
  HaltReason halted_by = HaltReason::MaxIters;
  std::vector<double> objective_trace;  // h(x_hat) after each iteration
  std::vector<Support> support_trace;   // support after each iteration
  Index max_restricted_size = 0;        // largest |I| handed to restricted_maximize
};

/// Per iteration: z = grad h(x); I = supp(threshold(z, 2L)) U supp(x);
/// b = argmax over I; x = b|_L (or the debiased re-solve).
SolverReport run_grasp(const ObjectiveContext& ctx, const SolverConfig& config,
                       const Thresholder& thresholder);

/// Per iteration: kappa by backtracking along grad h; z = x + kappa grad h(x);
/// I = supp(threshold(z, L)); x = argmax over I.
SolverReport run_grahtp(const ObjectiveContext& ctx, const SolverConfig& config,
                        const Thresholder& thresholder);

/// Armijo backtracking step for ascent along grad from x, starting at 1.
double backtracking_step(const ObjectiveContext& ctx, const CVector& x, const CVector& grad,
                         const LineSearch& ls);

}  // namespace onebit
