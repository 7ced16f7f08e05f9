#pragma once

#include "onebit/objective.hpp"

namespace onebit {

/// Armijo backtracking parameters.
struct LineSearch {
  double shrink = 0.5;
  double slope = 0.1;
  int max_steps = 50;
};

struct RestrictedOptions {
  double tol = 1e-8;  // stop when the restricted gradient norm is <= tol
  int max_iters = 100;
  LineSearch line_search;
};

/// argmax h(x) subject to supp(x) in `support`.
///
/// h is strictly concave on that subspace, so the maximizer is unique. It is
/// found by Newton ascent in the 2|support| real coordinates with Armijo
/// backtracking, starting from `init` (which must vanish off `support`).
/// Throws ConvergenceError with the best iterate when the iteration cap is
/// hit first.
CVector restricted_maximize(const ObjectiveContext& ctx, const Support& support,
                            const CVector& init, const RestrictedOptions& options = {});

/// Norm of the gradient of h restricted to `support`.
double restricted_gradient_norm(const ObjectiveContext& ctx, const Support& support,
                                const CVector& x);

}  // namespace onebit
