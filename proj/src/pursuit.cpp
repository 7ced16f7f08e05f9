#include "onebit/pursuit.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace onebit {

namespace {

// Tracks visited supports and decides when to halt.
class HaltTracker {
 public:
  /// Returns true (and sets `reason`) when the run should stop after
  /// moving from `previous` to `current`.
  bool step(const Support& previous, const Support& current, HaltReason& reason) {
    if (current == previous) {
      reason = HaltReason::SupportFixed;
      return true;
    }
    if (!visited_.insert(current).second) {
      reason = HaltReason::Cycle;
      return true;
    }
    return false;
  }

 private:
  std::set<Support> visited_{Support{}};
};

}  // namespace

void SolverConfig::validate() const {
  if (sparsity < 1) throw std::invalid_argument("SolverConfig: sparsity must be >= 1");
  if (max_outer_iters < 1) throw std::invalid_argument("SolverConfig: max_outer_iters must be >= 1");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("SolverConfig: inner_tol must be positive");
  if (inner_max_iters < 1) throw std::invalid_argument("SolverConfig: inner_max_iters must be >= 1");
  if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0) ||
      !(line_search.slope > 0.0 && line_search.slope < 1.0) || line_search.max_steps < 1) {
    throw std::invalid_argument("SolverConfig: invalid line search parameters");
  }
}

std::string_view to_string(HaltReason r) {
  switch (r) {
    case HaltReason::SupportFixed: return "support-fixed";
    case HaltReason::MaxIters: return "max-iters";
    case HaltReason::Cycle: return "cycle";
  }
  return "unknown";
}

SolverReport run_grasp(const ObjectiveContext& ctx, const SolverConfig& config,
                       const Thresholder& thresholder) {
  config.validate();
  const Index B = ctx.op.num_coeffs();
  const Index L = config.sparsity;
  const RestrictedOptions inner = config.restricted();

  SolverReport report;
  CVector x = CVector::Zero(B);
  Support support;
  HaltTracker tracker;
  for (int iter = 1; iter <= config.max_outer_iters; ++iter) {
    const CVector z = objective_gradient(ctx, x);
    const Support merged = support_union(thresholder(z, x, 2 * L).support, support);
    report.max_restricted_size =
        std::max(report.max_restricted_size, static_cast<Index>(merged.size()));
    const CVector b = restricted_maximize(ctx, merged, restrict_to(x, merged), inner);

    Support next = best_terms(b, L);
    CVector x_next = restrict_to(b, next);
    if (config.debias) x_next = restricted_maximize(ctx, next, x_next, inner);

    x = std::move(x_next);
    const Support previous = std::exchange(support, std::move(next));
    report.iterations = iter;
    report.objective_trace.push_back(objective_value(ctx, x));
    report.support_trace.push_back(support);
    if (tracker.step(previous, support, report.halted_by)) break;
    report.halted_by = HaltReason::MaxIters;
  }
  report.estimate = {std::move(x), std::move(support)};
  return report;
}

double backtracking_step(const ObjectiveContext& ctx, const CVector& x, const CVector& grad,
                         const LineSearch& ls) {
  const double h0 = objective_value(ctx, x);
  const double slope = grad.squaredNorm();
  double step = 1.0;
  for (int k = 0; k < ls.max_steps; ++k) {
    if (objective_value(ctx, x + step * grad) >= h0 + ls.slope * step * slope) return step;
    step *= ls.shrink;
  }
  return step;
}

SolverReport run_grahtp(const ObjectiveContext& ctx, const SolverConfig& config,
                        const Thresholder& thresholder) {
  config.validate();
  const Index B = ctx.op.num_coeffs();
  const Index L = config.sparsity;
  const RestrictedOptions inner = config.restricted();

  SolverReport report;
  CVector x = CVector::Zero(B);
  Support support;
  HaltTracker tracker;
  for (int iter = 1; iter <= config.max_outer_iters; ++iter) {
    const CVector grad = objective_gradient(ctx, x);
    const double kappa = backtracking_step(ctx, x, grad, config.line_search);
    const CVector z = x + kappa * grad;
    Support next = thresholder(z, x, L).support;
    report.max_restricted_size =
        std::max(report.max_restricted_size, static_cast<Index>(next.size()));
    x = restricted_maximize(ctx, next, restrict_to(x, next), inner);

    const Support previous = std::exchange(support, std::move(next));
    report.iterations = iter;
    report.objective_trace.push_back(objective_value(ctx, x));
    report.support_trace.push_back(support);
    if (tracker.step(previous, support, report.halted_by)) break;
    report.halted_by = HaltReason::MaxIters;
  }
  report.estimate = {std::move(x), std::move(support)};
  return report;
}

}  // namespace onebit
