#pragma once

// l1-regularized baseline: maximize f(x) - gamma * sum_b |x_b| by
// accelerated proximal gradient ascent (monotone FISTA variant).

#include "onebit/pursuit.hpp"

namespace onebit {

struct FistaOptions {
  int max_iters = 500;
  double tol = 1e-6;  // on |z - y| / max(1, |y|), the prox-gradient residual
  double initial_step = 1.0;
  double shrink = 0.5;
  int max_backtracks = 80;
  double support_eps = 1e-8;
};

struct FistaResult {
  SparseEstimate estimate;
  int iterations = 0;
  std::vector<double> objective_trace;  // f - gamma*|x|_1 at each accepted iterate
  double final_step = 0.0;
};

/// Complex soft thresholding: shrinks |v| by `threshold`, keeps the phase.
Complex soft_threshold(Complex v, double threshold);

double l1_objective(const ObjectiveContext& ctx, const CVector& x, double gamma);

FistaResult run_fista(const ObjectiveContext& ctx, double gamma, const FistaOptions& options = {});

/// Smallest gamma for which the first proximal step from zero returns zero:
/// max_b |grad f(0)_b|.
double fista_gamma_max(const ObjectiveContext& ctx);

struct GammaTuning {
  double gamma = 0.0;
  double mean_support = 0.0;
  std::vector<std::pair<double, double>> trace;  // (gamma, mean support) evaluated
};

/// Bisection on log(gamma) over [1e-6, 1e6] until the mean eps-support size
/// of the FISTA estimates over `family` lies in [3L - 1, 3L + 1]. The search
/// assumes mean support is nonincreasing in gamma and throws TuningError if
/// the evaluated trace contradicts that, or if no bracket exists.
GammaTuning tune_gamma(const std::vector<ObjectiveContext>& family, Index L,
                       const FistaOptions& options = {});

}  // namespace onebit
