#include "onebit/fista.hpp"

#include <algorithm>
#include <cmath>

namespace onebit {

Complex soft_threshold(Complex v, double threshold) {
  const double mag = std::abs(v);
  if (mag <= threshold) return {0.0, 0.0};
  return v * ((mag - threshold) / mag);
}

double l1_objective(const ObjectiveContext& ctx, const CVector& x, double gamma) {
  return loglikelihood(ctx, x) - gamma * x.cwiseAbs().sum();
}

double fista_gamma_max(const ObjectiveContext& ctx) {
  return loglikelihood_gradient(ctx, CVector::Zero(ctx.op.num_coeffs())).cwiseAbs().maxCoeff();
}

FistaResult run_fista(const ObjectiveContext& ctx, double gamma, const FistaOptions& options) {
  if (!(gamma > 0.0)) throw std::invalid_argument("run_fista: gamma must be positive");
  const Index B = ctx.op.num_coeffs();
  const auto prox = [](const CVector& v, double t) {
    return CVector(v.unaryExpr([t](const Complex& c) { return soft_threshold(c, t); }));
  };

  FistaResult result;
  CVector x = CVector::Zero(B);
  CVector y = x;
  double obj_x = l1_objective(ctx, x, gamma);
  double momentum = 1.0;
  double step = options.initial_step;

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    const CVector image_y = ctx.op.apply(y);
    const double f_y = loglikelihood_from_image(ctx, image_y);
    const CVector grad_y = ctx.op.apply_adjoint(likelihood_weights(ctx, image_y));

    // Backtrack until the quadratic minorant at y lies below f at z.
    CVector z;
    double f_z = 0.0;
    bool accepted = false;
    for (int k = 0; k < options.max_backtracks; ++k) {
      z = prox(y + step * grad_y, gamma * step);
      const CVector d = z - y;
      f_z = loglikelihood(ctx, z);
      const double minorant = f_y + grad_y.dot(d).real() - d.squaredNorm() / (2.0 * step);
      if (f_z >= minorant) {
        accepted = true;
        break;
      }
      step *= options.shrink;
    }
    if (!std::isfinite(f_z) || !std::isfinite(f_y)) {
      throw NumericalError("run_fista: non-finite objective");
    }
    if (!accepted) throw NumericalError("run_fista: step size backtracking failed");

    const double obj_z = f_z - gamma * z.cwiseAbs().sum();
    const CVector x_prev = x;
    if (obj_z >= obj_x) {
      x = z;
      obj_x = obj_z;
    }
    result.objective_trace.push_back(obj_x);
    result.iterations = iter;

    const double residual = (z - y).norm() / std::max(1.0, y.norm());
    const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = x + (momentum / next) * (z - x) + ((momentum - 1.0) / next) * (x - x_prev);
    momentum = next;
    if (residual <= options.tol) break;
  }

  Support support;
  for (Index b = 0; b < B; ++b) {
    if (std::abs(x[b]) > options.support_eps) support.push_back(b);
  }
  result.estimate = {std::move(x), std::move(support)};
  result.final_step = step;
  return result;
}

namespace {

double mean_support(const std::vector<ObjectiveContext>& family, double gamma,
                    const FistaOptions& options) {
  double total = 0.0;
  for (const ObjectiveContext& ctx : family) {
    total += static_cast<double>(run_fista(ctx, gamma, options).estimate.support.size());
  }
  return total / static_cast<double>(family.size());
}

void check_monotone(std::vector<std::pair<double, double>> trace) {
  std::sort(trace.begin(), trace.end());
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].second > trace[i - 1].second) {
      throw TuningError("tune_gamma: mean support increased with gamma");
    }
  }
}

}  // namespace

GammaTuning tune_gamma(const std::vector<ObjectiveContext>& family, Index L,
                       const FistaOptions& options) {
  if (family.empty()) throw std::invalid_argument("tune_gamma: need at least one trial");
  if (L < 1) throw std::invalid_argument("tune_gamma: L must be >= 1");
  const double target = 3.0 * static_cast<double>(L);
  const auto within = [&](double m) { return m >= target - 1.0 && m <= target + 1.0; };

  GammaTuning out;
  auto eval = [&](double gamma) {
    const double m = mean_support(family, gamma, options);
    out.trace.emplace_back(gamma, m);
    return m;
  };
  double lo = 1e-6;
  double hi = 1e6;
  const double m_lo = eval(lo);
  const double m_hi = eval(hi);
  if (m_lo < target - 1.0 || m_hi > target + 1.0) {
    throw TuningError("tune_gamma: target support not bracketed by [1e-6, 1e6]");
  }
  if (within(m_lo) || within(m_hi)) {
    out.gamma = within(m_hi) ? hi : lo;
    out.mean_support = within(m_hi) ? m_hi : m_lo;
    return out;
  }
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = std::sqrt(lo * hi);
    const double m = eval(mid);
    check_monotone(out.trace);
    if (within(m)) {
      out.gamma = mid;
      out.mean_support = m;
      return out;
    }
    (m > target ? lo : hi) = mid;
  }
  throw TuningError("tune_gamma: bisection did not reach the target window");
}

}  // namespace onebit
