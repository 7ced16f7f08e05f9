#include "onebit/restricted.hpp"

#include <cmath>

#include "onebit/special.hpp"

namespace onebit {

namespace {

constexpr double kDecrementFloor = 1e-13;

// h and its derivatives on the active columns only.
class ActiveProblem {
 public:
  ActiveProblem(const ObjectiveContext& ctx, const Support& support)
      : ctx_(ctx), cols_(ctx.op.columns(support)) {}

  Index dim() const { return cols_.cols(); }

  double value(const CVector& xs) const {
    return loglikelihood_from_image(ctx_, cols_ * xs) - xs.squaredNorm();
  }

  RVector gradient(const CVector& xs) const {
    return real_form(cols_.adjoint() * likelihood_weights(ctx_, cols_ * xs) - 2.0 * xs);
  }

  // Real-form gradient and Hessian at xs.
  void derivatives(const CVector& xs, RVector& grad, RMatrix& hess) const {
    const CVector image = cols_ * xs;
    grad = real_form(cols_.adjoint() * likelihood_weights(ctx_, image) - 2.0 * xs);

    const Index k = dim();
    const Index rows = cols_.rows();
    RMatrix ar(2 * rows, 2 * k);
    ar.topLeftCorner(rows, k) = cols_.real();
    ar.topRightCorner(rows, k) = -cols_.imag();
    ar.bottomLeftCorner(rows, k) = cols_.imag();
    ar.bottomRightCorner(rows, k) = cols_.real();

    RVector w(2 * rows);
    const double s = ctx_.scale;
    for (Index i = 0; i < rows; ++i) {
      w[i] = s * s * log_ndtr_curvature(s * ctx_.y_hat[i].real() * image[i].real());
      w[rows + i] = s * s * log_ndtr_curvature(s * ctx_.y_hat[i].imag() * image[i].imag());
    }
    hess = ar.transpose() * w.asDiagonal() * ar;
    hess.diagonal().array() -= 2.0;
  }

 private:
  const ObjectiveContext& ctx_;
  CMatrix cols_;
};

CVector scatter(const Support& support, const CVector& xs, Index size) {
  CVector x = CVector::Zero(size);
  for (std::size_t k = 0; k < support.size(); ++k) x[support[k]] = xs[static_cast<Index>(k)];
  return x;
}

}  // namespace

CVector restricted_maximize(const ObjectiveContext& ctx, const Support& support,
                            const CVector& init, const RestrictedOptions& options) {
  const Index B = ctx.op.num_coeffs();
  if (init.size() != B) throw std::invalid_argument("restricted_maximize: init must have length B");
  CVector xs(static_cast<Index>(support.size()));
  {
    CVector rest = init;
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (support[k] < 0 || support[k] >= B) {
        throw std::out_of_range("restricted_maximize: support index out of range");
      }
      xs[static_cast<Index>(k)] = init[support[k]];
      rest[support[k]] = 0.0;
    }
    if (rest.cwiseAbs().maxCoeff() != 0.0) {
      throw std::invalid_argument("restricted_maximize: init is nonzero off the support");
    }
  }
  if (support.empty()) return CVector::Zero(B);

  const ActiveProblem problem(ctx, support);
  const LineSearch& ls = options.line_search;
  double h = problem.value(xs);
  RVector grad;
  RMatrix hess;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    problem.derivatives(xs, grad, hess);
    if (!grad.allFinite() || !std::isfinite(h)) {
      throw NumericalError("restricted_maximize: non-finite objective or gradient");
    }
    if (grad.norm() <= options.tol) return scatter(support, xs, B);

    const Eigen::LLT<RMatrix> llt(-hess);
    const RVector dir = llt.solve(grad);
    const double decrement = grad.dot(dir);
    // The predicted gain is below the resolution of h, so the line search
    // cannot judge the step; judge the full Newton step by the gradient.
    if (decrement <= kDecrementFloor * (1.0 + std::abs(h))) {
      const CVector trial = xs + complex_form(dir);
      if (problem.gradient(trial).norm() >= grad.norm()) return scatter(support, xs, B);
      xs = trial;
      h = problem.value(xs);
      continue;
    }

    double step = 1.0;
    bool accepted = false;
    for (int k = 0; k < ls.max_steps; ++k, step *= ls.shrink) {
      const CVector trial = xs + step * complex_form(dir);
      const double h_trial = problem.value(trial);
      if (h_trial >= h + ls.slope * step * decrement) {
        xs = trial;
        h = h_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw ConvergenceError("restricted_maximize: line search failed",
                             scatter(support, xs, B));
    }
  }
  problem.derivatives(xs, grad, hess);
  if (grad.norm() <= options.tol) return scatter(support, xs, B);
  throw ConvergenceError("restricted_maximize: iteration cap reached", scatter(support, xs, B));
}

double restricted_gradient_norm(const ObjectiveContext& ctx, const Support& support,
                                const CVector& x) {
  const CVector g = objective_gradient(ctx, x);
  double sq = 0.0;
  for (Index i : support) sq += std::norm(g[i]);
  return std::sqrt(sq);
}

}  // namespace onebit
