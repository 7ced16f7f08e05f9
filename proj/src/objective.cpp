#include "onebit/objective.hpp"

#include <cmath>

#include "onebit/special.hpp"

namespace onebit {

namespace {

void check_length(const ObjectiveContext& ctx, const CVector& x) {
  if (x.size() != ctx.op.num_coeffs()) {
    throw std::invalid_argument("objective: x must have length B");
  }
}

}  // namespace

ObjectiveContext::ObjectiveContext(SensingOperator op_, CVector y_hat_, double rho_)
    : op(std::move(op_)), y_hat(std::move(y_hat_)), rho(rho_), scale(std::sqrt(2.0 * rho_)) {
  if (y_hat.size() != op.measurement_size()) {
    throw std::invalid_argument("ObjectiveContext: y_hat must have length MT");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("ObjectiveContext: rho must be finite and >= 0");
  }
}

double loglikelihood_from_image(const ObjectiveContext& ctx, const CVector& image) {
  double f = 0.0;
  for (Index i = 0; i < image.size(); ++i) {
    f += log_ndtr(ctx.scale * ctx.y_hat[i].real() * image[i].real());
    f += log_ndtr(ctx.scale * ctx.y_hat[i].imag() * image[i].imag());
  }
  return f;
}

CVector likelihood_weights(const ObjectiveContext& ctx, const CVector& image) {
  CVector c(image.size());
  for (Index i = 0; i < image.size(); ++i) {
    const double yr = ctx.y_hat[i].real();
    const double yi = ctx.y_hat[i].imag();
    c[i] = {inv_mills(ctx.scale * yr * image[i].real()) * ctx.scale * yr,
            inv_mills(ctx.scale * yi * image[i].imag()) * ctx.scale * yi};
  }
  return c;
}

double loglikelihood(const ObjectiveContext& ctx, const CVector& x) {
  check_length(ctx, x);
  return loglikelihood_from_image(ctx, ctx.op.apply(x));
}

double log_prior(const CVector& x) { return -x.squaredNorm(); }

double objective_value(const ObjectiveContext& ctx, const CVector& x) {
  return loglikelihood(ctx, x) + log_prior(x);
}

CVector loglikelihood_gradient(const ObjectiveContext& ctx, const CVector& x) {
  check_length(ctx, x);
  return ctx.op.apply_adjoint(likelihood_weights(ctx, ctx.op.apply(x)));
}

CVector objective_gradient(const ObjectiveContext& ctx, const CVector& x) {
  return loglikelihood_gradient(ctx, x) - 2.0 * x;
}

}  // namespace onebit
