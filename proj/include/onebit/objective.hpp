#pragma once

// MAP objective for one-bit measurements y_hat = Q(sqrt(rho) A x + n):
//
//   f(x) = sum_i log Phi( sqrt(2 rho) y_R,i * (A_R x_R)_i )   (log-likelihood)
//   g(x) = -|x|^2                                             (log-prior)
//   h(x) = f(x) + g(x)
//
// Gradients are returned in "complex form": Re and Im hold the two halves
// of the gradient with respect to the real parametrization x_R.

#include "onebit/model.hpp"
#include "onebit/sensing_operator.hpp"

namespace onebit {

struct ObjectiveContext {
  ObjectiveContext(SensingOperator op, CVector y_hat, double rho);
  ObjectiveContext(SensingOperator op, const QuantizedMeasurement& q)
      : ObjectiveContext(std::move(op), q.y_hat, q.rho) {}

  SensingOperator op;
  CVector y_hat;
  double rho;
  double scale;  // sqrt(2 rho)
};

/// f evaluated from a precomputed image A x (length MT).
double loglikelihood_from_image(const ObjectiveContext& ctx, const CVector& image);

/// c with A^H c equal to the likelihood gradient, given the image A x.
CVector likelihood_weights(const ObjectiveContext& ctx, const CVector& image);

double loglikelihood(const ObjectiveContext& ctx, const CVector& x);
double log_prior(const CVector& x);
double objective_value(const ObjectiveContext& ctx, const CVector& x);

CVector loglikelihood_gradient(const ObjectiveContext& ctx, const CVector& x);
CVector objective_gradient(const ObjectiveContext& ctx, const CVector& x);

}  // namespace onebit
