#pragma once

namespace onebit {

/// log Phi(x) for the standard normal CDF. Uses erfc on [-30, inf) and the
/// asymptotic tail series below -30, so it stays finite for |x| ~ 1e4.
double log_ndtr(double x);

/// Inverse Mills ratio phi(x) / Phi(x); behaves like -x for x -> -inf.
double inv_mills(double x);

/// Second derivative of log Phi, -lambda(x) (x + lambda(x)), in [-1, 0].
double log_ndtr_curvature(double x);

}  // namespace onebit
