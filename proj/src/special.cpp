#include "onebit/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace onebit {

namespace {

constexpr double kTail = -30.0;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// sum_n (-1)^n (2n-1)!! / x^(2n), the asymptotic factor in
// Phi(x) ~ phi(x) / (-x) * series(x) for x -> -inf.
double tail_series(double x) {
  const double inv_x2 = 1.0 / (x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 30; ++n) {
    const double next = -term * (2.0 * n - 1.0) * inv_x2;
    if (std::abs(next) >= std::abs(term)) break;  // series starts diverging
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace

double log_ndtr(double x) {
  if (x > 0.0) return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
  if (x >= kTail) return std::log(0.5 * std::erfc(-x * kInvSqrt2));
  return -0.5 * x * x - std::log(-x) - kLogSqrt2Pi + std::log(tail_series(x));
}

double inv_mills(double x) {
  if (x >= kTail) {
    const double pdf = std::exp(-0.5 * x * x - kLogSqrt2Pi);
    return pdf / (0.5 * std::erfc(-x * kInvSqrt2));
  }
  return -x / tail_series(x);
}

double log_ndtr_curvature(double x) {
  const double lam = inv_mills(x);
  return std::clamp(-lam * (x + lam), -1.0, 0.0);
}

}  // namespace onebit
