#include "onebit/dft.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace onebit {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on
// caller-owned buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct DftTransform::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(int n) {
    std::lock_guard lock(planner_mutex());
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

DftTransform::DftTransform(Index num_antennas, Index num_bins)
    : num_antennas_(num_antennas), num_bins_(num_bins) {
  if (num_antennas < 1 || num_bins < num_antennas) {
    throw std::invalid_argument("DftTransform: need 1 <= num_antennas <= num_bins");
  }
  const double B = static_cast<double>(num_bins);
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_antennas));
  phase_.resize(num_antennas);
  for (Index k = 0; k < num_antennas; ++k) {
    phase_[k] = std::polar(scale, std::numbers::pi * static_cast<double>(k) * (B - 1.0) / B);
  }
  plans_ = std::make_shared<const Plans>(static_cast<int>(num_bins));
}

CMatrix DftTransform::apply(const CMatrix& coeffs) const {
  if (coeffs.rows() != num_bins_) {
    throw std::invalid_argument("DftTransform::apply: row count must equal num_bins");
  }
  CMatrix out(num_antennas_, coeffs.cols());
  CVector buf(num_bins_);
  for (Index c = 0; c < coeffs.cols(); ++c) {
    buf = coeffs.col(c);
    fftw_execute_dft(plans_->forward, as_fftw(buf.data()), as_fftw(buf.data()));
    out.col(c) = phase_.cwiseProduct(buf.head(num_antennas_));
  }
  return out;
}

CMatrix DftTransform::apply_adjoint(const CMatrix& samples) const {
  if (samples.rows() != num_antennas_) {
    throw std::invalid_argument(
        "DftTransform::apply_adjoint: row count must equal num_antennas");
  }
  CMatrix out(num_bins_, samples.cols());
  CVector buf(num_bins_);
  for (Index c = 0; c < samples.cols(); ++c) {
    buf.setZero();
    buf.head(num_antennas_) = phase_.conjugate().cwiseProduct(samples.col(c));
    fftw_execute_dft(plans_->backward, as_fftw(buf.data()), as_fftw(buf.data()));
    out.col(c) = buf;
  }
  return out;
}

}  // namespace onebit
