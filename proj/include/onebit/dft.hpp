#pragma once

#include <memory>

#include "onebit/types.hpp"

namespace onebit {

/// Fast application of dft_dictionary(num_antennas, num_bins) and its
/// adjoint to blocks of column vectors.
///
/// With d_k = exp(j*pi*k*(B-1)/B), entry k of D*v is
/// d_k * FFT_B(v)[k] / sqrt(M), and D^H*w is the unnormalized inverse
/// B-point FFT of the zero-padded vector conj(d) .* w, scaled by 1/sqrt(M).
///
/// Instances are immutable and may be shared across threads.
class DftTransform {
 public:
  DftTransform(Index num_antennas, Index num_bins);

  Index num_antennas() const { return num_antennas_; }
  Index num_bins() const { return num_bins_; }

  /// (num_bins x k) -> (num_antennas x k)
  CMatrix apply(const CMatrix& coeffs) const;
  /// (num_antennas x k) -> (num_bins x k)
  CMatrix apply_adjoint(const CMatrix& samples) const;

 private:
  struct Plans;
  Index num_antennas_;
  Index num_bins_;
  CVector phase_;  // d_k / sqrt(M)
  std::shared_ptr<const Plans> plans_;
};

}  // namespace onebit
