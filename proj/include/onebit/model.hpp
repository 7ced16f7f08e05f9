#pragma once

// Synthetic narrowband mmWave link: ULA steering vectors, the few-path
// geometric channel, Zadoff-Chu training and zero-threshold one-bit
// quantization of the received block.

#include <optional>
#include <random>

#include "onebit/types.hpp"

namespace onebit {

using Rng = std::mt19937_64;

/// ULA response for half-wavelength spacing, normalized to unit 2-norm.
/// Entry k is exp(-j*pi*k*sin(angle)) / sqrt(num_antennas).
CVector steering_vector(double angle, Index num_antennas);

/// Same as steering_vector() but parametrized by sin(angle) directly.
CVector steering_vector_from_sine(double sine, Index num_antennas);

struct ChannelRealization {
  Index num_paths = 0;
  std::vector<Complex> gains;
  std::vector<double> aoas;  // receive angles, radians
  std::vector<double> aods;  // transmit angles, radians
  CMatrix H;                 // M x N
};

/// Sum of rank-one path contributions alpha * a_rx(aoa) * a_tx(aod)^H.
CMatrix assemble_channel(Index M, Index N, const std::vector<Complex>& gains,
                         const std::vector<double>& aoas,
                         const std::vector<double>& aods);

/// Gains ~ CN(0,1), angles ~ unif[-pi/2, pi/2], all independent.
ChannelRealization draw_channel(Index L, Index M, Index N, Rng& rng);

/// Channel whose paths sit exactly on the DFT dictionary grids, so the
/// virtual channel is exactly L-sparse. `true_support` receives the
/// column-major coefficient index of each path (distinct).
ChannelRealization draw_channel_on_grid(Index L, Index M, Index N,
                                        Index bins_rx, Index bins_tx, Rng& rng,
                                        Support* true_support = nullptr);

struct TrainingSequence {
  CMatrix S;  // N x T
  Index root = 0;
  std::vector<Index> shifts;
};

/// Smallest integer greater than one that is coprime with T.
Index default_zc_root(Index T);

/// Rows of S are circular shifts of a length-T Zadoff-Chu sequence.
/// Shifts default to 0..N-1 and must be distinct modulo T.
TrainingSequence zc_training(Index N, Index T, Index root,
                             std::optional<std::vector<Index>> shifts = {});

/// sign(Re) + j sign(Im), with sign(0) = +1.
Complex quantize(Complex v);
CVector quantize(const CVector& v);
CMatrix quantize(const CMatrix& v);

struct QuantizedMeasurement {
  CVector y_hat;  // vec of the quantized M x T block
  double rho = 0.0;
  std::optional<CVector> y_unquantized;
};

/// Y = sqrt(rho) H S + N with vec(N) ~ CN(0, I); returns Q(vec(Y)).
QuantizedMeasurement synthesize_measurement(const CMatrix& H, const CMatrix& S,
                                            double rho, Rng& rng,
                                            bool keep_unquantized = false);

/// Overcomplete DFT dictionary with columns on a uniform sin(angle) grid:
/// column b steers toward sin(angle) = 2b/num_bins - 1 + 1/num_bins.
CMatrix dft_dictionary(Index num_antennas, Index num_bins);
double dft_grid_sine(Index bin, Index num_bins);

/// Column-major vec / unvec.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Index rows, Index cols);

/// Standard circularly-symmetric complex Gaussian sample, E|z|^2 = 1.
Complex complex_normal(Rng& rng);

}  // namespace onebit
