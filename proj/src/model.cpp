#include "onebit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace onebit {

namespace {

constexpr double kPi = std::numbers::pi;

double sign_or_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

CVector steering_vector_from_sine(double sine, Index num_antennas) {
  if (num_antennas < 1) {
    throw std::invalid_argument("steering_vector: num_antennas must be >= 1");
  }
  if (!std::isfinite(sine)) {
    throw std::invalid_argument("steering_vector: non-finite angle");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_antennas));
  CVector a(num_antennas);
  for (Index k = 0; k < num_antennas; ++k) {
    a[k] = std::polar(scale, -kPi * static_cast<double>(k) * sine);
  }
  return a;
}

CVector steering_vector(double angle, Index num_antennas) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("steering_vector: non-finite angle");
  }
  return steering_vector_from_sine(std::sin(angle), num_antennas);
}

Complex complex_normal(Rng& rng) {
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  const double re = half(rng);
  const double im = half(rng);
  return {re, im};
}

CMatrix assemble_channel(Index M, Index N, const std::vector<Complex>& gains,
                         const std::vector<double>& aoas,
                         const std::vector<double>& aods) {
  if (gains.size() != aoas.size() || gains.size() != aods.size()) {
    throw std::invalid_argument("assemble_channel: path list length mismatch");
  }
  CMatrix H = CMatrix::Zero(M, N);
  for (std::size_t l = 0; l < gains.size(); ++l) {
    H.noalias() += gains[l] * steering_vector(aoas[l], M) *
                   steering_vector(aods[l], N).adjoint();
  }
  return H;
}

ChannelRealization draw_channel(Index L, Index M, Index N, Rng& rng) {
  if (L < 1 || M < 1 || N < 1) {
    throw std::invalid_argument("draw_channel: L, M, N must be positive");
  }
  std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);
  ChannelRealization ch;
  ch.num_paths = L;
  for (Index l = 0; l < L; ++l) {
    ch.gains.push_back(complex_normal(rng));
    ch.aoas.push_back(angle(rng));
    ch.aods.push_back(angle(rng));
  }
  ch.H = assemble_channel(M, N, ch.gains, ch.aoas, ch.aods);
  return ch;
}

ChannelRealization draw_channel_on_grid(Index L, Index M, Index N,
                                        Index bins_rx, Index bins_tx, Rng& rng,
                                        Support* true_support) {
  if (L < 1 || M < 1 || N < 1 || L > bins_rx * bins_tx) {
    throw std::invalid_argument("draw_channel_on_grid: bad dimensions");
  }
  std::uniform_int_distribution<Index> pick(0, bins_rx * bins_tx - 1);
  std::set<Index> used;
  ChannelRealization ch;
  ch.num_paths = L;
  ch.H = CMatrix::Zero(M, N);
  while (static_cast<Index>(used.size()) < L) {
    const Index b = pick(rng);
    if (!used.insert(b).second) continue;
    const double s_rx = dft_grid_sine(b % bins_rx, bins_rx);
    const double s_tx = dft_grid_sine(b / bins_rx, bins_tx);
    const Complex gain = complex_normal(rng);
    ch.gains.push_back(gain);
    ch.aoas.push_back(std::asin(s_rx));
    ch.aods.push_back(std::asin(s_tx));
    // Built from the grid sines so H lies exactly in the dictionary span.
    ch.H.noalias() += gain * steering_vector_from_sine(s_rx, M) *
                      steering_vector_from_sine(s_tx, N).adjoint();
  }
  if (true_support) *true_support = Support(used.begin(), used.end());
  return ch;
}

Index default_zc_root(Index T) {
  for (Index r = 2;; ++r) {
    if (std::gcd(r, T) == 1) return r;
  }
}

TrainingSequence zc_training(Index N, Index T, Index root,
                             std::optional<std::vector<Index>> shifts) {
  if (N < 1 || T < 1) {
    throw std::invalid_argument("zc_training: N and T must be positive");
  }
  if (N > T) throw std::invalid_argument("zc_training: N must not exceed T");
  if (root < 1 || std::gcd(root, T) != 1) {
    throw std::invalid_argument("zc_training: root must be coprime with T");
  }
  std::vector<Index> sh;
  if (shifts) {
    sh = *shifts;
  } else {
    sh.resize(N);
    std::iota(sh.begin(), sh.end(), Index{0});
  }
  if (static_cast<Index>(sh.size()) != N) {
    throw std::invalid_argument("zc_training: need exactly N shifts");
  }
  std::set<Index> distinct;
  for (Index s : sh) distinct.insert(((s % T) + T) % T);
  if (static_cast<Index>(distinct.size()) != N) {
    throw std::invalid_argument("zc_training: shifts must be distinct mod T");
  }

  // Reduce the phase numerator modulo 2T before scaling to keep the
  // argument of polar() small.
  CVector z(T);
  for (Index n = 0; n < T; ++n) {
    const Index q = (T % 2 == 0) ? n * n : n * (n + 1);
    const Index num = (root % (2 * T)) * (q % (2 * T)) % (2 * T);
    z[n] = std::polar(1.0, -kPi * static_cast<double>(num) / static_cast<double>(T));
  }

  TrainingSequence ts;
  ts.root = root;
  ts.shifts = sh;
  ts.S.resize(N, T);
  for (Index i = 0; i < N; ++i) {
    const Index s = ((sh[i] % T) + T) % T;
    for (Index t = 0; t < T; ++t) ts.S(i, t) = z[(t + s) % T];
  }
  return ts;
}

Complex quantize(Complex v) {
  return {sign_or_plus(v.real()), sign_or_plus(v.imag())};
}

CVector quantize(const CVector& v) {
  return v.unaryExpr([](const Complex& c) { return quantize(c); });
}

CMatrix quantize(const CMatrix& v) {
  return v.unaryExpr([](const Complex& c) { return quantize(c); });
}

QuantizedMeasurement synthesize_measurement(const CMatrix& H, const CMatrix& S,
                                            double rho, Rng& rng,
                                            bool keep_unquantized) {
  if (H.cols() != S.rows()) {
    throw std::invalid_argument("synthesize_measurement: H and S do not conform");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("synthesize_measurement: rho must be >= 0");
  }
  CMatrix Y = std::sqrt(rho) * (H * S);
  // Noise is drawn column by column to match vec() ordering.
  for (Index t = 0; t < Y.cols(); ++t) {
    for (Index m = 0; m < Y.rows(); ++m) Y(m, t) += complex_normal(rng);
  }
  QuantizedMeasurement q;
  q.rho = rho;
  CVector y = vec(Y);
  q.y_hat = quantize(y);
  if (keep_unquantized) q.y_unquantized = std::move(y);
  return q;
}

double dft_grid_sine(Index bin, Index num_bins) {
  const double B = static_cast<double>(num_bins);
  return 2.0 * static_cast<double>(bin) / B - 1.0 + 1.0 / B;
}

CMatrix dft_dictionary(Index num_antennas, Index num_bins) {
  if (num_antennas < 1) {
    throw std::invalid_argument("dft_dictionary: num_antennas must be >= 1");
  }
  if (num_bins < num_antennas) {
    throw std::invalid_argument("dft_dictionary: num_bins < num_antennas");
  }
  CMatrix D(num_antennas, num_bins);
  for (Index b = 0; b < num_bins; ++b) {
    D.col(b) = steering_vector_from_sine(dft_grid_sine(b, num_bins), num_antennas);
  }
  return D;
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Index rows, Index cols) {
  if (rows * cols != v.size()) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

}  // namespace onebit
