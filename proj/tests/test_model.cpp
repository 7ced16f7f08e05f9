#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "onebit/model.hpp"
#include "test_util.hpp"

using namespace onebit;
using onebit::testing::random_cmatrix;
using std::numbers::pi;

namespace {
const Complex J{0.0, 1.0};
}

TEST_CASE("steering vector entries and normalization") {
  const CVector a = steering_vector(0.0, 4);
  for (Index k = 0; k < 4; ++k) CHECK(std::abs(a[k] - Complex(0.5, 0.0)) < 1e-15);

  const CVector b = steering_vector(pi / 2, 2);
  CHECK(std::abs(b[0] - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(b[1] - Complex(-1.0 / std::sqrt(2.0), 0.0)) < 1e-15);

  Rng rng(3);
  std::uniform_real_distribution<double> angle(-pi / 2, pi / 2);
  for (int rep = 0; rep < 50; ++rep) {
    const double theta = angle(rng);
    const Index M = 1 + rep % 17;
    const CVector v = steering_vector(theta, M);
    CHECK(std::abs(v.norm() - 1.0) < 1e-14);
    for (Index k = 0; k < M; ++k) {
      const Complex expect =
          std::exp(-J * pi * static_cast<double>(k) * std::sin(theta)) / std::sqrt(double(M));
      CHECK(std::abs(v[k] - expect) < 1e-14);
    }
  }
}

TEST_CASE("steering vector rejects bad input") {
  CHECK_THROWS_AS(steering_vector(std::nan(""), 4), std::invalid_argument);
  CHECK_THROWS_AS(steering_vector(INFINITY, 4), std::invalid_argument);
  CHECK_THROWS_AS(steering_vector(0.1, 0), std::invalid_argument);
}

TEST_CASE("draw_channel is deterministic and has the expected shape") {
  Rng r1(42), r2(42);
  const ChannelRealization a = draw_channel(3, 5, 4, r1);
  const ChannelRealization b = draw_channel(3, 5, 4, r2);
  CHECK(a.H == b.H);
  CHECK(a.aoas == b.aoas);
  CHECK(a.aods == b.aods);
  CHECK(a.gains == b.gains);
  CHECK(a.H.rows() == 5);
  CHECK(a.H.cols() == 4);
  for (double t : a.aoas) CHECK(std::abs(t) <= pi / 2);
  for (double t : a.aods) CHECK(std::abs(t) <= pi / 2);
  CHECK_THROWS_AS(draw_channel(0, 4, 4, r1), std::invalid_argument);
}

TEST_CASE("mean channel energy equals the number of paths") {
  Rng rng(2024);
  double sum = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) sum += draw_channel(4, 8, 8, rng).H.squaredNorm();
  CHECK(std::abs(sum / draws - 4.0) < 0.1);
}

TEST_CASE("single-path channel is rank one") {
  Rng rng(9);
  const ChannelRealization ch = draw_channel(1, 6, 5, rng);
  const Eigen::JacobiSVD<CMatrix> svd(ch.H);
  const RVector s = svd.singularValues();
  CHECK(s[0] > 1e-6);
  CHECK(s[1] < 1e-12 * s[0]);
}

TEST_CASE("broadside single path matches the analytic outer product") {
  const CMatrix H = assemble_channel(4, 3, {Complex(1.0, 0.0)}, {0.0}, {0.0});
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(std::abs(H(i, j) - 1.0 / std::sqrt(12.0)) < 1e-12);
  CHECK_THROWS_AS(assemble_channel(4, 3, {Complex(1.0, 0.0)}, {0.0, 0.1}, {0.0}),
                  std::invalid_argument);
}

TEST_CASE("Zadoff-Chu training properties") {
  SUBCASE("literal even-length sequence") {
    const TrainingSequence tr = zc_training(1, 4, 1);
    const Complex expect[4] = {1.0, std::exp(-J * pi / 4.0), std::exp(-J * pi),
                               std::exp(-J * pi * 9.0 / 4.0)};
    for (Index n = 0; n < 4; ++n) CHECK(std::abs(tr.S(0, n) - expect[n]) < 1e-12);
  }
  SUBCASE("literal odd-length sequence") {
    const TrainingSequence tr = zc_training(1, 5, 2);
    for (Index n = 0; n < 5; ++n) {
      const Complex e = std::exp(-J * pi * 2.0 * double(n * (n + 1)) / 5.0);
      CHECK(std::abs(tr.S(0, n) - e) < 1e-12);
    }
  }
  SUBCASE("unit modulus, column norms and orthogonal rows") {
    for (auto [N, T] : {std::pair<Index, Index>{16, 20}, {8, 8}, {5, 7}, {3, 9}, {64, 80}}) {
      const TrainingSequence tr = zc_training(N, T, default_zc_root(T));
      CHECK(tr.S.rows() == N);
      CHECK(tr.S.cols() == T);
      CHECK((tr.S.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
      for (Index t = 0; t < T; ++t)
        CHECK(std::abs(tr.S.col(t).norm() - std::sqrt(double(N))) < 1e-12);
      const CMatrix G = tr.S * tr.S.adjoint();
      const CMatrix I = CMatrix::Identity(N, N) * double(T);
      CHECK((G - I).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("rows are circular shifts") {
    const TrainingSequence tr = zc_training(4, 8, 3, std::vector<Index>{0, 2, 5, 7});
    for (Index i = 0; i < 4; ++i)
      for (Index n = 0; n < 8; ++n)
        CHECK(std::abs(tr.S(i, n) - tr.S(0, (n + tr.shifts[i]) % 8)) < 1e-12);
  }
  SUBCASE("default root") {
    CHECK(default_zc_root(20) == 3);
    CHECK(default_zc_root(7) == 2);
    CHECK(default_zc_root(6) == 5);
    for (Index T = 2; T < 60; ++T) {
      const Index r = default_zc_root(T);
      CHECK(std::gcd(r, T) == 1);
      for (Index q = 2; q < r; ++q) CHECK(std::gcd(q, T) != 1);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(zc_training(9, 8, 3), std::invalid_argument);
    CHECK_THROWS_AS(zc_training(4, 8, 2), std::invalid_argument);
    CHECK_THROWS_AS(zc_training(2, 8, 3, std::vector<Index>{1, 9}), std::invalid_argument);
    CHECK_THROWS_AS(zc_training(2, 8, 3, std::vector<Index>{1}), std::invalid_argument);
  }
}

TEST_CASE("one-bit quantizer") {
  CHECK(quantize(Complex(0.3, -2.0)) == Complex(1.0, -1.0));
  CHECK(quantize(Complex(-1.0, 0.0)) == Complex(-1.0, 1.0));
  CHECK(quantize(Complex(0.0, 0.0)) == Complex(1.0, 1.0));

  Rng rng(5);
  const CMatrix Y = random_cmatrix(6, 7, rng);
  const CMatrix Q = quantize(Y);
  CHECK(quantize(Q) == Q);
  CHECK(quantize(CMatrix(Y.conjugate())) == CMatrix(Q.conjugate()));
  for (double c : {1e-8, 0.5, 3.0, 1e9}) CHECK(quantize(CMatrix(c * Y)) == Q);
  const CVector v = vec(Y);
  CHECK(quantize(v) == vec(Q));
}

TEST_CASE("measurement synthesis") {
  Rng rng(11);
  const TrainingSequence tr = zc_training(4, 8, 3);
  const ChannelRealization ch = draw_channel(2, 4, 4, rng);

  SUBCASE("deterministic for a fixed seed") {
    Rng a(77), b(77);
    CHECK(synthesize_measurement(ch.H, tr.S, 10.0, a).y_hat ==
          synthesize_measurement(ch.H, tr.S, 10.0, b).y_hat);
  }
  SUBCASE("zero SNR ignores the channel") {
    Rng a(77), b(77);
    const CMatrix other = 100.0 * ch.H;
    CHECK(synthesize_measurement(ch.H, tr.S, 0.0, a).y_hat ==
          synthesize_measurement(other, tr.S, 0.0, b).y_hat);
  }
  SUBCASE("unquantized samples follow the linear model") {
    Rng a(8);
    const QuantizedMeasurement q = synthesize_measurement(ch.H, tr.S, 4.0, a, true);
    REQUIRE(q.y_unquantized.has_value());
    CHECK(q.rho == 4.0);
    CHECK(q.y_hat == quantize(*q.y_unquantized));
    // Replay the noise stream to recover N.
    Rng b(8);
    CVector noise(32);
    for (Index i = 0; i < 32; ++i) noise[i] = complex_normal(b);
    const CVector expect = vec(CMatrix(2.0 * ch.H * tr.S)) + noise;
    CHECK((expect - *q.y_unquantized).norm() < 1e-12);
  }
  SUBCASE("signs are balanced under pure noise") {
    Rng a(123);
    const CMatrix H0 = CMatrix::Zero(4, 4);
    int plus = 0, total = 0;
    while (total < 10000) {
      const CVector y = synthesize_measurement(H0, tr.S, 1.0, a).y_hat;
      for (Index i = 0; i < y.size() && total < 10000; ++i, ++total) plus += y[i].real() > 0;
    }
    CHECK(std::abs(plus / 10000.0 - 0.5) < 0.02);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(synthesize_measurement(ch.H, tr.S, -1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(synthesize_measurement(CMatrix::Zero(4, 3), tr.S, 1.0, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("complex normal has unit variance") {
  Rng rng(31);
  double re2 = 0.0, im2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Complex c = complex_normal(rng);
    re2 += c.real() * c.real();
    im2 += c.imag() * c.imag();
  }
  CHECK(std::abs(re2 / n - 0.5) < 0.01);
  CHECK(std::abs(im2 / n - 0.5) < 0.01);
}

TEST_CASE("DFT dictionary") {
  SUBCASE("columns are steering vectors on the sine grid") {
    const CMatrix D = dft_dictionary(5, 12);
    for (Index b = 0; b < 12; ++b) {
      const double s = 2.0 * double(b) / 12.0 - 1.0 + 1.0 / 12.0;
      CHECK(dft_grid_sine(b, 12) == doctest::Approx(s).epsilon(1e-15));
      CHECK((D.col(b) - steering_vector(std::asin(s), 5)).norm() < 1e-12);
      CHECK(std::abs(D.col(b).norm() - 1.0) < 1e-14);
    }
  }
  SUBCASE("square dictionary is unitary") {
    for (Index M : {1, 2, 7, 16}) {
      const CMatrix D = dft_dictionary(M, M);
      CHECK((D.adjoint() * D - CMatrix::Identity(M, M)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("2x oversampling gives a constant adjacent coherence") {
    for (Index M : {4, 8, 16}) {
      const Index B = 2 * M;
      const CMatrix D = dft_dictionary(M, B);
      const double dirichlet =
          std::abs(std::sin(pi * double(M) / double(B)) / (double(M) * std::sin(pi / double(B))));
      for (Index b = 0; b + 1 < B; ++b) {
        const double g = std::abs(D.col(b).dot(D.col(b + 1)));
        CHECK(std::abs(g - dirichlet) < 1e-12);
      }
    }
    CHECK(std::abs(std::abs(dft_dictionary(8, 16).col(0).dot(dft_dictionary(8, 16).col(1))) -
                   0.6407288619353766) < 1e-12);
  }
  CHECK_THROWS_AS(dft_dictionary(8, 4), std::invalid_argument);
}

TEST_CASE("vec and unvec round trip") {
  Rng rng(1);
  for (auto [r, c] : {std::pair<Index, Index>{1, 1}, {3, 5}, {16, 20}}) {
    const CMatrix m = random_cmatrix(r, c, rng);
    const CVector v = vec(m);
    CHECK(v[1 % v.size()] == m(1 % r, (1 / r) % c));
    CHECK(unvec(v, r, c) == m);
  }
  CHECK_THROWS_AS(unvec(CVector::Zero(5), 2, 3), std::invalid_argument);
}

TEST_CASE("on-grid channels place paths on dictionary bins") {
  Rng rng(4);
  Support truth;
  const ChannelRealization ch = draw_channel_on_grid(3, 8, 6, 16, 12, rng, &truth);
  REQUIRE(truth.size() == 3);
  CHECK(std::is_sorted(truth.begin(), truth.end()));
  const CMatrix Arx = dft_dictionary(8, 16);
  const CMatrix Atx = dft_dictionary(6, 12);
  const auto bin_of = [](double angle, Index bins) {
    for (Index b = 0; b < bins; ++b)
      if (std::abs(std::sin(angle) - dft_grid_sine(b, bins)) < 1e-12) return b;
    return Index{-1};
  };
  CMatrix H = CMatrix::Zero(8, 6);
  Support found;
  for (std::size_t l = 0; l < 3; ++l) {
    const Index ir = bin_of(ch.aoas[l], 16);
    const Index it = bin_of(ch.aods[l], 12);
    REQUIRE(ir >= 0);
    REQUIRE(it >= 0);
    found.push_back(it * 16 + ir);
    H += ch.gains[l] * Arx.col(ir) * Atx.col(it).adjoint();
  }
  std::sort(found.begin(), found.end());
  CHECK(found == truth);
  CHECK((H - ch.H).cwiseAbs().maxCoeff() < 1e-12);
}
