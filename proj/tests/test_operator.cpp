#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "onebit/coherence.hpp"
#include "onebit/model.hpp"
#include "onebit/sensing_operator.hpp"
#include "test_util.hpp"

using namespace onebit;
using onebit::testing::dft_operator;
using onebit::testing::random_cmatrix;
using onebit::testing::random_cvector;
using onebit::testing::rel_err;

namespace {

// Explicit (S^T conj(A_tx)) kron A_rx, written out entry by entry.
CMatrix kronecker_oracle(const CMatrix& S, const CMatrix& Arx, const CMatrix& Atx) {
  const CMatrix G = S.transpose() * Atx.conjugate();
  const Index M = Arx.rows(), Brx = Arx.cols(), T = G.rows(), Btx = G.cols();
  CMatrix A(M * T, Brx * Btx);
  for (Index t = 0; t < T; ++t)
    for (Index m = 0; m < M; ++m)
      for (Index it = 0; it < Btx; ++it)
        for (Index ir = 0; ir < Brx; ++ir) A(t * M + m, it * Brx + ir) = G(t, it) * Arx(m, ir);
  return A;
}

Support brute_band(const CMatrix& A, Index i, double eta) {
  Support out;
  for (Index j = 0; j < A.cols(); ++j) {
    const double mu = std::abs(A.col(i).dot(A.col(j))) / (A.col(i).norm() * A.col(j).norm());
    if (mu >= eta) out.push_back(j);
  }
  return out;
}

}  // namespace

TEST_CASE("operator shapes and validation") {
  const SensingOperator op = dft_operator(4, 3, 5, 8, 6, OperatorMode::Fft);
  CHECK(op.m() == 4);
  CHECK(op.n() == 3);
  CHECK(op.t() == 5);
  CHECK(op.bins_rx() == 8);
  CHECK(op.bins_tx() == 6);
  CHECK(op.num_coeffs() == 48);
  CHECK(op.measurement_size() == 20);
  CHECK(op.structured());
  CHECK(op.rx_uses_fft());
  CHECK(op.tx_uses_fft());
  CHECK(op.apply(CVector::Zero(48)).size() == 20);
  CHECK(op.apply(CVector::Zero(48)).norm() == 0.0);
  CHECK(op.apply_adjoint(CVector::Zero(20)).size() == 48);
  CHECK_THROWS_AS(op.apply(CVector::Zero(47)), std::invalid_argument);
  CHECK_THROWS_AS(op.apply_adjoint(CVector::Zero(21)), std::invalid_argument);
  CHECK_THROWS_AS(op.column(48), std::out_of_range);

  const TrainingSequence tr = zc_training(3, 5, 2);
  CHECK_THROWS_AS(SensingOperator::build(tr.S, dft_dictionary(4, 8), dft_dictionary(4, 8),
                                         OperatorMode::Dense),
                  std::invalid_argument);
}

TEST_CASE("dense mode refuses oversized operators") {
  const TrainingSequence tr = zc_training(64, 80, 3);
  CHECK_THROWS_AS(SensingOperator::build(tr.S, dft_dictionary(64, 256), dft_dictionary(64, 256),
                                         OperatorMode::Dense),
                  CapacityError);
  CHECK_NOTHROW(SensingOperator::build(tr.S, dft_dictionary(64, 256), dft_dictionary(64, 256),
                                       OperatorMode::Fft));
}

TEST_CASE("fft and dense application agree with the Kronecker oracle") {
  Rng rng(17);
  for (auto [M, N, T, Brx, Btx] : {std::array<Index, 5>{8, 8, 8, 16, 16},
                                   {4, 3, 5, 8, 6},
                                   {5, 4, 7, 11, 9},
                                   {2, 2, 4, 4, 2},
                                   {3, 3, 3, 3, 3}}) {
    const TrainingSequence tr = zc_training(N, T, default_zc_root(T));
    const CMatrix Arx = dft_dictionary(M, Brx), Atx = dft_dictionary(N, Btx);
    const SensingOperator fft = SensingOperator::build(tr.S, Arx, Atx, OperatorMode::Fft);
    const SensingOperator dense = SensingOperator::build(tr.S, Arx, Atx, OperatorMode::Dense);
    const CMatrix A = kronecker_oracle(tr.S, Arx, Atx);
    CHECK((dense.dense() - A).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((fft.dense() - A).cwiseAbs().maxCoeff() < 1e-10);
    for (int rep = 0; rep < 20; ++rep) {
      const CVector x = random_cvector(A.cols(), rng);
      const CVector c = random_cvector(A.rows(), rng);
      CHECK(rel_err(fft.apply(x), A * x) < 1e-10);
      CHECK(rel_err(dense.apply(x), A * x) < 1e-12);
      CHECK(rel_err(fft.apply_adjoint(c), A.adjoint() * c) < 1e-10);
      CHECK(rel_err(dense.apply_adjoint(c), A.adjoint() * c) < 1e-12);
    }
    // Energy identity.
    CHECK(std::abs(A.squaredNorm() - fft.column_norms().squaredNorm()) <
          1e-10 * A.squaredNorm());
  }
}

TEST_CASE("non-DFT factors take the dense factor route") {
  Rng rng(5);
  const TrainingSequence tr = zc_training(3, 4, 3);
  const CMatrix Arx = random_cmatrix(4, 6, rng), Atx = random_cmatrix(3, 5, rng);
  const SensingOperator op = SensingOperator::build(tr.S, Arx, Atx, OperatorMode::Fft);
  CHECK_FALSE(op.rx_uses_fft());
  CHECK_FALSE(op.tx_uses_fft());
  const CMatrix A = kronecker_oracle(tr.S, Arx, Atx);
  const CVector x = random_cvector(30, rng);
  CHECK(rel_err(op.apply(x), A * x) < 1e-12);
}

TEST_CASE("linearity, adjoint identity and columns") {
  Rng rng(23);
  const SensingOperator op = dft_operator(8, 8, 8, 16, 16, OperatorMode::Fft);
  const Index B = op.num_coeffs(), MT = op.measurement_size();
  for (int rep = 0; rep < 10; ++rep) {
    const CVector x = random_cvector(B, rng), z = random_cvector(B, rng);
    const Complex a(0.3, -1.2), b(-2.0, 0.5);
    CHECK(rel_err(op.apply(a * x + b * z), a * op.apply(x) + b * op.apply(z)) < 1e-12);
    const CVector c = random_cvector(MT, rng);
    const Complex lhs = c.dot(op.apply(x));
    const Complex rhs = op.apply_adjoint(c).dot(x);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
  }
  for (Index b : {Index{0}, Index{17}, B - 1}) {
    CVector e = CVector::Zero(B);
    e[b] = 1.0;
    const CVector col = op.apply(e);
    CHECK(rel_err(op.column(b), col) < 1e-12);
    CHECK(std::abs(op.apply_adjoint(col)[b] - col.squaredNorm()) < 1e-10 * col.squaredNorm());
    CHECK(std::abs(op.column_norms()[b] - col.norm()) < 1e-12);
  }
  const Support s{3, 40, 200};
  const CMatrix cols = op.columns(s);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(cols.col(Index(k)) == op.column(s[k]));
}

TEST_CASE("unitary dictionaries give orthogonal columns") {
  const SensingOperator op = dft_operator(4, 4, 4, 4, 4, OperatorMode::Dense);
  const CMatrix A = op.dense();
  const CMatrix G = A.adjoint() * A;
  const RVector d = op.column_norms().array().square();
  CHECK((G - CMatrix(d.cast<Complex>().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((op.column_norms().array() - 2.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("real and complex forms") {
  CVector one(1);
  one << Complex(1.0, 2.0);
  const RVector r = real_form(one);
  CHECK(r.size() == 2);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 2.0);
  Rng rng(2);
  const CVector x = random_cvector(9, rng);
  CHECK(complex_form(real_form(x)) == x);
  CHECK(std::abs(real_form(x).norm() - x.norm()) < 1e-14);
  CHECK_THROWS_AS(complex_form(RVector::Zero(3)), std::invalid_argument);
}

TEST_CASE("pairwise coherence") {
  const SensingOperator op = dft_operator(4, 4, 4, 4, 4, OperatorMode::Dense);
  CHECK(coherence(op, 5, 5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(coherence(op, 5, 6) < 1e-12);

  Rng rng(8);
  CMatrix A = random_cmatrix(6, 4, rng);
  A.col(3) = A.col(1);
  const SensingOperator dup = SensingOperator::from_dense(A);
  CHECK(coherence(dup, 1, 3) == doctest::Approx(1.0).epsilon(1e-14));

  CMatrix Z = random_cmatrix(6, 3, rng);
  Z.col(2).setZero();
  const SensingOperator zero = SensingOperator::from_dense(Z);
  CHECK_THROWS_AS(coherence(zero, 0, 2), DegenerateOperatorError);
  CHECK_THROWS_AS(coherence_bands(zero, 0.5), DegenerateOperatorError);
  CHECK_THROWS_AS(select_eta(zero), DegenerateOperatorError);
}

TEST_CASE("factored bands equal brute-force bands on the full Gram") {
  for (auto [M, N, T, Brx, Btx] : {std::array<Index, 5>{4, 4, 6, 8, 8},
                                   {8, 6, 8, 16, 12},
                                   {5, 3, 7, 9, 7}}) {
    const SensingOperator op = dft_operator(M, N, T, Brx, Btx, OperatorMode::Dense);
    const CMatrix A = op.dense();
    for (double eta : {0.05, 0.3, 0.62, 0.9}) {
      const CoherenceStructure bands = coherence_bands(op, eta);
      CHECK(bands.size() == A.cols());
      for (Index i = 0; i < A.cols(); ++i) {
        const Support b = bands.band(i);
        CHECK(b == brute_band(A, i, eta));
        CHECK(std::binary_search(b.begin(), b.end(), i));
        for (Index j : b) {
          const Support back = bands.band(j);
          CHECK(std::binary_search(back.begin(), back.end(), i));
        }
      }
      for (Index i = 0; i < A.cols(); i += 7)
        for (Index j = 0; j < A.cols(); j += 5) CHECK(std::abs(bands.mu(i, j) - coherence(op, i, j)) < 1e-12);
    }
  }
}

TEST_CASE("band edge cases") {
  const SensingOperator unitary = dft_operator(4, 4, 4, 4, 4, OperatorMode::Dense);
  for (double eta : {1e-6, 0.5, 0.999}) {
    const CoherenceStructure bands = coherence_bands(unitary, eta);
    for (Index i = 0; i < 16; ++i) CHECK(bands.band(i) == Support{i});
  }
  // Tiny eta: every column with nonzero coherence joins.
  const SensingOperator dense = dft_operator(4, 4, 5, 7, 5, OperatorMode::Dense);
  const CoherenceStructure all = coherence_bands(dense, 1e-14);
  const CMatrix A = dense.dense();
  for (Index i = 0; i < 35; ++i) CHECK(all.band(i) == brute_band(A, i, 1e-14));
  CHECK_THROWS_AS(coherence_bands(dense, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(coherence_bands(dense, 1.0), std::invalid_argument);
}

TEST_CASE("select_eta") {
  SUBCASE("2x oversampled DFT factors match brute force") {
    for (auto [M, N, T] : {std::array<Index, 3>{4, 4, 8}, {8, 8, 8}, {6, 4, 6}}) {
      const SensingOperator op = dft_operator(M, N, T, 2 * M, 2 * N, OperatorMode::Dense);
      const CMatrix A = op.dense();
      const RVector norms = A.colwise().norm().transpose();
      double expect = INFINITY;
      for (Index i = 0; i < A.cols(); ++i) {
        double row = 0.0;
        for (Index j = 0; j < A.cols(); ++j)
          if (j != i) row = std::max(row, std::abs(A.col(i).dot(A.col(j))) / (norms[i] * norms[j]));
        expect = std::min(expect, row);
      }
      const EtaSelection sel = select_eta(op);
      CHECK(sel.applicable);
      CHECK_FALSE(sel.clamped);
      CHECK(std::abs(sel.eta - expect) < 1e-12);
      const CoherenceStructure bands = coherence_bands(op, sel.eta);
      Index smallest = A.cols();
      for (Index i = 0; i < A.cols(); ++i) smallest = std::min<Index>(smallest, bands.band(i).size());
      CHECK(smallest >= 2);
    }
  }
  SUBCASE("unitary factors are not applicable") {
    const EtaSelection sel = select_eta(dft_operator(4, 4, 4, 4, 4, OperatorMode::Dense));
    CHECK_FALSE(sel.applicable);
  }
  SUBCASE("duplicated columns clamp below one") {
    Rng rng(6);
    CMatrix half = random_cmatrix(8, 3, rng);
    CMatrix A(8, 6);
    A << half, half;
    const EtaSelection sel = select_eta(SensingOperator::from_dense(A));
    CHECK(sel.applicable);
    CHECK(sel.clamped);
    CHECK(sel.eta == kEtaClamp);
    CHECK(sel.eta < 1.0);
  }
  SUBCASE("needs two columns") {
    CMatrix one(3, 1);
    one << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(select_eta(SensingOperator::from_dense(one)), std::invalid_argument);
  }
}

TEST_CASE("normalized Gram magnitude") {
  Rng rng(12);
  const CMatrix C = random_cmatrix(5, 4, rng);
  const RMatrix mu = normalized_gram_magnitude(C);
  for (Index i = 0; i < 4; ++i) {
    CHECK(mu(i, i) == 1.0);
    for (Index j = 0; j < 4; ++j) {
      CHECK(mu(i, j) == mu(j, i));
      CHECK(mu(i, j) <= 1.0);
      if (i != j) {
        const double e = std::abs(C.col(i).dot(C.col(j))) / (C.col(i).norm() * C.col(j).norm());
        CHECK(std::abs(mu(i, j) - e) < 1e-14);
      }
    }
  }
}
