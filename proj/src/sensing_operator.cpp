#include "onebit/sensing_operator.hpp"

#include <optional>

#include "onebit/coherence.hpp"
#include "onebit/dft.hpp"
#include "onebit/model.hpp"

namespace onebit {

namespace {

bool is_dft_dictionary(const CMatrix& D) {
  if (D.cols() < D.rows() || D.rows() == 0) return false;
  return (D - dft_dictionary(D.rows(), D.cols())).cwiseAbs().maxCoeff() <= 1e-12;
}

}  // namespace

struct SensingOperator::Impl {
  Index m = 0, n = 0, t = 0, bins_rx = 0, bins_tx = 0;
  OperatorMode mode = OperatorMode::Dense;
  bool structured = true;
  CMatrix a_rx, a_tx, s;
  CMatrix g;  // S^T conj(A_tx), T x B_tx
  std::optional<DftTransform> rx_fft, tx_fft;
  CMatrix dense;  // populated in dense mode
  RVector norms;
  std::vector<RMatrix> factor_mu;

  Index rows() const { return m * t; }
  Index cols() const { return bins_rx * bins_tx; }

  CMatrix rx_apply(const CMatrix& X) const {
    return rx_fft ? rx_fft->apply(X) : CMatrix(a_rx * X);
  }
  CMatrix rx_adjoint(const CMatrix& W) const {
    return rx_fft ? rx_fft->apply_adjoint(W) : CMatrix(a_rx.adjoint() * W);
  }
  CMatrix tx_apply(const CMatrix& X) const {
    return tx_fft ? tx_fft->apply(X) : CMatrix(a_tx * X);
  }
  CMatrix tx_adjoint(const CMatrix& W) const {
    return tx_fft ? tx_fft->apply_adjoint(W) : CMatrix(a_tx.adjoint() * W);
  }

  CMatrix assemble() const {
    if (rows() * cols() > kMaxDenseEntries) {
      throw CapacityError("SensingOperator: MT*B exceeds the dense cap");
    }
    CMatrix A(rows(), cols());
    for (Index it = 0; it < bins_tx; ++it) {
      for (Index ir = 0; ir < bins_rx; ++ir) {
        A.col(it * bins_rx + ir) = kron_column(ir, it);
      }
    }
    return A;
  }

  CVector kron_column(Index ir, Index it) const {
    CVector c(rows());
    for (Index tt = 0; tt < t; ++tt) {
      c.segment(tt * m, m) = g(tt, it) * a_rx.col(ir);
    }
    return c;
  }
};

SensingOperator::SensingOperator(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

SensingOperator SensingOperator::build(const CMatrix& S, const CMatrix& A_rx,
                                       const CMatrix& A_tx, OperatorMode mode) {
  if (S.rows() != A_tx.rows()) {
    throw std::invalid_argument("build_operator: S and A_tx row counts differ");
  }
  if (A_rx.rows() == 0 || A_rx.cols() == 0 || A_tx.cols() == 0 || S.cols() == 0) {
    throw std::invalid_argument("build_operator: empty factor");
  }
  auto impl = std::make_shared<Impl>();
  impl->m = A_rx.rows();
  impl->n = A_tx.rows();
  impl->t = S.cols();
  impl->bins_rx = A_rx.cols();
  impl->bins_tx = A_tx.cols();
  impl->mode = mode;
  impl->a_rx = A_rx;
  impl->a_tx = A_tx;
  impl->s = S;
  impl->g = S.transpose() * A_tx.conjugate();
  if (is_dft_dictionary(A_rx)) impl->rx_fft.emplace(A_rx.rows(), A_rx.cols());
  if (is_dft_dictionary(A_tx)) impl->tx_fft.emplace(A_tx.rows(), A_tx.cols());
  if (mode == OperatorMode::Dense) impl->dense = impl->assemble();

  const RVector rx_norms = A_rx.colwise().norm().transpose();
  const RVector g_norms = impl->g.colwise().norm().transpose();
  impl->norms.resize(impl->cols());
  for (Index it = 0; it < impl->bins_tx; ++it) {
    impl->norms.segment(it * impl->bins_rx, impl->bins_rx) = g_norms[it] * rx_norms;
  }
  if (impl->norms.minCoeff() > 0.0) {
    impl->factor_mu = {normalized_gram_magnitude(A_rx),
                       normalized_gram_magnitude(impl->g)};
  }
  return SensingOperator(std::move(impl));
}

SensingOperator SensingOperator::from_dense(const CMatrix& A) {
  if (A.size() == 0) throw std::invalid_argument("from_dense: empty matrix");
  if (A.size() > kMaxDenseEntries) {
    throw CapacityError("from_dense: matrix exceeds the dense cap");
  }
  auto impl = std::make_shared<Impl>();
  impl->m = A.rows();
  impl->t = 1;
  impl->bins_rx = A.cols();
  impl->bins_tx = 1;
  impl->mode = OperatorMode::Dense;
  impl->structured = false;
  impl->dense = A;
  impl->norms = A.colwise().norm().transpose();
  if (impl->norms.minCoeff() > 0.0) impl->factor_mu = {normalized_gram_magnitude(A)};
  return SensingOperator(std::move(impl));
}

Index SensingOperator::m() const { return impl_->m; }
Index SensingOperator::n() const { return impl_->n; }
Index SensingOperator::t() const { return impl_->t; }
Index SensingOperator::bins_rx() const { return impl_->bins_rx; }
Index SensingOperator::bins_tx() const { return impl_->bins_tx; }
Index SensingOperator::measurement_size() const { return impl_->rows(); }
Index SensingOperator::num_coeffs() const { return impl_->cols(); }
OperatorMode SensingOperator::mode() const { return impl_->mode; }
bool SensingOperator::structured() const { return impl_->structured; }
bool SensingOperator::rx_uses_fft() const { return impl_->rx_fft.has_value(); }
bool SensingOperator::tx_uses_fft() const { return impl_->tx_fft.has_value(); }
const CMatrix& SensingOperator::a_rx() const { return impl_->a_rx; }
const CMatrix& SensingOperator::a_tx() const { return impl_->a_tx; }
const CMatrix& SensingOperator::training() const { return impl_->s; }
const RVector& SensingOperator::column_norms() const { return impl_->norms; }
const std::vector<RMatrix>& SensingOperator::factor_coherence() const {
  return impl_->factor_mu;
}

CVector SensingOperator::apply(const CVector& x) const {
  const Impl& op = *impl_;
  if (x.size() != op.cols()) {
    throw std::invalid_argument("apply: x must have length B");
  }
  if (op.mode == OperatorMode::Dense) return op.dense * x;

  // A_rx (S^H (A_tx X^H))^H, evaluated right to left.
  const Eigen::Map<const CMatrix> X(x.data(), op.bins_rx, op.bins_tx);
  const CMatrix W = op.rx_apply(X);                     // M x B_tx
  const CMatrix V = op.tx_apply(W.adjoint()).adjoint();  // M x N
  const CMatrix Y = V * op.s;                           // M x T
  return Eigen::Map<const CVector>(Y.data(), Y.size());
}

CVector SensingOperator::apply_adjoint(const CVector& c) const {
  const Impl& op = *impl_;
  if (c.size() != op.rows()) {
    throw std::invalid_argument("apply_adjoint: c must have length MT");
  }
  if (op.mode == OperatorMode::Dense) return op.dense.adjoint() * c;

  // A_rx^H (A_tx^H (S C^H))^H
  const Eigen::Map<const CMatrix> C(c.data(), op.m, op.t);
  const CMatrix P = C * op.s.adjoint();                  // M x N
  const CMatrix Q = op.tx_adjoint(P.adjoint()).adjoint();  // M x B_tx
  const CMatrix X = op.rx_adjoint(Q);                    // B_rx x B_tx
  return Eigen::Map<const CVector>(X.data(), X.size());
}

CVector SensingOperator::column(Index b) const {
  const Impl& op = *impl_;
  if (b < 0 || b >= op.cols()) throw std::out_of_range("column: index out of range");
  if (op.mode == OperatorMode::Dense) return op.dense.col(b);
  return op.kron_column(b % op.bins_rx, b / op.bins_rx);
}

CMatrix SensingOperator::columns(const Support& support) const {
  CMatrix out(measurement_size(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    out.col(static_cast<Index>(k)) = column(support[k]);
  }
  return out;
}

CMatrix SensingOperator::dense() const {
  if (impl_->mode == OperatorMode::Dense) return impl_->dense;
  return impl_->assemble();
}

RVector real_form(const CVector& x) {
  RVector r(2 * x.size());
  r.head(x.size()) = x.real();
  r.tail(x.size()) = x.imag();
  return r;
}

CVector complex_form(const RVector& r) {
  if (r.size() % 2 != 0) {
    throw std::invalid_argument("complex_form: odd-length input");
  }
  const Index n = r.size() / 2;
  CVector x(n);
  x.real() = r.head(n);
  x.imag() = r.tail(n);
  return x;
}

}  // namespace onebit
