#pragma once

// The vectorized one-bit sensing matrix
//
//   A = (S^T conj(A_tx)) kron A_rx,   unvec(A x) = A_rx X A_tx^H S,
//
// applied either from an explicit MT x B matrix or in factored form, where
// products with DFT dictionaries go through FFTs.

#include <memory>

#include "onebit/types.hpp"

namespace onebit {

enum class OperatorMode { Dense, Fft };

/// Largest MT*B for which the explicit matrix is materialized.
inline constexpr Index kMaxDenseEntries = Index{1} << 26;

class SensingOperator {
 public:
  /// S: N x T training, A_rx: M x B_rx, A_tx: N x B_tx.
  /// Dense mode throws CapacityError when MT*B > kMaxDenseEntries.
  static SensingOperator build(const CMatrix& S, const CMatrix& A_rx,
                               const CMatrix& A_tx, OperatorMode mode);

  /// Unstructured operator from an explicit matrix. Only meant for
  /// contrived test operators (e.g. duplicated columns); coherence is then
  /// computed from the full Gram matrix.
  static SensingOperator from_dense(const CMatrix& A);

  Index m() const;
  Index n() const;
  Index t() const;
  Index bins_rx() const;
  Index bins_tx() const;
  Index measurement_size() const;  // MT
  Index num_coeffs() const;        // B = B_rx * B_tx
  OperatorMode mode() const;
  bool structured() const;

  /// Each factor dictionary is applied by FFT when it is exactly a
  /// dft_dictionary(); otherwise by matrix products.
  bool rx_uses_fft() const;
  bool tx_uses_fft() const;

  const CMatrix& a_rx() const;
  const CMatrix& a_tx() const;
  const CMatrix& training() const;

  CVector apply(const CVector& x) const;
  CVector apply_adjoint(const CVector& c) const;

  CVector column(Index b) const;
  /// Columns listed in `support`, in order (MT x |support|).
  CMatrix columns(const Support& support) const;
  /// 2-norms of all B columns, cached at construction.
  const RVector& column_norms() const;

  /// Explicit MT x B matrix (the cache in dense mode; assembled from the
  /// Kronecker factors otherwise). Throws CapacityError beyond the dense cap.
  CMatrix dense() const;

  /// Coherence of the columns of each Kronecker factor. Column b of A maps
  /// to factor indices (b % size0, b / size0), and the coherence of A
  /// factorizes as the product of factor coherences. Unstructured operators
  /// have a single factor of size B. Empty when some column has zero norm.
  const std::vector<RMatrix>& factor_coherence() const;

 private:
  struct Impl;
  explicit SensingOperator(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Stacks Re over Im.
RVector real_form(const CVector& x);
/// Inverse of real_form(); odd length throws std::invalid_argument.
CVector complex_form(const RVector& r);

}  // namespace onebit
