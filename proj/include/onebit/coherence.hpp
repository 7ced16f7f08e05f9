#pragma once

// Column coherence mu(i,j) = |a_i^H a_j| / (|a_i| |a_j|), eta-coherence
// bands B_eta(i) = { j : mu(i,j) >= eta }, and the eta selection rule
// "largest eta such that every band has at least two members".

#include "onebit/sensing_operator.hpp"

namespace onebit {

/// |G^H G| normalized by column norms, exactly symmetric with unit
/// diagonal. Magnitudes below kCoherenceFloor are flushed to zero so that
/// orthogonal columns are reported as exactly incoherent.
RMatrix normalized_gram_magnitude(const CMatrix& columns);

inline constexpr double kCoherenceFloor = 1e-12;

/// Direct evaluation from the two columns. Zero-norm columns throw
/// DegenerateOperatorError.
double coherence(const SensingOperator& op, Index i, Index j);

class CoherenceStructure {
 public:
  CoherenceStructure(double eta, std::vector<RMatrix> factor_mu, RVector column_norms);

  double eta() const { return eta_; }
  Index size() const { return size_; }
  const RVector& column_norms() const { return norms_; }

  /// Product of factor coherences.
  double mu(Index i, Index j) const;
  /// Sorted B_eta(i); always contains i.
  Support band(Index i) const;

 private:
  struct Neighbor {
    Index index;
    double mu;
  };
  double eta_;
  Index size_;
  std::vector<RMatrix> factor_mu_;
  // Per factor, per row: neighbors with mu >= eta, sorted by mu descending.
  std::vector<std::vector<std::vector<Neighbor>>> neighbors_;
  RVector norms_;
};

/// Bands at threshold eta in (0, 1), built from the Kronecker factor Grams
/// so the full B x B Gram is never formed.
CoherenceStructure coherence_bands(const SensingOperator& op, double eta);

struct EtaSelection {
  /// False when all columns are mutually orthogonal: no eta in (0,1) gives
  /// every band a second member, and band-maximum selection reduces to
  /// plain hard thresholding.
  bool applicable = false;
  /// True when the attained threshold reached 1 (duplicated columns) and
  /// was pulled back to kEtaClamp.
  bool clamped = false;
  double eta = 0.0;
};

inline constexpr double kEtaClamp = 1.0 - 1e-9;

/// min over i of max over j != i of mu(i, j).
EtaSelection select_eta(const SensingOperator& op);

}  // namespace onebit
