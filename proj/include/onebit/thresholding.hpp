#pragma once

// Hard thresholders used by the gradient pursuit solvers: the plain best
// k-term approximation and band maximum selection (BMS).

#include <memory>

#include "onebit/coherence.hpp"

namespace onebit {

/// Indices ordered by |z| descending; ties keep the lower index first.
std::vector<Index> magnitude_order(const CVector& z);

/// Support of the best k-term approximation z|_k (sorted).
Support best_terms(const CVector& z, Index k);

/// z with everything outside `support` set to zero.
CVector restrict_to(const CVector& z, const Support& support);

/// Sorted union of two sorted supports.
Support support_union(const Support& a, const Support& b);

struct ThresholdResult {
  Support support;  // sorted
  CVector values;   // z restricted to support
};

/// Band maximum selection. Candidates are visited in magnitude_order(z);
/// candidate i is admitted only if |z_i| is strictly larger than |z_j| for
/// every j in its by-product set
///   J(i) = { j in B_eta(i), j != i : current_x[j] == current_x[i] }.
/// Stops once k indices are admitted or every index has been checked.
/// `equality_tol` relaxes the exact equality test to |x_i - x_j| <= tol.
ThresholdResult bms_threshold(const CVector& z, const CVector& current_x, Index k,
                              const CoherenceStructure& bands, double equality_tol = 0.0);

/// Selects either plain best-k thresholding or band maximum selection.
class Thresholder {
 public:
  static Thresholder plain();
  static Thresholder band_maximum(std::shared_ptr<const CoherenceStructure> bands,
                                  double equality_tol = 0.0);

  bool uses_bands() const { return bands_ != nullptr; }
  const CoherenceStructure* bands() const { return bands_.get(); }

  ThresholdResult operator()(const CVector& z, const CVector& current_x, Index k) const;

 private:
  std::shared_ptr<const CoherenceStructure> bands_;
  double equality_tol_ = 0.0;
};

}  // namespace onebit
