#include "onebit/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace onebit {

std::vector<Index> magnitude_order(const CVector& z) {
  std::vector<double> mag(static_cast<std::size_t>(z.size()));
  for (Index i = 0; i < z.size(); ++i) mag[i] = std::abs(z[i]);
  std::vector<Index> order(mag.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return mag[a] > mag[b]; });
  return order;
}

Support best_terms(const CVector& z, Index k) {
  if (k < 0) throw std::invalid_argument("best_terms: negative k");
  std::vector<Index> order = magnitude_order(z);
  order.resize(static_cast<std::size_t>(std::min<Index>(k, z.size())));
  std::sort(order.begin(), order.end());
  return order;
}

CVector restrict_to(const CVector& z, const Support& support) {
  CVector out = CVector::Zero(z.size());
  for (Index i : support) out[i] = z[i];
  return out;
}

Support support_union(const Support& a, const Support& b) {
  Support out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ThresholdResult bms_threshold(const CVector& z, const CVector& current_x, Index k,
                              const CoherenceStructure& bands, double equality_tol) {
  if (k < 1) throw std::invalid_argument("bms_threshold: k must be >= 1");
  if (z.size() != current_x.size() || z.size() != bands.size()) {
    throw std::invalid_argument("bms_threshold: size mismatch");
  }
  Support selected;
  for (Index i : magnitude_order(z)) {
    if (static_cast<Index>(selected.size()) >= k) break;
    double band_max = -std::numeric_limits<double>::infinity();
    for (Index j : bands.band(i)) {
      if (j == i) continue;
      const bool same = equality_tol > 0.0
                            ? std::abs(current_x[i] - current_x[j]) <= equality_tol
                            : current_x[i] == current_x[j];
      if (same) band_max = std::max(band_max, std::abs(z[j]));
    }
    if (std::abs(z[i]) > band_max) selected.push_back(i);
  }
  std::sort(selected.begin(), selected.end());
  return {selected, restrict_to(z, selected)};
}

Thresholder Thresholder::plain() { return Thresholder(); }

Thresholder Thresholder::band_maximum(std::shared_ptr<const CoherenceStructure> bands,
                                      double equality_tol) {
  if (!bands) throw std::invalid_argument("Thresholder: null coherence structure");
  Thresholder t;
  t.bands_ = std::move(bands);
  t.equality_tol_ = equality_tol;
  return t;
}

ThresholdResult Thresholder::operator()(const CVector& z, const CVector& current_x,
                                        Index k) const {
  if (bands_) return bms_threshold(z, current_x, k, *bands_, equality_tol_);
  Support s = best_terms(z, k);
  CVector v = restrict_to(z, s);
  return {std::move(s), std::move(v)};
}

}  // namespace onebit
