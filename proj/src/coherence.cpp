#include "onebit/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace onebit {

namespace {

const std::vector<RMatrix>& checked_factors(const SensingOperator& op) {
  const auto& f = op.factor_coherence();
  if (f.empty()) {
    throw DegenerateOperatorError("coherence: operator has a zero-norm column");
  }
  return f;
}

}  // namespace

RMatrix normalized_gram_magnitude(const CMatrix& columns) {
  const RVector norms = columns.colwise().norm().transpose();
  if (norms.size() > 0 && norms.minCoeff() <= 0.0) {
    throw DegenerateOperatorError("coherence: zero-norm column");
  }
  const CMatrix gram = columns.adjoint() * columns;
  const Index n = gram.rows();
  RMatrix mu(n, n);
  for (Index i = 0; i < n; ++i) {
    mu(i, i) = 1.0;
    for (Index j = i + 1; j < n; ++j) {
      double v = std::abs(gram(i, j)) / (norms[i] * norms[j]);
      if (v < kCoherenceFloor) v = 0.0;
      v = std::min(v, 1.0);
      mu(i, j) = v;
      mu(j, i) = v;
    }
  }
  return mu;
}

double coherence(const SensingOperator& op, Index i, Index j) {
  const CVector ai = op.column(i);
  const CVector aj = op.column(j);
  const double ni = ai.norm();
  const double nj = aj.norm();
  if (ni <= 0.0 || nj <= 0.0) {
    throw DegenerateOperatorError("coherence: zero-norm column");
  }
  return std::min(1.0, std::abs(ai.dot(aj)) / (ni * nj));
}

CoherenceStructure::CoherenceStructure(double eta, std::vector<RMatrix> factor_mu,
                                       RVector column_norms)
    : eta_(eta), size_(1), factor_mu_(std::move(factor_mu)), norms_(std::move(column_norms)) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("coherence_bands: eta must lie in (0, 1)");
  }
  for (const RMatrix& mu : factor_mu_) {
    size_ *= mu.rows();
    std::vector<std::vector<Neighbor>> rows(mu.rows());
    for (Index i = 0; i < mu.rows(); ++i) {
      for (Index j = 0; j < mu.cols(); ++j) {
        if (mu(i, j) >= eta) rows[i].push_back({j, mu(i, j)});
      }
      std::stable_sort(rows[i].begin(), rows[i].end(),
                       [](const Neighbor& a, const Neighbor& b) { return a.mu > b.mu; });
    }
    neighbors_.push_back(std::move(rows));
  }
}

double CoherenceStructure::mu(Index i, Index j) const {
  double v = 1.0;
  for (const RMatrix& f : factor_mu_) {
    const Index n = f.rows();
    v *= f(i % n, j % n);
    i /= n;
    j /= n;
  }
  return v;
}

Support CoherenceStructure::band(Index i) const {
  // Depth-first product over factors; a partial product below eta can only
  // shrink further since every factor coherence is at most one.
  std::vector<Index> digits;
  Index rest = i;
  for (const RMatrix& f : factor_mu_) {
    digits.push_back(rest % f.rows());
    rest /= f.rows();
  }
  Support out;
  const std::size_t nf = factor_mu_.size();
  auto recurse = [&](auto&& self, std::size_t level, Index base, Index stride,
                     double acc) -> void {
    if (level == nf) {
      out.push_back(base);
      return;
    }
    for (const Neighbor& nb : neighbors_[level][digits[level]]) {
      const double v = acc * nb.mu;
      if (v < eta_) break;
      self(self, level + 1, base + nb.index * stride,
           stride * factor_mu_[level].rows(), v);
    }
  };
  recurse(recurse, 0, 0, 1, 1.0);
  std::sort(out.begin(), out.end());
  return out;
}

CoherenceStructure coherence_bands(const SensingOperator& op, double eta) {
  return CoherenceStructure(eta, checked_factors(op), op.column_norms());
}

EtaSelection select_eta(const SensingOperator& op) {
  if (op.num_coeffs() < 2) {
    throw std::invalid_argument("select_eta: need at least two columns");
  }
  // With unit factor diagonals, max_{j != i} mu(i,j) is the largest
  // off-diagonal entry over the factor rows of i; minimizing over i splits
  // per factor.
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  double attained = kNone;
  for (const RMatrix& mu : checked_factors(op)) {
    if (mu.rows() < 2) continue;
    double factor_min = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < mu.rows(); ++i) {
      double row_max = kNone;
      for (Index j = 0; j < mu.cols(); ++j) {
        if (j != i) row_max = std::max(row_max, mu(i, j));
      }
      factor_min = std::min(factor_min, row_max);
    }
    attained = std::max(attained, factor_min);
  }
  EtaSelection sel;
  if (!(attained > 0.0)) return sel;
  sel.applicable = true;
  if (attained >= 1.0 - 1e-12) {
    sel.clamped = true;
    sel.eta = kEtaClamp;
  } else {
    sel.eta = attained;
  }
  return sel;
}

}  // namespace onebit
