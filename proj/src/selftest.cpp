#include "onebit/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "onebit/coherence.hpp"
#include "onebit/model.hpp"
#include "onebit/objective.hpp"
#include "onebit/pursuit.hpp"

namespace onebit {

namespace {

CVector random_vector(Index n, Rng& rng) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = complex_normal(rng);
  return v;
}

struct Instance {
  SensingOperator fft;
  SensingOperator dense;
  QuantizedMeasurement q;
};

Instance make_instance(Index M, Index N, Index T, Index Brx, Index Btx, double rho, Rng& rng) {
  const TrainingSequence ts = zc_training(N, T, default_zc_root(T));
  const CMatrix arx = dft_dictionary(M, Brx);
  const CMatrix atx = dft_dictionary(N, Btx);
  const ChannelRealization ch = draw_channel(2, M, N, rng);
  return {SensingOperator::build(ts.S, arx, atx, OperatorMode::Fft),
          SensingOperator::build(ts.S, arx, atx, OperatorMode::Dense),
          synthesize_measurement(ch.H, ts.S, rho, rng)};
}

}  // namespace

std::vector<SelftestResult> run_selftest(unsigned long long seed) {
  std::vector<SelftestResult> out;
  Rng rng(seed);
  auto check = [&](const std::string& name, const std::function<std::string()>& body) {
    SelftestResult r{name, false, {}};
    try {
      r.detail = body();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  };

  const Instance inst = make_instance(6, 4, 8, 12, 8, 10.0, rng);

  check("operator fft matches dense", [&]() -> std::string {
    for (int k = 0; k < 10; ++k) {
      const CVector x = random_vector(inst.fft.num_coeffs(), rng);
      const CVector c = random_vector(inst.fft.measurement_size(), rng);
      const double e1 = (inst.fft.apply(x) - inst.dense.apply(x)).norm() / inst.dense.apply(x).norm();
      const double e2 = (inst.fft.apply_adjoint(c) - inst.dense.apply_adjoint(c)).norm() /
                        inst.dense.apply_adjoint(c).norm();
      if (e1 > 1e-10 || e2 > 1e-10) return "relative error above 1e-10";
    }
    return {};
  });

  check("adjoint identity", [&]() -> std::string {
    for (int k = 0; k < 10; ++k) {
      const CVector x = random_vector(inst.fft.num_coeffs(), rng);
      const CVector c = random_vector(inst.fft.measurement_size(), rng);
      const Complex lhs = inst.fft.apply(x).dot(c);
      const Complex rhs = x.dot(inst.fft.apply_adjoint(c));
      if (std::abs(lhs - rhs) > 1e-10 * std::abs(lhs)) return "inner products differ";
    }
    return {};
  });

  check("gradient matches finite differences", [&]() -> std::string {
    const ObjectiveContext ctx(inst.fft, inst.q);
    const CVector x = 0.3 * random_vector(inst.fft.num_coeffs(), rng);
    const RVector g = real_form(objective_gradient(ctx, x));
    const RVector xr = real_form(x);
    const double h = 1e-5;
    double worst = 0.0;
    for (Index i = 0; i < xr.size(); i += 7) {
      RVector p = xr, m = xr;
      p[i] += h;
      m[i] -= h;
      const double fd = (objective_value(ctx, complex_form(p)) -
                         objective_value(ctx, complex_form(m))) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
    }
    if (worst > 1e-5) return "max relative error " + std::to_string(worst);
    return {};
  });

  check("objective midpoint concavity", [&]() -> std::string {
    const ObjectiveContext ctx(inst.fft, inst.q);
    for (int k = 0; k < 10; ++k) {
      const CVector x = random_vector(inst.fft.num_coeffs(), rng);
      const CVector z = random_vector(inst.fft.num_coeffs(), rng);
      const double mid = objective_value(ctx, 0.5 * (x + z));
      const double avg = 0.5 * (objective_value(ctx, x) + objective_value(ctx, z));
      if (mid < avg - 1e-9) return "concavity violated";
    }
    return {};
  });

  check("coherence bands symmetric", [&]() -> std::string {
    const EtaSelection sel = select_eta(inst.fft);
    if (!sel.applicable) return "eta not applicable on an oversampled dictionary";
    const CoherenceStructure bands = coherence_bands(inst.fft, sel.eta);
    for (Index i = 0; i < bands.size(); ++i) {
      const Support bi = bands.band(i);
      if (bi.size() < 2) return "band with fewer than two members at selected eta";
      for (Index j : bi) {
        const Support bj = bands.band(j);
        if (!std::binary_search(bj.begin(), bj.end(), i)) return "asymmetric band";
      }
    }
    return {};
  });

  check("quantizer properties", [&]() -> std::string {
    const CVector y = random_vector(50, rng);
    if (quantize(quantize(y)) != quantize(y)) return "not idempotent";
    if (quantize(CVector(y.conjugate())) != CVector(quantize(y).conjugate())) return "conjugation";
    if (quantize(CVector(3.7 * y)) != quantize(y)) return "not scale invariant";
    return {};
  });

  check("solver sparsity budgets", [&]() -> std::string {
    const ObjectiveContext ctx(inst.fft, inst.q);
    SolverConfig cfg;
    cfg.sparsity = 2;
    const auto bands = std::make_shared<const CoherenceStructure>(
        coherence_bands(inst.fft, select_eta(inst.fft).eta));
    const SolverReport g = run_grasp(ctx, cfg, Thresholder::band_maximum(bands));
    const SolverReport h = run_grahtp(ctx, cfg, Thresholder::band_maximum(bands));
    if (g.max_restricted_size > 3 * cfg.sparsity) return "GraSP exceeded 3L";
    if (h.max_restricted_size > cfg.sparsity) return "GraHTP exceeded L";
    if (static_cast<Index>(g.estimate.support.size()) > cfg.sparsity) return "estimate too dense";
    return {};
  });

  return out;
}

}  // namespace onebit
