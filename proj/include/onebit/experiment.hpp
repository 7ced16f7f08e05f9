#pragma once

// Seeded Monte-Carlo NMSE-vs-SNR sweep. For every (snr, trial) one channel,
// one noise draw and one quantized measurement are generated and every
// configured estimator runs on that identical measurement.

#include <functional>
#include <map>

#include <json.hpp>

#include "onebit/config.hpp"
#include "onebit/fista.hpp"
#include "onebit/model.hpp"
#include "onebit/records.hpp"

namespace onebit {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of trial `trial` at SNR grid index `snr_index`. Independent of the
/// algorithm list, so adding estimators never perturbs existing streams.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t snr_index, std::uint64_t trial);

/// Seed of the k-th FISTA calibration draw at `snr_index`.
std::uint64_t tuning_seed(std::uint64_t master, std::uint64_t snr_index, std::uint64_t k);

double snr_linear(double snr_db);

/// |H_hat - H|_F^2 / |H|_F^2; throws std::invalid_argument when H = 0.
double nmse(const CMatrix& H_hat, const CMatrix& H);

/// A_rx X A_tx^H with X = unvec(x_hat).
CMatrix reconstruct_channel(const SensingOperator& op, const CVector& x_hat);

/// FNV-1a digest over the raw bytes of the given matrices.
std::uint64_t digest(std::initializer_list<const CMatrix*> parts);

struct TrialInputs {
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  ChannelRealization channel;
  QuantizedMeasurement measurement;
  Support true_support;  // on-grid scenarios only
  std::uint64_t input_digest = 0;
};

struct AlgorithmOutcome {
  SparseEstimate estimate;
  int iterations = 0;
  std::optional<std::string> error;
};

struct TrialError {
  std::string algorithm;
  double snr_db = 0.0;
  int trial = 0;
  std::string message;
};

/// Operators, coherence bands and thresholders for one configuration,
/// shared read-only by all trials.
class ExperimentPlan {
 public:
  explicit ExperimentPlan(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const TrainingSequence& training() const { return training_; }
  const SensingOperator& op_for(Algorithm a) const;
  const Thresholder& thresholder_for(Algorithm a) const;
  SolverConfig solver_config_for(Algorithm a) const;
  FistaOptions fista_options() const;

  TrialInputs draw_trial(double snr_db, std::uint64_t seed) const;

  /// Never throws for solver failures: they are reported in `error`, with
  /// the best available iterate (or zero) as the estimate.
  AlgorithmOutcome run_algorithm(Algorithm a, const TrialInputs& inputs,
                                 double fista_gamma) const;

  /// One gamma per SNR grid point (empty when FISTA is not configured).
  std::vector<double> tune_fista() const;

  nlohmann::json describe() const;

 private:
  struct Dictionary {
    SensingOperator op;
    EtaSelection selection;
    Thresholder bms;
  };
  const Dictionary& dictionary_for(Algorithm a) const;

  ExperimentConfig config_;
  TrainingSequence training_;
  std::map<std::pair<Index, Index>, Dictionary> dictionaries_;
  Thresholder plain_ = Thresholder::plain();
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // ordered by (algorithm, snr, trial)
  std::vector<TrialError> errors;
  std::vector<double> fista_gamma;
  nlohmann::json metadata;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

/// trials.csv, curve.csv, errors.csv and metadata.json under `out_dir`
/// (created if missing). `config_source` is copied verbatim into metadata.
void write_outputs(const ExperimentResult& result, const std::string& out_dir,
                   const std::string& config_source);

}  // namespace onebit
