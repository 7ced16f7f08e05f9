#include "onebit/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <thread>

#include "onebit/oracle.hpp"

namespace onebit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t snr_index, std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(master) ^ snr_index) ^ trial);
}

std::uint64_t tuning_seed(std::uint64_t master, std::uint64_t snr_index, std::uint64_t k) {
  constexpr std::uint64_t kTuningStream = 0x46495354415F5455ULL;
  return child_seed(master ^ kTuningStream, snr_index, k);
}

double snr_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

double nmse(const CMatrix& H_hat, const CMatrix& H) {
  if (H_hat.rows() != H.rows() || H_hat.cols() != H.cols()) {
    throw std::invalid_argument("nmse: shape mismatch");
  }
  const double denom = H.squaredNorm();
  if (denom == 0.0) throw std::invalid_argument("nmse: reference channel is zero");
  return (H_hat - H).squaredNorm() / denom;
}

CMatrix reconstruct_channel(const SensingOperator& op, const CVector& x_hat) {
  if (!op.structured()) throw std::invalid_argument("reconstruct_channel: unstructured operator");
  const CMatrix X = unvec(x_hat, op.bins_rx(), op.bins_tx());
  return op.a_rx() * X * op.a_tx().adjoint();
}

std::uint64_t digest(std::initializer_list<const CMatrix*> parts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const CMatrix* m : parts) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(m->data());
    const std::size_t n = static_cast<std::size_t>(m->size()) * sizeof(Complex);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

ExperimentPlan::ExperimentPlan(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  training_ = zc_training(config_.N, config_.T,
                          config_.zc_root.value_or(default_zc_root(config_.T)));
  const OperatorMode mode =
      config_.operator_mode == ModeChoice::Dense ? OperatorMode::Dense : OperatorMode::Fft;
  for (Algorithm a : config_.algorithms) {
    const auto key = std::make_pair(config_.rx_bins_for(a), config_.tx_bins_for(a));
    if (dictionaries_.count(key)) continue;
    SensingOperator op = SensingOperator::build(
        training_.S, dft_dictionary(config_.M, key.first), dft_dictionary(config_.N, key.second),
        mode);
    EtaSelection sel;
    Thresholder bms = Thresholder::plain();
    if (config_.eta) {
      sel = {true, false, *config_.eta};
    } else if (op.num_coeffs() >= 2) {
      sel = select_eta(op);
    }
    // Without an admissible eta band maximum selection is plain thresholding.
    if (sel.applicable) {
      bms = Thresholder::band_maximum(
          std::make_shared<const CoherenceStructure>(coherence_bands(op, sel.eta)));
    }
    dictionaries_.emplace(key, Dictionary{std::move(op), sel, std::move(bms)});
  }
}

const ExperimentPlan::Dictionary& ExperimentPlan::dictionary_for(Algorithm a) const {
  return dictionaries_.at({config_.rx_bins_for(a), config_.tx_bins_for(a)});
}

const SensingOperator& ExperimentPlan::op_for(Algorithm a) const { return dictionary_for(a).op; }

const Thresholder& ExperimentPlan::thresholder_for(Algorithm a) const {
  return uses_bands(a) ? dictionary_for(a).bms : plain_;
}

SolverConfig ExperimentPlan::solver_config_for(Algorithm a) const {
  SolverConfig s;
  s.sparsity = config_.L;
  s.max_outer_iters = config_.max_outer_iters;
  s.inner_tol = config_.inner_tol;
  s.debias = a == Algorithm::BmsGraspDebias ||
             (config_.debias && (a == Algorithm::BmsGrasp || a == Algorithm::Grasp));
  return s;
}

FistaOptions ExperimentPlan::fista_options() const {
  FistaOptions o;
  o.max_iters = config_.fista_max_iters;
  return o;
}

TrialInputs ExperimentPlan::draw_trial(double snr_db, std::uint64_t seed) const {
  TrialInputs in;
  in.seed = seed;
  in.snr_db = snr_db;
  Rng rng(seed);
  if (config_.on_grid) {
    in.channel = draw_channel_on_grid(config_.L, config_.M, config_.N, config_.bins_rx,
                                      config_.bins_tx, rng, &in.true_support);
  } else {
    in.channel = draw_channel(config_.L, config_.M, config_.N, rng);
  }
  in.measurement = synthesize_measurement(in.channel.H, training_.S, snr_linear(snr_db), rng);
  const CMatrix y = in.measurement.y_hat;
  in.input_digest = digest({&y, &in.channel.H, &training_.S});
  return in;
}

AlgorithmOutcome ExperimentPlan::run_algorithm(Algorithm a, const TrialInputs& inputs,
                                               double fista_gamma) const {
  const SensingOperator& op = op_for(a);
  AlgorithmOutcome out;
  out.estimate = {CVector::Zero(op.num_coeffs()), {}};
  try {
    const ObjectiveContext ctx(op, inputs.measurement);
    switch (a) {
      case Algorithm::BmsGrasp:
      case Algorithm::BmsGraspDebias:
      case Algorithm::Grasp: {
        SolverReport r = run_grasp(ctx, solver_config_for(a), thresholder_for(a));
        out.estimate = std::move(r.estimate);
        out.iterations = r.iterations;
        break;
      }
      case Algorithm::BmsGrahtp:
      case Algorithm::Grahtp: {
        SolverReport r = run_grahtp(ctx, solver_config_for(a), thresholder_for(a));
        out.estimate = std::move(r.estimate);
        out.iterations = r.iterations;
        break;
      }
      case Algorithm::Fista: {
        FistaResult r = run_fista(ctx, fista_gamma, fista_options());
        out.estimate = std::move(r.estimate);
        out.iterations = r.iterations;
        break;
      }
      case Algorithm::Oracle: {
        OracleResult r = brute_force_map(ctx, config_.L, solver_config_for(a).restricted());
        out.estimate = std::move(r.estimate);
        out.iterations = static_cast<int>(r.supports_evaluated);
        break;
      }
    }
  } catch (const ConvergenceError& e) {
    out.error = e.what();
    out.estimate.x_hat = e.best();
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

std::vector<double> ExperimentPlan::tune_fista() const {
  std::vector<double> gammas;
  const bool wanted = std::find(config_.algorithms.begin(), config_.algorithms.end(),
                                Algorithm::Fista) != config_.algorithms.end();
  if (!wanted) return gammas;
  const SensingOperator& op = op_for(Algorithm::Fista);
  for (std::size_t s = 0; s < config_.snr_db.size(); ++s) {
    std::vector<ObjectiveContext> family;
    for (int k = 0; k < config_.fista_tune_trials; ++k) {
      const TrialInputs in = draw_trial(config_.snr_db[s], tuning_seed(config_.seed, s, k));
      family.emplace_back(op, in.measurement);
    }
    gammas.push_back(tune_gamma(family, config_.L, fista_options()).gamma);
  }
  return gammas;
}

nlohmann::json ExperimentPlan::describe() const {
  nlohmann::json j;
  j["zc_root"] = training_.root;
  j["zc_shifts"] = training_.shifts;
  j["line_search"] = {{"shrink", 0.5}, {"slope", 0.1}, {"max_steps", 50}};
  j["fista"] = {{"variant", "monotone"}, {"max_iters", config_.fista_max_iters},
                {"tol", fista_options().tol}, {"support_eps", fista_options().support_eps}};
  nlohmann::json dicts = nlohmann::json::array();
  for (const auto& [key, d] : dictionaries_) {
    nlohmann::json e;
    e["B_rx"] = key.first;
    e["B_tx"] = key.second;
    e["rx_fft"] = d.op.rx_uses_fft();
    e["tx_fft"] = d.op.tx_uses_fft();
    e["mode"] = d.op.mode() == OperatorMode::Dense ? "dense" : "fft";
    e["eta_applicable"] = d.selection.applicable;
    e["eta_clamped"] = d.selection.clamped;
    e["eta"] = d.selection.eta;
    dicts.push_back(e);
  }
  j["dictionaries"] = dicts;
  return j;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  const ExperimentPlan plan(config);
  const auto& algos = config.algorithms;
  const std::size_t num_snr = config.snr_db.size();
  const std::size_t num_trials = static_cast<std::size_t>(config.trials);
  const std::size_t num_tasks = num_snr * num_trials;

  ExperimentResult result;
  result.fista_gamma = plan.tune_fista();

  // slots[task][algorithm]
  std::vector<std::vector<TrialRecord>> slots(num_tasks);
  std::vector<std::vector<TrialError>> task_errors(num_tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t task = next++; task < num_tasks; task = next++) {
      const std::size_t s = task / num_trials;
      const int trial = static_cast<int>(task % num_trials);
      const double snr_db = config.snr_db[s];
      const TrialInputs inputs = plan.draw_trial(snr_db, child_seed(config.seed, s, trial));
      for (Algorithm a : algos) {
        const double gamma = a == Algorithm::Fista ? result.fista_gamma[s] : 0.0;
        const auto t0 = std::chrono::steady_clock::now();
        AlgorithmOutcome out = plan.run_algorithm(a, inputs, gamma);
        const auto t1 = std::chrono::steady_clock::now();

        TrialRecord r;
        r.algorithm = std::string(to_string(a));
        r.snr_db = snr_db;
        r.trial = trial;
        r.seed = inputs.seed;
        r.nmse = nmse(reconstruct_channel(plan.op_for(a), out.estimate.x_hat), inputs.channel.H);
        r.iterations = out.iterations;
        r.runtime_ms =
            config.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
        const SensingOperator& op = plan.op_for(a);
        if (config.on_grid && op.bins_rx() == config.bins_rx && op.bins_tx() == config.bins_tx) {
          r.support_hit = out.estimate.support == inputs.true_support;
        }
        r.input_digest = inputs.input_digest;
        if (out.error) task_errors[task].push_back({r.algorithm, snr_db, trial, *out.error});
        slots[task].push_back(std::move(r));
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, num_tasks);
      }
    }
  };

  const int nthreads = std::max(1, std::min<int>(config.threads, static_cast<int>(num_tasks)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t ai = 0; ai < algos.size(); ++ai) {
    for (std::size_t task = 0; task < num_tasks; ++task) {
      result.records.push_back(slots[task][ai]);
    }
  }
  for (auto& errs : task_errors) {
    for (auto& e : errs) result.errors.push_back(std::move(e));
  }
  result.metadata = plan.describe();
  result.metadata["config"] = render_config(config);
  result.metadata["fista_gamma"] = result.fista_gamma;
  result.metadata["snr_db"] = config.snr_db;
  result.metadata["master_seed"] = config.seed;
  result.metadata["num_errors"] = result.errors.size();
  return result;
}

void write_outputs(const ExperimentResult& result, const std::string& out_dir,
                   const std::string& config_source) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "'");
  const fs::path dir(out_dir);
  emit_csv(result.records, (dir / "trials.csv").string());
  emit_curve(result.records, (dir / "curve.csv").string());
  std::string errors = "algorithm,snr_db,trial,message\n";
  for (const TrialError& e : result.errors) {
    std::string msg = e.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    errors += e.algorithm + ',' + format_double(e.snr_db) + ',' + std::to_string(e.trial) + ',' +
              msg + '\n';
  }
  write_file((dir / "errors.csv").string(), errors);
  nlohmann::json meta = result.metadata;
  meta["config_source"] = config_source;
  write_file((dir / "metadata.json").string(), meta.dump(2) + "\n");
}

}  // namespace onebit
