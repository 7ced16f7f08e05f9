// Command line front end: run sweeps, self-test, and coherence diagnostics.

#include <iostream>

#include <CLI11.hpp>

#include "onebit/coherence.hpp"
#include "onebit/experiment.hpp"
#include "onebit/selftest.hpp"

namespace {

constexpr int kUsageError = 2;

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::optional<std::uint64_t>& seed, const std::optional<std::string>& algos,
            const std::optional<std::string>& snr, const std::optional<int>& trials,
            const std::optional<int>& threads, bool no_timing, bool quiet) {
  using namespace onebit;
  ExperimentConfig cfg;
  std::string source;
  try {
    source = read_file(config_path);
    cfg = parse_config(source);
    if (seed) cfg.seed = *seed;
    if (algos) cfg.algorithms = parse_algorithm_list(*algos);
    if (snr) cfg.snr_db = parse_double_list(*snr);
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;
    if (no_timing) cfg.timing = false;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }

  ProgressFn progress;
  if (!quiet) {
    progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % 50 == 0) {
        std::cerr << "\r" << done << "/" << total << " trials" << std::flush;
        if (done == total) std::cerr << "\n";
      }
    };
  }
  const ExperimentResult result = run_experiment(cfg, progress);
  write_outputs(result, out_dir, source);
  if (!quiet) {
    std::cout << to_curve_csv(aggregate_curve(result.records));
    if (!result.errors.empty()) {
      std::cerr << result.errors.size() << " solver error(s), see errors.csv\n";
    }
  }
  return 0;
}

int cmd_selftest() {
  bool ok = true;
  for (const auto& r : onebit::run_selftest()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) std::cout << ": " << r.detail;
    std::cout << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

int cmd_gram(const std::string& config_path) {
  using namespace onebit;
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  const ExperimentPlan plan(cfg);
  std::cout << "zc_root = " << plan.training().root << "\n";
  std::set<std::pair<Index, Index>> seen;
  for (Algorithm a : cfg.algorithms) {
    const SensingOperator& op = plan.op_for(a);
    if (!seen.insert({op.bins_rx(), op.bins_tx()}).second) continue;
    std::cout << "\n[B_rx=" << op.bins_rx() << " B_tx=" << op.bins_tx()
              << " B=" << op.num_coeffs() << "]\n";
    std::cout << "fft: rx=" << op.rx_uses_fft() << " tx=" << op.tx_uses_fft() << "\n";
    std::cout << "column norm range: [" << op.column_norms().minCoeff() << ", "
              << op.column_norms().maxCoeff() << "]\n";
    const EtaSelection sel = select_eta(op);
    if (!sel.applicable) {
      std::cout << "eta: not applicable (columns mutually orthogonal)\n";
      continue;
    }
    std::cout << "eta = " << format_double(sel.eta) << (sel.clamped ? " (clamped)" : "") << "\n";
    const CoherenceStructure bands = coherence_bands(op, sel.eta);
    std::size_t lo = SIZE_MAX, hi = 0, total = 0;
    for (Index i = 0; i < bands.size(); ++i) {
      const std::size_t n = bands.band(i).size();
      lo = std::min(lo, n);
      hi = std::max(hi, n);
      total += n;
    }
    std::cout << "band size min/mean/max: " << lo << " / "
              << static_cast<double>(total) / static_cast<double>(bands.size()) << " / " << hi
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit mmWave channel estimation simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algos, snr;
  std::optional<int> trials, threads;
  bool no_timing = false, quiet = false;

  auto* run = app.add_subcommand("run", "Run a Monte-Carlo NMSE sweep");
  run->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--algos", algos, "Override algorithms (comma separated)");
  run->add_option("--snr", snr, "Override the SNR grid in dB (comma separated)");
  run->add_option("--trials", trials, "Override trials per SNR");
  run->add_option("--threads", threads, "Worker threads");
  run->add_flag("--no-timing", no_timing, "Write runtime_ms as 0 for reproducible CSVs");
  run->add_flag("--quiet", quiet, "No progress or summary output");

  app.add_subcommand("selftest", "Run the built-in invariant checks");

  auto* gram = app.add_subcommand("gram", "Print coherence and eta diagnostics for a config");
  gram->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) {
      return cmd_run(config_path, out_dir, seed, algos, snr, trials, threads, no_timing, quiet);
    }
    if (app.got_subcommand("selftest")) return cmd_selftest();
    if (*gram) return cmd_gram(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
