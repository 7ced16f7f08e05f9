#pragma once

// Experiment configuration: a flat "key = value" text format, one key per
// line, '#' starts a comment. Lists are comma separated.
//
//   M, N, T, L                  array sizes, training length, paths
//   B_rx, B_tx                  dictionary sizes (B_rx >= M, B_tx >= N)
//   B_rx.<algo>, B_tx.<algo>    per-algorithm dictionary overrides
//   snr_db                      SNR grid in dB
//   trials, seed                Monte-Carlo trials per SNR, master seed
//   algorithms                  bmsgrasp, bmsgrasp-debias, bmsgrahtp, grasp,
//                               grahtp, fista, oracle
//   eta                         auto | value in (0,1)
//   operator_mode               auto | dense | fft
//   max_outer_iters, inner_tol  solver controls
//   debias                      also debias bmsgrasp and grasp
//
// Extensions: zc_root, on_grid, fista_tune_trials, fista_max_iters,
// threads, timing.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/types.hpp"

namespace onebit {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Algorithm { BmsGrasp, BmsGraspDebias, BmsGrahtp, Grasp, Grahtp, Fista, Oracle };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
bool uses_bands(Algorithm a);

enum class ModeChoice { Auto, Dense, Fft };

struct ExperimentConfig {
  Index M = 16;
  Index N = 16;
  Index T = 20;
  Index L = 2;
  Index bins_rx = 64;
  Index bins_tx = 64;
  std::map<Algorithm, Index> bins_rx_override;
  std::map<Algorithm, Index> bins_tx_override;
  std::vector<double> snr_db{-10, 0, 10, 20, 30};
  int trials = 10;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::BmsGraspDebias, Algorithm::Grasp};
  std::optional<double> eta;  // empty = auto
  ModeChoice operator_mode = ModeChoice::Auto;
  int max_outer_iters = 50;
  double inner_tol = 1e-8;
  bool debias = false;

  std::optional<Index> zc_root;
  bool on_grid = false;
  int fista_tune_trials = 10;
  int fista_max_iters = 500;
  int threads = 1;
  bool timing = true;

  Index rx_bins_for(Algorithm a) const;
  Index tx_bins_for(Algorithm a) const;

  /// Throws ConfigError on any violated constraint.
  void validate() const;
};

/// Parses and validates. Unknown keys and malformed values throw ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical key = value rendering (parse_config round-trips it).
std::string render_config(const ExperimentConfig& config);

/// Parses a comma-separated list of doubles / algorithm names.
std::vector<double> parse_double_list(std::string_view text);
std::vector<Algorithm> parse_algorithm_list(std::string_view text);

}  // namespace onebit
