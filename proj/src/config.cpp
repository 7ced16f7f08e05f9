#include "onebit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace onebit {

namespace {

constexpr std::pair<Algorithm, std::string_view> kAlgorithmNames[] = {
    {Algorithm::BmsGrasp, "bmsgrasp"},   {Algorithm::BmsGraspDebias, "bmsgrasp-debias"},
    {Algorithm::BmsGrahtp, "bmsgrahtp"}, {Algorithm::Grasp, "grasp"},
    {Algorithm::Grahtp, "grahtp"},       {Algorithm::Fista, "fista"},
    {Algorithm::Oracle, "oracle"},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw ConfigError("config: bad value for '" + std::string(key) + "': '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: bad boolean for '" + std::string(key) + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(Algorithm a) {
  for (const auto& [alg, name] : kAlgorithmNames) {
    if (alg == a) return name;
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& [alg, n] : kAlgorithmNames) {
    if (n == name) return alg;
  }
  throw ConfigError("config: unknown algorithm '" + std::string(name) + "'");
}

bool uses_bands(Algorithm a) {
  return a == Algorithm::BmsGrasp || a == Algorithm::BmsGraspDebias ||
         a == Algorithm::BmsGrahtp;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(parse_number<double>("list", item));
  return out;
}

std::vector<Algorithm> parse_algorithm_list(std::string_view text) {
  std::vector<Algorithm> out;
  for (auto item : split(text, ',')) out.push_back(parse_algorithm(item));
  return out;
}

Index ExperimentConfig::rx_bins_for(Algorithm a) const {
  const auto it = bins_rx_override.find(a);
  return it == bins_rx_override.end() ? bins_rx : it->second;
}

Index ExperimentConfig::tx_bins_for(Algorithm a) const {
  const auto it = bins_tx_override.find(a);
  return it == bins_tx_override.end() ? bins_tx : it->second;
}

void ExperimentConfig::validate() const {
  if (M < 1 || N < 1 || T < 1 || L < 1) throw ConfigError("config: M, N, T, L must be positive");
  if (N > T) throw ConfigError("config: N must not exceed T");
  if (trials < 1) throw ConfigError("config: trials must be positive");
  if (snr_db.empty()) throw ConfigError("config: snr_db must not be empty");
  if (algorithms.empty()) throw ConfigError("config: algorithms must not be empty");
  if (std::set<Algorithm>(algorithms.begin(), algorithms.end()).size() != algorithms.size()) {
    throw ConfigError("config: duplicated algorithm");
  }
  for (Algorithm a : algorithms) {
    if (rx_bins_for(a) < M || tx_bins_for(a) < N) {
      throw ConfigError("config: need B_rx >= M and B_tx >= N for " + std::string(to_string(a)));
    }
  }
  if (eta && !(*eta > 0.0 && *eta < 1.0)) throw ConfigError("config: eta must lie in (0, 1)");
  if (max_outer_iters < 1) throw ConfigError("config: max_outer_iters must be positive");
  if (!(inner_tol > 0.0)) throw ConfigError("config: inner_tol must be positive");
  if (fista_tune_trials < 1 || fista_max_iters < 1) {
    throw ConfigError("config: FISTA settings must be positive");
  }
  if (threads < 1) throw ConfigError("config: threads must be positive");
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw ConfigError("config: non-finite SNR");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view v = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("config: duplicated key '" + key + "'");

    if (key == "M") c.M = parse_number<Index>(key, v);
    else if (key == "N") c.N = parse_number<Index>(key, v);
    else if (key == "T") c.T = parse_number<Index>(key, v);
    else if (key == "L") c.L = parse_number<Index>(key, v);
    else if (key == "B_rx") c.bins_rx = parse_number<Index>(key, v);
    else if (key == "B_tx") c.bins_tx = parse_number<Index>(key, v);
    else if (key.starts_with("B_rx.")) c.bins_rx_override[parse_algorithm(key.substr(5))] = parse_number<Index>(key, v);
    else if (key.starts_with("B_tx.")) c.bins_tx_override[parse_algorithm(key.substr(5))] = parse_number<Index>(key, v);
    else if (key == "snr_db") c.snr_db = parse_double_list(v);
    else if (key == "trials") c.trials = parse_number<int>(key, v);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "algorithms") c.algorithms = parse_algorithm_list(v);
    else if (key == "eta") c.eta = (v == "auto") ? std::nullopt : std::optional(parse_number<double>(key, v));
    else if (key == "operator_mode") {
      if (v == "auto") c.operator_mode = ModeChoice::Auto;
      else if (v == "dense") c.operator_mode = ModeChoice::Dense;
      else if (v == "fft") c.operator_mode = ModeChoice::Fft;
      else throw ConfigError("config: operator_mode must be auto, dense or fft");
    }
    else if (key == "max_outer_iters") c.max_outer_iters = parse_number<int>(key, v);
    else if (key == "inner_tol") c.inner_tol = parse_number<double>(key, v);
    else if (key == "debias") c.debias = parse_bool(key, v);
    else if (key == "zc_root") c.zc_root = parse_number<Index>(key, v);
    else if (key == "on_grid") c.on_grid = parse_bool(key, v);
    else if (key == "fista_tune_trials") c.fista_tune_trials = parse_number<int>(key, v);
    else if (key == "fista_max_iters") c.fista_max_iters = parse_number<int>(key, v);
    else if (key == "threads") c.threads = parse_number<int>(key, v);
    else if (key == "timing") c.timing = parse_bool(key, v);
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto list = [](const auto& items, auto fmt) {
    std::string s;
    for (const auto& it : items) s += (s.empty() ? "" : ",") + fmt(it);
    return s;
  };
  out << "M = " << c.M << "\nN = " << c.N << "\nT = " << c.T << "\nL = " << c.L << "\n";
  out << "B_rx = " << c.bins_rx << "\nB_tx = " << c.bins_tx << "\n";
  for (const auto& [a, b] : c.bins_rx_override) out << "B_rx." << to_string(a) << " = " << b << "\n";
  for (const auto& [a, b] : c.bins_tx_override) out << "B_tx." << to_string(a) << " = " << b << "\n";
  out << "snr_db = " << list(c.snr_db, format_double) << "\n";
  out << "trials = " << c.trials << "\nseed = " << c.seed << "\n";
  out << "algorithms = "
      << list(c.algorithms, [](Algorithm a) { return std::string(to_string(a)); }) << "\n";
  out << "eta = " << (c.eta ? format_double(*c.eta) : std::string("auto")) << "\n";
  out << "operator_mode = "
      << (c.operator_mode == ModeChoice::Auto ? "auto"
          : c.operator_mode == ModeChoice::Dense ? "dense" : "fft") << "\n";
  out << "max_outer_iters = " << c.max_outer_iters << "\n";
  out << "inner_tol = " << format_double(c.inner_tol) << "\n";
  out << "debias = " << (c.debias ? "true" : "false") << "\n";
  if (c.zc_root) out << "zc_root = " << *c.zc_root << "\n";
  out << "on_grid = " << (c.on_grid ? "true" : "false") << "\n";
  out << "fista_tune_trials = " << c.fista_tune_trials << "\n";
  out << "fista_max_iters = " << c.fista_max_iters << "\n";
  out << "threads = " << c.threads << "\n";
  out << "timing = " << (c.timing ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace onebit
