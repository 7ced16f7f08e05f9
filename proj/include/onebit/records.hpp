#pragma once

// Per-trial CSV records and the aggregated NMSE-vs-SNR curve file.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace onebit {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialRecord {
  std::string algorithm;
  double snr_db = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double nmse = 0.0;
  int iterations = 0;
  double runtime_ms = 0.0;
  std::optional<bool> support_hit;  // on-grid scenarios only

  // Not serialized: digest of (y_hat, H, S) the algorithm consumed.
  std::uint64_t input_digest = 0;

  bool operator==(const TrialRecord& o) const {
    return algorithm == o.algorithm && snr_db == o.snr_db && trial == o.trial &&
           seed == o.seed && nmse == o.nmse && iterations == o.iterations &&
           runtime_ms == o.runtime_ms && support_hit == o.support_hit;
  }
};

inline constexpr const char* kCsvHeader =
    "algorithm,snr_db,trial,seed,nmse,iterations,runtime_ms,support_hit";

/// Doubles use the shortest representation that parses back exactly.
std::string to_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> parse_csv(const std::string& text);

struct CurvePoint {
  std::string algorithm;
  double snr_db = 0.0;
  std::size_t count = 0;
  double mean_db = 0.0;    // 10 log10(mean NMSE)
  double median_db = 0.0;  // 10 log10(median NMSE)
  double p10_db = 0.0;
  double p90_db = 0.0;
};

inline constexpr const char* kCurveHeader = "algorithm,snr_db,count,mean_db,median_db,p10_db,p90_db";

/// Percentile with linear interpolation between order statistics.
double percentile(std::vector<double> values, double q);
double to_db(double linear);

/// One point per (algorithm, snr) in first-appearance order.
std::vector<CurvePoint> aggregate_curve(const std::vector<TrialRecord>& records);
std::string to_curve_csv(const std::vector<CurvePoint>& curve);
std::vector<CurvePoint> parse_curve_csv(const std::string& text);

/// Both throw std::invalid_argument on empty input and IoError when the
/// file cannot be written.
void emit_csv(const std::vector<TrialRecord>& records, const std::string& path);
void emit_curve(const std::vector<TrialRecord>& records, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);
std::string format_double(double v);

}  // namespace onebit
