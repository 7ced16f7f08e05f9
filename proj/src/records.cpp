#include "onebit/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace onebit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
T parse_field(const std::string& s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("csv: malformed field '" + s + "'");
  }
  return v;
}

std::vector<std::string> data_lines(const std::string& text, const char* header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::invalid_argument("csv: missing or unexpected header");
  }
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

std::string to_csv(const std::vector<TrialRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const TrialRecord& r : records) {
    out += r.algorithm + ',' + format_double(r.snr_db) + ',' + std::to_string(r.trial) + ',' +
           std::to_string(r.seed) + ',' + format_double(r.nmse) + ',' +
           std::to_string(r.iterations) + ',' + format_double(r.runtime_ms) + ',' +
           (r.support_hit ? (*r.support_hit ? "1" : "0") : "") + '\n';
  }
  return out;
}

std::vector<TrialRecord> parse_csv(const std::string& text) {
  std::vector<TrialRecord> records;
  for (const std::string& line : data_lines(text, kCsvHeader)) {
    const auto f = split_fields(line);
    if (f.size() != 8) throw std::invalid_argument("csv: expected 8 fields");
    TrialRecord r;
    r.algorithm = f[0];
    r.snr_db = parse_field<double>(f[1]);
    r.trial = parse_field<int>(f[2]);
    r.seed = parse_field<std::uint64_t>(f[3]);
    r.nmse = parse_field<double>(f[4]);
    r.iterations = parse_field<int>(f[5]);
    r.runtime_ms = parse_field<double>(f[6]);
    if (f[7] == "1") r.support_hit = true;
    else if (f[7] == "0") r.support_hit = false;
    else if (!f[7].empty()) throw std::invalid_argument("csv: bad support_hit");
    records.push_back(std::move(r));
  }
  return records;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<CurvePoint> aggregate_curve(const std::vector<TrialRecord>& records) {
  std::vector<std::pair<std::string, double>> keys;
  std::map<std::pair<std::string, double>, std::vector<double>> groups;
  for (const TrialRecord& r : records) {
    auto key = std::make_pair(r.algorithm, r.snr_db);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(r.nmse);
  }
  std::vector<CurvePoint> curve;
  for (const auto& key : keys) {
    const std::vector<double>& v = groups[key];
    double sum = 0.0;
    for (double x : v) sum += x;
    CurvePoint p;
    p.algorithm = key.first;
    p.snr_db = key.second;
    p.count = v.size();
    p.mean_db = to_db(sum / static_cast<double>(v.size()));
    p.median_db = to_db(percentile(v, 0.5));
    p.p10_db = to_db(percentile(v, 0.1));
    p.p90_db = to_db(percentile(v, 0.9));
    curve.push_back(std::move(p));
  }
  return curve;
}

std::string to_curve_csv(const std::vector<CurvePoint>& curve) {
  std::string out = kCurveHeader;
  out += '\n';
  for (const CurvePoint& p : curve) {
    out += p.algorithm + ',' + format_double(p.snr_db) + ',' + std::to_string(p.count) + ',' +
           format_double(p.mean_db) + ',' + format_double(p.median_db) + ',' +
           format_double(p.p10_db) + ',' + format_double(p.p90_db) + '\n';
  }
  return out;
}

std::vector<CurvePoint> parse_curve_csv(const std::string& text) {
  std::vector<CurvePoint> curve;
  for (const std::string& line : data_lines(text, kCurveHeader)) {
    const auto f = split_fields(line);
    if (f.size() != 7) throw std::invalid_argument("curve csv: expected 7 fields");
    CurvePoint p;
    p.algorithm = f[0];
    p.snr_db = parse_field<double>(f[1]);
    p.count = parse_field<std::size_t>(f[2]);
    p.mean_db = parse_field<double>(f[3]);
    p.median_db = parse_field<double>(f[4]);
    p.p10_db = parse_field<double>(f[5]);
    p.p90_db = parse_field<double>(f[6]);
    curve.push_back(std::move(p));
  }
  return curve;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out.flush()) throw IoError("write failed for '" + path + "'");
}

void emit_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  write_file(path, to_csv(records));
}

void emit_curve(const std::vector<TrialRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit_curve: no records");
  write_file(path, to_curve_csv(aggregate_curve(records)));
}

}  // namespace onebit
