// Experiment plumbing: key=value configuration, worker pool, result sinks and
// least-squares power-law fits.
#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace hfca {

// Plain-text configuration: one `key = value` per line, `#` starts a comment.
// Keys mirror the command-line flags of the hfca tool.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  // Comma-separated list of doubles.
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<long long> get_ints(const std::string& key, const std::vector<long long>& fallback) const;

  // Canonical text (sorted keys) and its FNV-1a hash; identical configs hash identically.
  std::string canonical() const;
  std::uint64_t hash() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string hex64(std::uint64_t v);

// Default worker count: $HFCA_WORKERS if set, else the hardware concurrency.
int default_workers();

// Runs fn(i) for i in [0, n) on up to `workers` threads, handing out indices
// dynamically. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// Append-only CSV writer; the header is written once, rows are serialized by a mutex.
class CsvSink {
 public:
  static constexpr int kSchemaVersion = 1;
  CsvSink(const std::string& path, std::vector<std::string> columns);
  // Writes to an in-memory buffer (for tests and stdout printing).
  explicit CsvSink(std::vector<std::string> columns);
  void row(const std::vector<std::string>& cells);
  std::string text() const;
  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
  std::unique_ptr<std::ofstream> file_;
  std::string buffer_;
  mutable std::mutex mu_;
};

std::string fmt_double(double v);

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  int points = 0;
};

// Least squares of log(y) against log(x).
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// p at which the curves a(p) and b(p) cross, by linear interpolation of a-b on
// the shared grid; returns NaN when a-b does not change sign.
double crossing_point(const std::vector<double>& p, const std::vector<double>& a,
                      const std::vector<double>& b);

}  // namespace hfca
