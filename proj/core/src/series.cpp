#include "tsinfo/series.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace tsinfo {

TimeSeries::TimeSeries(std::vector<double> values, std::string name)
    : values_(std::move(values)), name_(std::move(name)) {
  if (values_.size() < 2) {
    throw Error(Errc::InvalidArgument,
                "time series '" + name_ + "' needs at least 2 samples");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(Errc::InvalidArgument,
                  "non-finite value in series '" + name_ + "' at index " +
                      std::to_string(i + 1));
    }
  }
}

double TimeSeries::at(long t) const {
  if (t < 1 || t > length()) {
    throw Error(Errc::OutOfRange, "index " + std::to_string(t) +
                                      " outside [1, " + std::to_string(length()) +
                                      "] in series '" + name_ + "'");
  }
  return values_[static_cast<std::size_t>(t - 1)];
}

Dataset::Dataset(std::vector<TimeSeries> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) {
    throw Error(Errc::InvalidArgument, "dataset needs at least one column");
  }
  const long t = columns_.front().length();
  std::unordered_set<std::string> seen;
  for (const auto& col : columns_) {
    if (col.length() != t) {
      throw Error(Errc::InvalidArgument,
                  "column '" + col.name() + "' has length " +
                      std::to_string(col.length()) + ", expected " +
                      std::to_string(t));
    }
    if (!seen.insert(col.name()).second) {
      throw Error(Errc::DuplicateHeader, "duplicate column name '" + col.name() + "'");
    }
  }
}

long Dataset::length() const noexcept { return columns_.front().length(); }

const TimeSeries& Dataset::column(const std::string& name) const {
  for (const auto& col : columns_) {
    if (col.name() == name) return col;
  }
  throw Error(Errc::InvalidArgument, "no column named '" + name + "'");
}

bool Dataset::has_column(const std::string& name) const noexcept {
  for (const auto& col : columns_) {
    if (col.name() == name) return true;
  }
  return false;
}

DiscreteSeries::DiscreteSeries(std::vector<int> symbols, int alphabet, std::string name)
    : symbols_(std::move(symbols)), alphabet_(alphabet), name_(std::move(name)) {
  if (symbols_.size() < 2) {
    throw Error(Errc::InvalidArgument,
                "discrete series '" + name_ + "' needs at least 2 samples");
  }
  if (alphabet_ < 1) {
    throw Error(Errc::InvalidArgument, "alphabet size must be positive");
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] < 0 || symbols_[i] >= alphabet_) {
      throw Error(Errc::OutOfRange,
                  "symbol " + std::to_string(symbols_[i]) + " at index " +
                      std::to_string(i + 1) + " outside alphabet [0, " +
                      std::to_string(alphabet_) + ") in '" + name_ + "'");
    }
  }
}

DiscreteSeries DiscreteSeries::infer_alphabet(std::vector<int> symbols, std::string name) {
  int max_sym = 0;
  for (int s : symbols) max_sym = std::max(max_sym, s);
  return DiscreteSeries(std::move(symbols), max_sym + 1, std::move(name));
}

int DiscreteSeries::at(long t) const {
  if (t < 1 || t > length()) {
    throw Error(Errc::OutOfRange, "index " + std::to_string(t) +
                                      " outside [1, " + std::to_string(length()) + "]");
  }
  return symbols_[static_cast<std::size_t>(t - 1)];
}

double sample_sd(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

TimeSeries standardize(const TimeSeries& series) {
  const auto& v = series.values();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  if (sd <= 0.0) {
    throw Error(Errc::ZeroVariance, "series '" + series.name() + "' is constant");
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
  return TimeSeries(std::move(out), series.name());
}

}  // namespace tsinfo
