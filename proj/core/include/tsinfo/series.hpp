#ifndef TSINFO_SERIES_HPP
#define TSINFO_SERIES_HPP

#include <string>
#include <vector>

#include "tsinfo/error.hpp"

namespace tsinfo {

/// One real-valued realization x = {x_1, ..., x_T}. Immutable after
/// construction; indices are 1-based throughout the library.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> values, std::string name);

  long length() const noexcept { return static_cast<long>(values_.size()); }
  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// 1-based access, bounds-checked.
  double at(long t) const;

 private:
  std::vector<double> values_;
  std::string name_;
};

/// A T x M table of contemporaneous processes, columns named uniquely.
class Dataset {
 public:
  explicit Dataset(std::vector<TimeSeries> columns);

  long length() const noexcept;
  long num_columns() const noexcept { return static_cast<long>(columns_.size()); }
  const std::vector<TimeSeries>& columns() const noexcept { return columns_; }

  const TimeSeries& column(const std::string& name) const;
  bool has_column(const std::string& name) const noexcept;

 private:
  std::vector<TimeSeries> columns_;
};

/// Finite-alphabet symbol sequence; every symbol lies in [0, alphabet).
class DiscreteSeries {
 public:
  DiscreteSeries(std::vector<int> symbols, int alphabet, std::string name);

  /// Alphabet inferred as max(symbol) + 1.
  static DiscreteSeries infer_alphabet(std::vector<int> symbols, std::string name);

  long length() const noexcept { return static_cast<long>(symbols_.size()); }
  int alphabet() const noexcept { return alphabet_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<int>& symbols() const noexcept { return symbols_; }

  /// 1-based access, bounds-checked.
  int at(long t) const;

 private:
  std::vector<int> symbols_;
  int alphabet_;
  std::string name_;
};

/// Rescale to sample mean 0 and sample standard deviation 1 (N-1 divisor).
/// Throws ZeroVariance when all values are equal.
TimeSeries standardize(const TimeSeries& series);

/// Sample standard deviation with the N-1 divisor; 0 for N < 2.
double sample_sd(const std::vector<double>& values);

}  // namespace tsinfo

#endif  // TSINFO_SERIES_HPP
