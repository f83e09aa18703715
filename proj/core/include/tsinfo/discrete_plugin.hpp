#ifndef TSINFO_DISCRETE_PLUGIN_HPP
#define TSINFO_DISCRETE_PLUGIN_HPP

#include <map>
#include <vector>

#include "tsinfo/measures.hpp"
#include "tsinfo/series.hpp"

namespace tsinfo {

/// Joint probability mass function over the columns of an aligned block
/// matrix. Entries are non-negative and sum to 1 within 1e-12.
class DiscretePmf {
 public:
  DiscretePmf(std::vector<int> alphabet_sizes,
              std::map<std::vector<int>, double> table);

  /// Plug-in Shannon entropy (natural log) of a column subset, obtained by
  /// marginalizing the joint table. The empty subset has entropy 0.
  double entropy(const std::vector<int>& columns) const;

  const std::vector<int>& alphabet_sizes() const noexcept { return alphabet_sizes_; }
  const std::map<std::vector<int>, double>& table() const noexcept { return table_; }

 private:
  std::vector<int> alphabet_sizes_;
  std::map<std::vector<int>, double> table_;
};

/// Maximum-likelihood pmf of the aligned block tuples of the given
/// sequences, pooling exactly the samples the continuous path would.
DiscretePmf empirical_pmf(const std::vector<DiscreteSeries>& sequences,
                          const std::vector<BlockSpec>& blocks);

/// Exact plug-in evaluation of a measure on finite-alphabet sequences: the
/// measure's entropy decomposition applied to one shared empirical pmf, so
/// all algebraic identities hold to rounding. Granger causality is
/// continuous-only and throws UnsupportedMeasure. The request's estimator is
/// not consulted.
MeasureResult plugin_discrete_measure(const std::vector<DiscreteSeries>& sequences,
                                      const MeasureRequest& request);

}  // namespace tsinfo

#endif  // TSINFO_DISCRETE_PLUGIN_HPP
