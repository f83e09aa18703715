#ifndef TSINFO_EMBEDDING_HPP
#define TSINFO_EMBEDDING_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "tsinfo/series.hpp"

namespace tsinfo {

/// A past-vector block: k values sampled every tau steps, ending at
/// present_index + lead. k = 0 is the empty (null) block. lead = 0 means the
/// block ends at the present index, lead = -1 one step before it.
struct EmbeddingSpec {
  int k = 1;
  int tau = 1;
  int lead = 0;

  void validate() const;
};

/// One named block request for align().
struct BlockSpec {
  std::string column;
  EmbeddingSpec spec;
  std::string label;
};

/// Identity of one column of an aligned sample matrix: which dataset column
/// it came from and its offset relative to the present index. Tie-noise
/// streams are keyed on this, so a column gets the same noise regardless of
/// where it sits in the matrix.
struct ColumnTag {
  std::string column;
  long lag = 0;
};

/// Joint samples pooled across time: row r is the concatenation of all block
/// vectors evaluated at present_indices[r]. Immutable after construction.
struct AlignedSamples {
  std::vector<std::pair<std::string, int>> blocks;  // (label, dimension)
  Eigen::MatrixXd rows;                             // N_eff x total dimension
  std::vector<long> present_indices;                // 1-based, increasing
  std::vector<ColumnTag> column_tags;               // one per matrix column
  std::vector<int> block_offsets;                   // first column of each block

  long n_eff() const noexcept { return rows.rows(); }

  /// Matrix column indices belonging to the given block (by position).
  std::vector<int> block_columns(std::size_t block_index) const;
};

/// Extract the lagged vector (x_{t+lead}, x_{t+lead-tau}, ...,
/// x_{t+lead-(k-1)tau}) at t = present_index. Most-recent-first. k = 0 gives
/// the empty vector. Throws OutOfRange when any index leaves [1, T].
std::vector<double> embed(const TimeSeries& series, const EmbeddingSpec& spec,
                          long present_index);

/// Pool every present index at which all blocks are fully defined, in
/// increasing order. Throws EmptyAlignment when no such index exists.
AlignedSamples align(const Dataset& dataset, const std::vector<BlockSpec>& blocks);

}  // namespace tsinfo

#endif  // TSINFO_EMBEDDING_HPP
