#ifndef TSINFO_NEIGHBOR_INDEX_HPP
#define TSINFO_NEIGHBOR_INDEX_HPP

#include <Eigen/Core>
#include <vector>

#include "tsinfo/error.hpp"

namespace tsinfo {

/// Spatial index over an N x d sample matrix under the Chebyshev (max)
/// norm. Supports the two queries the nearest-neighbor estimators need:
/// distance to the k-th nearest neighbor of a sample, and the number of
/// samples within a radius of it. The query sample itself is never counted.
///
/// kd-tree with bounding-box pruning; brute force below 64 points, where
/// degenerate splits would cost more than they save. Immutable after
/// construction and safe for concurrent queries.
class NeighborIndex {
 public:
  explicit NeighborIndex(const Eigen::MatrixXd& points);

  long size() const noexcept { return n_; }
  int dim() const noexcept { return d_; }

  /// Chebyshev distance from sample `query_row` to its k-th nearest
  /// neighbor among the other samples. Requires 1 <= k < size().
  double kth_distance(long query_row, int k) const;

  /// Number of samples j != query_row with distance < radius (strict) or
  /// <= radius (inclusive).
  long count_within(long query_row, double radius, bool strict) const;

 private:
  struct Node {
    long begin = 0, end = 0;      // range in index_
    int left = -1, right = -1;    // children; -1 for leaf
    int split_dim = -1;
    std::vector<double> lo, hi;   // bounding box of the range
  };

  double coord(long point, int c) const { return pts_[static_cast<std::size_t>(point) * d_ + c]; }
  double chebyshev(long a, const double* q) const;
  double box_min_dist(const Node& node, const double* q) const;
  double box_max_dist(const Node& node, const double* q) const;
  int build(long begin, long end);
  void knn_search(int node_id, const double* q, long skip, int k,
                  std::vector<double>& heap) const;
  long count_search(int node_id, const double* q, double radius, bool strict) const;

  long n_ = 0;
  int d_ = 0;
  std::vector<double> pts_;     // row-major copy
  std::vector<long> index_;     // permutation over points
  std::vector<Node> nodes_;
  bool brute_ = false;

  static constexpr long kLeafSize = 16;
  static constexpr long kBruteForceBelow = 64;
};

}  // namespace tsinfo

#endif  // TSINFO_NEIGHBOR_INDEX_HPP
