#include "tsinfo/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsinfo {

NeighborIndex::NeighborIndex(const Eigen::MatrixXd& points)
    : n_(points.rows()), d_(static_cast<int>(points.cols())) {
  if (n_ < 1 || d_ < 1) {
    throw Error(Errc::InvalidArgument, "neighbor index needs a non-empty matrix");
  }
  pts_.resize(static_cast<std::size_t>(n_) * d_);
  for (long i = 0; i < n_; ++i) {
    for (int c = 0; c < d_; ++c) pts_[static_cast<std::size_t>(i) * d_ + c] = points(i, c);
  }
  brute_ = n_ < kBruteForceBelow;
  if (!brute_) {
    index_.resize(static_cast<std::size_t>(n_));
    for (long i = 0; i < n_; ++i) index_[static_cast<std::size_t>(i)] = i;
    nodes_.reserve(static_cast<std::size_t>(2 * n_ / kLeafSize + 2));
    build(0, n_);
  }
}

double NeighborIndex::chebyshev(long a, const double* q) const {
  const double* p = &pts_[static_cast<std::size_t>(a) * d_];
  double dist = 0.0;
  for (int c = 0; c < d_; ++c) {
    const double diff = std::fabs(p[c] - q[c]);
    if (diff > dist) dist = diff;
  }
  return dist;
}

double NeighborIndex::box_min_dist(const Node& node, const double* q) const {
  double dist = 0.0;
  for (int c = 0; c < d_; ++c) {
    double diff = 0.0;
    if (q[c] < node.lo[static_cast<std::size_t>(c)]) diff = node.lo[static_cast<std::size_t>(c)] - q[c];
    else if (q[c] > node.hi[static_cast<std::size_t>(c)]) diff = q[c] - node.hi[static_cast<std::size_t>(c)];
    if (diff > dist) dist = diff;
  }
  return dist;
}

double NeighborIndex::box_max_dist(const Node& node, const double* q) const {
  double dist = 0.0;
  for (int c = 0; c < d_; ++c) {
    const double diff = std::max(q[c] - node.lo[static_cast<std::size_t>(c)],
                                 node.hi[static_cast<std::size_t>(c)] - q[c]);
    if (diff > dist) dist = diff;
  }
  return dist;
}

int NeighborIndex::build(long begin, long end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  {
    Node& node = nodes_.back();
    node.begin = begin;
    node.end = end;
    node.lo.assign(static_cast<std::size_t>(d_), std::numeric_limits<double>::infinity());
    node.hi.assign(static_cast<std::size_t>(d_), -std::numeric_limits<double>::infinity());
    for (long i = begin; i < end; ++i) {
      const long p = index_[static_cast<std::size_t>(i)];
      for (int c = 0; c < d_; ++c) {
        const double v = coord(p, c);
        node.lo[static_cast<std::size_t>(c)] = std::min(node.lo[static_cast<std::size_t>(c)], v);
        node.hi[static_cast<std::size_t>(c)] = std::max(node.hi[static_cast<std::size_t>(c)], v);
      }
    }
  }
  if (end - begin <= kLeafSize) return id;

  // Split the widest dimension at the median.
  int split_dim = 0;
  double widest = -1.0;
  for (int c = 0; c < d_; ++c) {
    const double extent = nodes_[static_cast<std::size_t>(id)].hi[static_cast<std::size_t>(c)] -
                          nodes_[static_cast<std::size_t>(id)].lo[static_cast<std::size_t>(c)];
    if (extent > widest) {
      widest = extent;
      split_dim = c;
    }
  }
  if (widest <= 0.0) return id;  // all points identical: keep as leaf

  const long mid = begin + (end - begin) / 2;
  std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                   [&](long a, long b) { return coord(a, split_dim) < coord(b, split_dim); });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.split_dim = split_dim;
  node.left = left;
  node.right = right;
  return id;
}

void NeighborIndex::knn_search(int node_id, const double* q, long skip, int k,
                               std::vector<double>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.left < 0) {
    for (long i = node.begin; i < node.end; ++i) {
      const long p = index_[static_cast<std::size_t>(i)];
      if (p == skip) continue;
      const double dist = chebyshev(p, q);
      if (static_cast<int>(heap.size()) < k) {
        heap.push_back(dist);
        std::push_heap(heap.begin(), heap.end());
      } else if (dist < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = dist;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }
  const Node& lc = nodes_[static_cast<std::size_t>(node.left)];
  const Node& rc = nodes_[static_cast<std::size_t>(node.right)];
  const double dl = box_min_dist(lc, q);
  const double dr = box_min_dist(rc, q);
  const int first = (dl <= dr) ? node.left : node.right;
  const int second = (dl <= dr) ? node.right : node.left;
  const double dsecond = std::max(dl, dr);
  if (static_cast<int>(heap.size()) < k || std::min(dl, dr) < heap.front()) {
    knn_search(first, q, skip, k, heap);
  }
  if (static_cast<int>(heap.size()) < k || dsecond < heap.front()) {
    knn_search(second, q, skip, k, heap);
  }
}

double NeighborIndex::kth_distance(long query_row, int k) const {
  if (query_row < 0 || query_row >= n_) {
    throw Error(Errc::OutOfRange, "query row outside sample matrix");
  }
  if (k < 1 || k >= n_) {
    throw Error(Errc::InvalidArgument, "k-th neighbor requires 1 <= k < N");
  }
  const double* q = &pts_[static_cast<std::size_t>(query_row) * d_];
  if (brute_) {
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n_ - 1));
    for (long j = 0; j < n_; ++j) {
      if (j == query_row) continue;
      dists.push_back(chebyshev(j, q));
    }
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
    return dists[static_cast<std::size_t>(k - 1)];
  }
  std::vector<double> heap;
  heap.reserve(static_cast<std::size_t>(k));
  knn_search(0, q, query_row, k, heap);
  return heap.front();
}

long NeighborIndex::count_search(int node_id, const double* q, double radius,
                                 bool strict) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  const double lo = box_min_dist(node, q);
  if (strict ? (lo >= radius) : (lo > radius)) return 0;
  const double hi = box_max_dist(node, q);
  if (strict ? (hi < radius) : (hi <= radius)) return node.end - node.begin;
  if (node.left < 0) {
    long count = 0;
    for (long i = node.begin; i < node.end; ++i) {
      const double dist = chebyshev(index_[static_cast<std::size_t>(i)], q);
      if (strict ? (dist < radius) : (dist <= radius)) ++count;
    }
    return count;
  }
  return count_search(node.left, q, radius, strict) +
         count_search(node.right, q, radius, strict);
}

long NeighborIndex::count_within(long query_row, double radius, bool strict) const {
  if (query_row < 0 || query_row >= n_) {
    throw Error(Errc::OutOfRange, "query row outside sample matrix");
  }
  const double* q = &pts_[static_cast<std::size_t>(query_row) * d_];
  long count = 0;
  if (brute_) {
    for (long j = 0; j < n_; ++j) {
      const double dist = chebyshev(j, q);
      if (strict ? (dist < radius) : (dist <= radius)) ++count;
    }
  } else {
    count = count_search(0, q, radius, strict);
  }
  // The query itself sits at distance 0; drop it when it met the predicate.
  if (strict ? (0.0 < radius) : (0.0 <= radius)) --count;
  return count;
}

}  // namespace tsinfo
