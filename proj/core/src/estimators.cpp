#include "tsinfo/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "tsinfo/digamma.hpp"
#include "tsinfo/neighbor_index.hpp"
#include "tsinfo/rng.hpp"

namespace tsinfo {

namespace {

constexpr double kLog2PiE = 2.8378770664093453;  // ln(2 pi e)

// Sum per-sample contributions in ascending order so the result depends only
// on the multiset of terms, not on row order.
double sorted_mean(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum / static_cast<double>(terms.size());
}

// log |C| for the ML (divide-by-N) sample covariance of `samples`.
// Throws SingularCovariance when C is not positive definite within a
// relative tolerance.
double ml_covariance_logdet(const Eigen::MatrixXd& samples) {
  const long n = samples.rows();
  const long d = samples.cols();
  if (n <= d) {
    throw Error(Errc::SingularCovariance,
                "need more samples than dimensions (N=" + std::to_string(n) +
                    ", d=" + std::to_string(d) + ")");
  }
  const Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  const Eigen::VectorXd diag = ldlt.vectorD();
  const double dmax = diag.maxCoeff();
  if (!(dmax > 0.0)) {
    throw Error(Errc::SingularCovariance, "covariance has no positive pivot");
  }
  double logdet = 0.0;
  for (long i = 0; i < d; ++i) {
    if (diag(i) <= 1e-12 * dmax) {
      throw Error(Errc::SingularCovariance,
                  "covariance determinant not positive within tolerance");
    }
    logdet += std::log(diag(i));
  }
  return logdet;
}

}  // namespace

void EstimatorKind::validate() const {
  if (tag == Tag::Kernel && !(kernel_width > 0.0)) {
    throw Error(Errc::InvalidArgument, "kernel width must be positive");
  }
  if ((tag == Tag::Kozachenko || tag == Tag::Ksg) && k_nn < 1) {
    throw Error(Errc::InvalidArgument, "k_nn must be >= 1");
  }
}

const char* to_string(EstimatorKind::Tag tag) noexcept {
  switch (tag) {
    case EstimatorKind::Tag::Gaussian: return "gaussian";
    case EstimatorKind::Tag::Kernel: return "kernel";
    case EstimatorKind::Tag::Kozachenko: return "kozachenko";
    case EstimatorKind::Tag::Ksg: return "ksg";
  }
  return "?";
}

EstimatorKind::Tag parse_estimator_tag(const std::string& name) {
  if (name == "gaussian") return EstimatorKind::Tag::Gaussian;
  if (name == "kernel") return EstimatorKind::Tag::Kernel;
  if (name == "kozachenko") return EstimatorKind::Tag::Kozachenko;
  if (name == "ksg" || name == "kraskov") return EstimatorKind::Tag::Ksg;
  throw Error(Errc::InvalidArgument, "unknown estimator '" + name + "'");
}

double entropy_gaussian(const Eigen::MatrixXd& samples) {
  const long d = samples.cols();
  if (d < 1) throw Error(Errc::InvalidArgument, "entropy of a 0-dimensional block");
  const double logdet = ml_covariance_logdet(samples);
  return 0.5 * (static_cast<double>(d) * kLog2PiE + logdet);
}

double entropy_knn(const Eigen::MatrixXd& samples, int k_nn) {
  const long n = samples.rows();
  const long d = samples.cols();
  if (d < 1) throw Error(Errc::InvalidArgument, "entropy of a 0-dimensional block");
  if (k_nn < 1 || k_nn >= n) {
    throw Error(Errc::InvalidArgument, "need 1 <= k_nn < N");
  }
  const NeighborIndex index(samples);
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double dist = index.kth_distance(i, k_nn);
    if (!(dist > 0.0)) {
      throw Error(Errc::DegenerateGeometry,
                  "zero k-NN distance at sample " + std::to_string(i) +
                      "; samples need tie-breaking noise");
    }
    terms[static_cast<std::size_t>(i)] = std::log(2.0 * dist);
  }
  return digamma(static_cast<double>(n)) - digamma(static_cast<double>(k_nn)) +
         static_cast<double>(d) * sorted_mean(terms);
}

double entropy_kernel(const Eigen::MatrixXd& samples, double width) {
  const long n = samples.rows();
  const long d = samples.cols();
  if (d < 1) throw Error(Errc::InvalidArgument, "entropy of a 0-dimensional block");
  if (!(width > 0.0)) throw Error(Errc::InvalidArgument, "kernel width must be positive");
  if (n < 2) throw Error(Errc::InvalidArgument, "need at least 2 samples");
  const NeighborIndex index(samples);
  const double log_cell =
      std::log(static_cast<double>(n - 1)) + static_cast<double>(d) * std::log(2.0 * width);
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const long count = index.count_within(i, width, /*strict=*/false);
    if (count == 0) {
      throw Error(Errc::EmptyNeighborhood,
                  "sample " + std::to_string(i) + " has no neighbor within the kernel width");
    }
    terms[static_cast<std::size_t>(i)] = std::log(static_cast<double>(count)) - log_cell;
  }
  return -sorted_mean(terms);
}

double mi_ksg(const Eigen::MatrixXd& block_x, const Eigen::MatrixXd& block_y, int k_nn) {
  const long n = block_x.rows();
  if (block_y.rows() != n) {
    throw Error(Errc::InvalidArgument, "blocks must have paired rows");
  }
  if (block_x.cols() < 1 || block_y.cols() < 1) {
    throw Error(Errc::InvalidArgument, "MI blocks must be non-empty");
  }
  if (k_nn < 1 || k_nn >= n) {
    throw Error(Errc::InvalidArgument, "need 1 <= k_nn < N");
  }
  Eigen::MatrixXd joint(n, block_x.cols() + block_y.cols());
  joint << block_x, block_y;
  const NeighborIndex joint_index(joint);
  const NeighborIndex x_index(block_x);
  const NeighborIndex y_index(block_y);
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double eps = joint_index.kth_distance(i, k_nn);
    if (!(eps > 0.0)) {
      throw Error(Errc::DegenerateGeometry,
                  "zero joint-space k-NN distance at sample " + std::to_string(i));
    }
    const long nx = x_index.count_within(i, eps, /*strict=*/true);
    const long ny = y_index.count_within(i, eps, /*strict=*/true);
    terms[static_cast<std::size_t>(i)] = digamma(static_cast<double>(nx + 1)) +
                                         digamma(static_cast<double>(ny + 1));
  }
  return digamma(static_cast<double>(k_nn)) + digamma(static_cast<double>(n)) -
         sorted_mean(terms);
}

double cmi_ksg(const Eigen::MatrixXd& block_x, const Eigen::MatrixXd& block_y,
               const Eigen::MatrixXd& block_z, int k_nn) {
  if (block_z.cols() == 0) return mi_ksg(block_x, block_y, k_nn);
  const long n = block_x.rows();
  if (block_y.rows() != n || block_z.rows() != n) {
    throw Error(Errc::InvalidArgument, "blocks must have paired rows");
  }
  if (block_x.cols() < 1 || block_y.cols() < 1) {
    throw Error(Errc::InvalidArgument, "MI blocks must be non-empty");
  }
  if (k_nn < 1 || k_nn >= n) {
    throw Error(Errc::InvalidArgument, "need 1 <= k_nn < N");
  }
  const long dx = block_x.cols(), dy = block_y.cols(), dz = block_z.cols();
  Eigen::MatrixXd joint(n, dx + dy + dz);
  joint << block_x, block_y, block_z;
  Eigen::MatrixXd xz(n, dx + dz);
  xz << block_x, block_z;
  Eigen::MatrixXd yz(n, dy + dz);
  yz << block_y, block_z;
  const NeighborIndex joint_index(joint);
  const NeighborIndex xz_index(xz);
  const NeighborIndex yz_index(yz);
  const NeighborIndex z_index(block_z);
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double eps = joint_index.kth_distance(i, k_nn);
    if (!(eps > 0.0)) {
      throw Error(Errc::DegenerateGeometry,
                  "zero joint-space k-NN distance at sample " + std::to_string(i));
    }
    const long nxz = xz_index.count_within(i, eps, /*strict=*/true);
    const long nyz = yz_index.count_within(i, eps, /*strict=*/true);
    const long nz = z_index.count_within(i, eps, /*strict=*/true);
    terms[static_cast<std::size_t>(i)] = digamma(static_cast<double>(nxz + 1)) +
                                         digamma(static_cast<double>(nyz + 1)) -
                                         digamma(static_cast<double>(nz + 1));
  }
  return digamma(static_cast<double>(k_nn)) - sorted_mean(terms);
}

void add_tie_noise_column(Eigen::Ref<Eigen::VectorXd> column, double amplitude,
                          std::uint64_t stream_seed) {
  if (amplitude < 0.0) throw Error(Errc::InvalidArgument, "noise amplitude must be >= 0");
  if (amplitude == 0.0) return;
  const long n = column.size();
  double mean = column.mean();
  double ss = 0.0;
  for (long i = 0; i < n; ++i) ss += (column(i) - mean) * (column(i) - mean);
  const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  const double scale = amplitude * (sd > 0.0 ? sd : 1.0);

  // Rank-keyed assignment: the j-th smallest value receives the j-th draw.
  std::vector<long> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0L);
  std::stable_sort(order.begin(), order.end(),
                   [&](long a, long b) { return column(a) < column(b); });
  SplitMix64 rng(stream_seed);
  for (long j = 0; j < n; ++j) {
    column(order[static_cast<std::size_t>(j)]) += scale * rng.uniform_pm1();
  }
}

Eigen::MatrixXd add_tie_noise(const Eigen::MatrixXd& samples, double amplitude,
                              std::uint64_t seed) {
  Eigen::MatrixXd out = samples;
  for (long c = 0; c < out.cols(); ++c) {
    add_tie_noise_column(out.col(c), amplitude,
                         derive_stream(seed, static_cast<std::uint64_t>(c)));
  }
  return out;
}

}  // namespace tsinfo
