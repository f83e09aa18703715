#ifndef TSINFO_ESTIMATORS_HPP
#define TSINFO_ESTIMATORS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "tsinfo/error.hpp"

namespace tsinfo {

/// Which density estimator backs an entropy/MI computation.
struct EstimatorKind {
  enum class Tag { Gaussian, Kernel, Kozachenko, Ksg };

  Tag tag = Tag::Ksg;
  double kernel_width = 0.5;  // box half-width, in standardized-sd units
  int k_nn = 4;               // neighbor count for kozachenko/ksg

  static EstimatorKind gaussian() { return {Tag::Gaussian, 0.5, 4}; }
  static EstimatorKind kernel(double width = 0.5) { return {Tag::Kernel, width, 4}; }
  static EstimatorKind kozachenko(int k_nn = 4) { return {Tag::Kozachenko, 0.5, k_nn}; }
  static EstimatorKind ksg(int k_nn = 4) { return {Tag::Ksg, 0.5, k_nn}; }

  void validate() const;
};

const char* to_string(EstimatorKind::Tag tag) noexcept;
EstimatorKind::Tag parse_estimator_tag(const std::string& name);

/// Differential entropy under a fitted Gaussian: 0.5 ln((2 pi e)^d |C|)
/// with C the maximum-likelihood (divide-by-N) sample covariance.
/// Throws SingularCovariance when |C| is not positive within tolerance.
double entropy_gaussian(const Eigen::MatrixXd& samples);

/// Kozachenko-Leonenko nearest-neighbor entropy:
/// psi(N) - psi(k) + (d/N) sum_i ln(eps_i), eps_i twice the Chebyshev
/// distance to the k-th nearest neighbor. The Chebyshev unit ball has unit
/// log-volume, so no ball-volume term appears. Can be negative.
/// Throws DegenerateGeometry if any neighbor distance is exactly zero.
double entropy_knn(const Eigen::MatrixXd& samples, int k_nn);

/// Box-kernel plug-in entropy with leave-one-out counts:
/// -(1/N) sum_i ln[ c_i / ((N-1) (2w)^d) ], c_i the number of other samples
/// within Chebyshev distance <= w. Expects columns standardized to unit sd.
/// Throws EmptyNeighborhood (with the sample index) if any c_i = 0.
double entropy_kernel(const Eigen::MatrixXd& samples, double width);

/// Kraskov-Stoegbauer-Grassberger mutual information (algorithm 1):
/// psi(k) + psi(N) - <psi(n_x+1) + psi(n_y+1)>, with eps_i the joint-space
/// k-th neighbor distance and n_x, n_y marginal counts strictly inside it.
/// Small negative values are reported as-is.
double mi_ksg(const Eigen::MatrixXd& block_x, const Eigen::MatrixXd& block_y, int k_nn);

/// Conditional MI (Frenzel-Pompe extension of KSG):
/// psi(k) - <psi(n_xz+1) + psi(n_yz+1) - psi(n_z+1)>. An empty conditioning
/// block delegates to mi_ksg, bit-identically.
double cmi_ksg(const Eigen::MatrixXd& block_x, const Eigen::MatrixXd& block_y,
               const Eigen::MatrixXd& block_z, int k_nn);

/// Deterministic tie-breaking noise, uniform per coordinate in [-a, a] with
/// a = amplitude * (column sample sd), or a = amplitude for a constant
/// column. Noise values are assigned by within-column rank, not by row, so
/// the noised sample multiset is invariant under row permutations (absent
/// ties) while duplicated values still separate.
Eigen::MatrixXd add_tie_noise(const Eigen::MatrixXd& samples, double amplitude,
                              std::uint64_t seed);

/// Rank-keyed noise for one column fed by an explicit stream seed; the
/// matrix overload derives stream seeds from the column position.
void add_tie_noise_column(Eigen::Ref<Eigen::VectorXd> column, double amplitude,
                          std::uint64_t stream_seed);

/// Default relative noise amplitude for the nearest-neighbor estimators.
inline constexpr double kDefaultTieNoiseAmplitude = 1e-8;

}  // namespace tsinfo

#endif  // TSINFO_ESTIMATORS_HPP
