#ifndef TSINFO_VAR1_HPP
#define TSINFO_VAR1_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "tsinfo/measures.hpp"
#include "tsinfo/series.hpp"

namespace tsinfo {

/// Linear-Gaussian VAR(1) system Z_{t+1} = A Z_t + eps_t,
/// eps_t ~ N(0, Sigma). Ground truth for the gaussian-estimator paths:
/// every first-order measure has a closed-form population value here.
struct Var1System {
  Eigen::MatrixXd coefficients;    // A
  Eigen::MatrixXd innovation_cov;  // Sigma, symmetric positive definite

  long dim() const { return coefficients.rows(); }

  /// Throws NonStationary when the spectral radius of A reaches 1, and
  /// InvalidArgument for shape mismatches or a non-PD Sigma.
  void validate() const;
};

/// Unidirectional two-process fixture: X white noise driving Y with equal
/// self- and cross-coupling 0.5, innovation variances 1 and 0.25. Zero
/// contemporaneous covariance, so each measure's sensitivity is isolated.
/// Columns are named "x" and "y".
Var1System var_a_fixture();
inline constexpr const char* kVarAFixtureSource = "x";
inline constexpr const char* kVarAFixtureTarget = "y";

/// Stationary lag-0 covariance P (solving P = A P A^T + Sigma) and lag-1
/// cross-covariance C1 = A P = Cov(Z_{t+1}, Z_t).
struct StationaryCovariance {
  Eigen::MatrixXd lag0;
  Eigen::MatrixXd lag1;
};

StationaryCovariance stationary_covariance(const Var1System& system);

/// Simulate T samples after discarding `burn_in` initial steps, bit
/// reproducible from the seed on any platform. Column names default to
/// "z1".."zm" ("x", "y" fit a two-process system's fixture conventions).
Dataset gen_var1(const Var1System& system, long t_len, std::uint64_t seed,
                 long burn_in = 1000, std::vector<std::string> names = {});

/// Exact population value of a measure on the stationary process, via Schur
/// complements of the joint (Z_t, Z_{t+1}) covariance. Supports first-order
/// requests only (k = l = 1, tau = 1; directed information up to K = 2);
/// anything deeper throws UnsupportedOrder. Column names follow gen_var1.
double analytic_gaussian_measure(const Var1System& system, const MeasureRequest& request,
                                 std::vector<std::string> names = {});

}  // namespace tsinfo

#endif  // TSINFO_VAR1_HPP
