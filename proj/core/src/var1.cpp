#include "tsinfo/var1.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "tsinfo/rng.hpp"

namespace tsinfo {

namespace {

constexpr double kLog2PiE = 2.8378770664093453;  // ln(2 pi e)

std::vector<std::string> default_names(long m, std::vector<std::string> names) {
  if (names.empty()) {
    for (long i = 0; i < m; ++i) names.push_back("z" + std::to_string(i + 1));
  }
  if (static_cast<long>(names.size()) != m) {
    throw Error(Errc::InvalidArgument, "need one name per process");
  }
  return names;
}

double logdet_pd(const Eigen::MatrixXd& m) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  const Eigen::VectorXd diag = ldlt.vectorD();
  const double dmax = diag.maxCoeff();
  double logdet = 0.0;
  for (long i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0) || diag(i) <= 1e-13 * dmax) {
      throw Error(Errc::SingularCovariance, "conditional covariance is singular");
    }
    logdet += std::log(diag(i));
  }
  return logdet;
}

// Population conditional differential entropy H(targets | conds) from a
// joint covariance, via the Schur complement.
class GaussianOracle {
 public:
  explicit GaussianOracle(const Var1System& system) {
    const StationaryCovariance st = stationary_covariance(system);
    const long m = system.dim();
    m_ = m;
    joint_.resize(2 * m, 2 * m);
    // [Z_t; Z_{t+1}]: Cov(Z_t, Z_{t+1}) = P A^T, Cov(Z_{t+1}, Z_t) = A P.
    joint_.topLeftCorner(m, m) = st.lag0;
    joint_.topRightCorner(m, m) = st.lag1.transpose();
    joint_.bottomLeftCorner(m, m) = st.lag1;
    joint_.bottomRightCorner(m, m) = st.lag0;
  }

  // index: process i at time step 0 (present) or 1 (next).
  int idx(long process, int step) const { return static_cast<int>(step * m_ + process); }

  double entropy(const std::vector<int>& vars) const {
    return cond_entropy(vars, {});
  }

  double cond_entropy(const std::vector<int>& targets, const std::vector<int>& conds) const {
    Eigen::MatrixXd stt = sub(targets, targets);
    if (!conds.empty()) {
      const Eigen::MatrixXd scc = sub(conds, conds);
      const Eigen::MatrixXd stc = sub(targets, conds);
      stt -= stc * scc.ldlt().solve(stc.transpose());
    }
    return 0.5 * (static_cast<double>(targets.size()) * kLog2PiE + logdet_pd(stt));
  }

  double mi(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    return entropy(a) + entropy(b) - entropy(ab);
  }

 private:
  Eigen::MatrixXd sub(const std::vector<int>& rows, const std::vector<int>& cols) const {
    Eigen::MatrixXd out(static_cast<long>(rows.size()), static_cast<long>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        out(static_cast<long>(i), static_cast<long>(j)) = joint_(rows[i], cols[j]);
      }
    }
    return out;
  }

  long m_ = 0;
  Eigen::MatrixXd joint_;
};

}  // namespace

void Var1System::validate() const {
  const long m = coefficients.rows();
  if (coefficients.cols() != m || innovation_cov.rows() != m || innovation_cov.cols() != m) {
    throw Error(Errc::InvalidArgument, "A and Sigma must be square with matching size");
  }
  if (!innovation_cov.isApprox(innovation_cov.transpose(), 1e-12)) {
    throw Error(Errc::InvalidArgument, "Sigma must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(innovation_cov);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::InvalidArgument, "Sigma must be positive definite");
  }
  const Eigen::VectorXcd eigs = Eigen::EigenSolver<Eigen::MatrixXd>(coefficients, false).eigenvalues();
  double rho = 0.0;
  for (long i = 0; i < eigs.size(); ++i) rho = std::max(rho, std::abs(eigs(i)));
  if (rho >= 1.0) {
    throw Error(Errc::NonStationary,
                "spectral radius " + std::to_string(rho) + " >= 1");
  }
}

Var1System var_a_fixture() {
  Var1System sys;
  sys.coefficients.resize(2, 2);
  sys.coefficients << 0.0, 0.0, 0.5, 0.5;
  sys.innovation_cov.resize(2, 2);
  sys.innovation_cov << 1.0, 0.0, 0.0, 0.25;
  return sys;
}

StationaryCovariance stationary_covariance(const Var1System& system) {
  system.validate();
  const long m = system.dim();
  const Eigen::MatrixXd& a = system.coefficients;
  // vec(P) = (I - A (x) A)^{-1} vec(Sigma); column-major vec matches the
  // Kronecker identity vec(A P A^T) = (A (x) A) vec(P).
  Eigen::MatrixXd kron(m * m, m * m);
  for (long i = 0; i < m; ++i) {
    for (long j = 0; j < m; ++j) {
      kron.block(i * m, j * m, m, m) = a(i, j) * a;
    }
  }
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m * m, m * m) - kron;
  Eigen::VectorXd vec_sigma(m * m);
  for (long j = 0; j < m; ++j) {
    for (long i = 0; i < m; ++i) vec_sigma(j * m + i) = system.innovation_cov(i, j);
  }
  const Eigen::VectorXd vec_p = lhs.partialPivLu().solve(vec_sigma);
  Eigen::MatrixXd p(m, m);
  for (long j = 0; j < m; ++j) {
    for (long i = 0; i < m; ++i) p(i, j) = vec_p(j * m + i);
  }
  p = ((p + p.transpose()) / 2.0).eval();
  return {p, a * p};
}

Dataset gen_var1(const Var1System& system, long t_len, std::uint64_t seed,
                 long burn_in, std::vector<std::string> names) {
  system.validate();
  if (t_len < 2) throw Error(Errc::InvalidArgument, "need T >= 2");
  if (burn_in < 0) throw Error(Errc::InvalidArgument, "burn_in must be >= 0");
  const long m = system.dim();
  names = default_names(m, std::move(names));

  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(system.innovation_cov).matrixL();
  NormalSampler normal(seed);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd shock(m);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m));
  for (auto& col : out) col.reserve(static_cast<std::size_t>(t_len));
  for (long t = 0; t < burn_in + t_len; ++t) {
    for (long i = 0; i < m; ++i) shock(i) = normal.next();
    state = system.coefficients * state + chol * shock;
    if (t >= burn_in) {
      for (long i = 0; i < m; ++i) out[static_cast<std::size_t>(i)].push_back(state(i));
    }
  }
  std::vector<TimeSeries> columns;
  columns.reserve(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    columns.emplace_back(std::move(out[static_cast<std::size_t>(i)]),
                         names[static_cast<std::size_t>(i)]);
  }
  return Dataset(std::move(columns));
}

double analytic_gaussian_measure(const Var1System& system, const MeasureRequest& request,
                                 std::vector<std::string> names) {
  const long m = system.dim();
  names = default_names(m, std::move(names));
  auto find = [&](const std::string& name) -> long {
    for (long i = 0; i < m; ++i) {
      if (names[static_cast<std::size_t>(i)] == name) return i;
    }
    throw Error(Errc::InvalidArgument, "no process named '" + name + "'");
  };

  const MeasureInfo& info = measure_info(request.id);
  if (request.tau_source != 1 || request.tau_target != 1) {
    throw Error(Errc::UnsupportedOrder, "oracle supports tau = 1 only");
  }
  const bool uses_k = request.id == MeasureId::ActiveInformationStorage ||
                      request.id == MeasureId::CausallyConditionedEntropy ||
                      request.id == MeasureId::TransferEntropy ||
                      request.id == MeasureId::GrangerCausality;
  const bool uses_l = request.id == MeasureId::TransferEntropy ||
                      request.id == MeasureId::GrangerCausality;
  if ((uses_k && request.k != 1) || (uses_l && request.l != 1)) {
    throw Error(Errc::UnsupportedOrder, "oracle supports k = l = 1 only");
  }

  const GaussianOracle oracle(system);
  const long tgt = find(request.target);
  const long src = info.pairwise ? find(request.source) : -1;

  switch (request.id) {
    case MeasureId::Entropy:
      return oracle.entropy({oracle.idx(tgt, 0)});
    case MeasureId::JointEntropy:
      return oracle.entropy({oracle.idx(src, 0), oracle.idx(tgt, 0)});
    case MeasureId::MutualInformation:
      return oracle.mi({oracle.idx(src, 0)}, {oracle.idx(tgt, 0)});
    case MeasureId::ConditionalEntropy:
      return oracle.cond_entropy({oracle.idx(tgt, 0)}, {oracle.idx(src, 0)});
    case MeasureId::ActiveInformationStorage:
      return oracle.mi({oracle.idx(tgt, 0)}, {oracle.idx(tgt, 1)});
    case MeasureId::StochasticInteraction:
      return oracle.cond_entropy({oracle.idx(src, 1)}, {oracle.idx(src, 0)}) +
             oracle.cond_entropy({oracle.idx(tgt, 1)}, {oracle.idx(tgt, 0)}) -
             oracle.cond_entropy({oracle.idx(src, 1), oracle.idx(tgt, 1)},
                                 {oracle.idx(src, 0), oracle.idx(tgt, 0)});
    case MeasureId::TimeLaggedMi:
      return oracle.mi({oracle.idx(src, 0)}, {oracle.idx(tgt, 1)});
    case MeasureId::CausallyConditionedEntropy:
      return oracle.cond_entropy(
          {oracle.idx(tgt, 1)},
          {oracle.idx(tgt, 0), oracle.idx(src, 1), oracle.idx(src, 0)});
    case MeasureId::DirectedInformation: {
      if (request.max_window > 2) {
        throw Error(Errc::UnsupportedOrder, "oracle supports K <= 2 for directed information");
      }
      double value = oracle.mi({oracle.idx(tgt, 1)}, {oracle.idx(src, 1)});
      if (request.max_window == 2) {
        value += oracle.cond_entropy({oracle.idx(tgt, 1)}, {oracle.idx(tgt, 0)}) -
                 oracle.cond_entropy({oracle.idx(tgt, 1)},
                                     {oracle.idx(tgt, 0), oracle.idx(src, 1), oracle.idx(src, 0)});
      }
      return value;
    }
    case MeasureId::TransferEntropy:
      return oracle.cond_entropy({oracle.idx(tgt, 1)}, {oracle.idx(tgt, 0)}) -
             oracle.cond_entropy({oracle.idx(tgt, 1)},
                                 {oracle.idx(tgt, 0), oracle.idx(src, 0)});
    case MeasureId::GrangerCausality:
      // Equals twice the Gaussian transfer entropy.
      return 2.0 * (oracle.cond_entropy({oracle.idx(tgt, 1)}, {oracle.idx(tgt, 0)}) -
                    oracle.cond_entropy({oracle.idx(tgt, 1)},
                                        {oracle.idx(tgt, 0), oracle.idx(src, 0)}));
  }
  throw Error(Errc::InvalidArgument, "unknown measure id");
}

}  // namespace tsinfo
