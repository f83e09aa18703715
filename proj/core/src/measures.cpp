#include "tsinfo/measures.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tsinfo/rng.hpp"

namespace tsinfo {

namespace {

const std::vector<MeasureInfo> kRegistry = {
    {MeasureId::Entropy, "entropy", false, Direction::None, false},
    {MeasureId::JointEntropy, "joint_entropy", true, Direction::Undirected, false},
    {MeasureId::MutualInformation, "mutual_information", true, Direction::Undirected, false},
    {MeasureId::ConditionalEntropy, "conditional_entropy", true, Direction::Directed, false},
    {MeasureId::ActiveInformationStorage, "active_information_storage", false, Direction::None, true},
    {MeasureId::StochasticInteraction, "stochastic_interaction", true, Direction::Undirected, true},
    {MeasureId::TimeLaggedMi, "time_lagged_mi", true, Direction::Directed, true},
    {MeasureId::CausallyConditionedEntropy, "causally_conditioned_entropy", true, Direction::Directed, true},
    {MeasureId::DirectedInformation, "directed_information", true, Direction::Directed, true},
    {MeasureId::TransferEntropy, "transfer_entropy", true, Direction::Directed, true},
    {MeasureId::GrangerCausality, "granger_causality", true, Direction::Directed, true},
};

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<int> head(const std::vector<int>& a, int count) {
  return {a.begin(), a.begin() + count};
}

// Column ranges of the blocks, known before alignment (offsets are the
// cumulative block dimensions).
std::vector<std::vector<int>> block_column_map(const std::vector<BlockSpec>& blocks) {
  std::vector<std::vector<int>> out;
  int offset = 0;
  for (const auto& b : blocks) {
    std::vector<int> cols(static_cast<std::size_t>(b.spec.k));
    for (int j = 0; j < b.spec.k; ++j) cols[static_cast<std::size_t>(j)] = offset + j;
    out.push_back(std::move(cols));
    offset += b.spec.k;
  }
  return out;
}

void validate_request(const MeasureRequest& req) {
  const MeasureInfo& info = measure_info(req.id);
  if (info.pairwise) {
    if (req.source.empty()) {
      throw Error(Errc::InvalidArgument, std::string(info.name) + " needs a source column");
    }
  } else if (!req.source.empty()) {
    throw Error(Errc::InvalidArgument,
                std::string(info.name) + " is single-process; it rejects a source column");
  }
  if (req.target.empty()) {
    throw Error(Errc::InvalidArgument, "missing target column");
  }
  if (req.tau_source < 1 || req.tau_target < 1) {
    throw Error(Errc::InvalidArgument, "tau must be >= 1");
  }
  switch (req.id) {
    case MeasureId::ActiveInformationStorage:
    case MeasureId::CausallyConditionedEntropy:
      if (req.k < 1) throw Error(Errc::InvalidArgument, "memory length k must be >= 1");
      break;
    case MeasureId::TransferEntropy:
    case MeasureId::GrangerCausality:
      if (req.k < 1) throw Error(Errc::InvalidArgument, "memory length k must be >= 1");
      if (req.l < 1) throw Error(Errc::InvalidArgument, "memory length l must be >= 1");
      break;
    case MeasureId::DirectedInformation:
      if (req.max_window < 1) throw Error(Errc::InvalidArgument, "window K must be >= 1");
      break;
    default:
      break;
  }
  req.estimator.validate();
}

// Aligned matrix prepared for one estimator: tie-noised for the
// nearest-neighbor estimators, per-column standardized for the box kernel.
struct Prepared {
  AlignedSamples aligned;
  Eigen::MatrixXd data;
  EstimatorKind est;
};

std::uint64_t column_stream(std::uint64_t seed, const ColumnTag& tag) {
  const std::uint64_t name_hash = fnv1a(tag.column.data(), tag.column.size());
  return derive_stream(derive_stream(seed, name_hash),
                       static_cast<std::uint64_t>(tag.lag));
}

Prepared prepare(const Dataset& dataset, const std::vector<BlockSpec>& blocks,
                 const EstimatorKind& est, std::uint64_t noise_seed) {
  Prepared p{align(dataset, blocks), {}, est};
  p.data = p.aligned.rows;
  switch (est.tag) {
    case EstimatorKind::Tag::Gaussian:
      break;
    case EstimatorKind::Tag::Kernel:
      for (long c = 0; c < p.data.cols(); ++c) {
        auto col = p.data.col(c);
        const double mean = col.mean();
        const double ss = (col.array() - mean).square().sum();
        const long n = p.data.rows();
        const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        if (!(sd > 0.0)) {
          throw Error(Errc::ZeroVariance,
                      "aligned column of '" +
                          p.aligned.column_tags[static_cast<std::size_t>(c)].column +
                          "' is constant");
        }
        col = (col.array() - mean) / sd;
      }
      break;
    case EstimatorKind::Tag::Kozachenko:
    case EstimatorKind::Tag::Ksg:
      // Noise streams are keyed on column identity (name, lag) so a column
      // receives the same noise wherever it appears in a joint matrix.
      for (long c = 0; c < p.data.cols(); ++c) {
        add_tie_noise_column(
            p.data.col(c), kDefaultTieNoiseAmplitude,
            column_stream(noise_seed, p.aligned.column_tags[static_cast<std::size_t>(c)]));
      }
      break;
  }
  return p;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const std::vector<int>& cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<long>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out.col(static_cast<long>(i)) = m.col(cols[i]);
  }
  return out;
}

// Entropy of a column subset; the empty subset is the null block with H = 0.
// KSG has no entropy of its own; its entropy terms use the
// Kozachenko-Leonenko form it is built on.
double block_entropy(const Prepared& p, const std::vector<int>& cols) {
  if (cols.empty()) return 0.0;
  const Eigen::MatrixXd sub = select_columns(p.data, cols);
  switch (p.est.tag) {
    case EstimatorKind::Tag::Gaussian:
      return entropy_gaussian(sub);
    case EstimatorKind::Tag::Kernel:
      return entropy_kernel(sub, p.est.kernel_width);
    case EstimatorKind::Tag::Kozachenko:
    case EstimatorKind::Tag::Ksg:
      return entropy_knn(sub, p.est.k_nn);
  }
  throw Error(Errc::InvalidArgument, "unknown estimator tag");
}

double pearson_r(const Eigen::MatrixXd& two_cols) {
  const long n = two_cols.rows();
  const Eigen::MatrixXd centered = two_cols.rowwise() - two_cols.colwise().mean();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  const double vx = cov(0, 0), vy = cov(1, 1);
  if (!(vx > 0.0) || !(vy > 0.0)) {
    throw Error(Errc::SingularCovariance, "zero variance in correlation");
  }
  return cov(0, 1) / std::sqrt(vx * vy);
}

// Residual sum of squares of the mean-centered least-squares fit of
// `response` on `design` (the centering provides the intercept). Throws
// RankDeficient when the design loses rank.
double ols_rss(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
  const Eigen::VectorXd y = response.array() - response.mean();
  if (design.cols() == 0) return y.squaredNorm();
  const Eigen::MatrixXd x = design.rowwise() - design.colwise().mean();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < design.cols()) {
    throw Error(Errc::RankDeficient, "regressor matrix is rank deficient");
  }
  const Eigen::VectorXd beta = qr.solve(y);
  return (y - x * beta).squaredNorm();
}

}  // namespace

const std::vector<MeasureInfo>& measure_registry() { return kRegistry; }

const MeasureInfo& measure_info(MeasureId id) {
  for (const auto& info : kRegistry) {
    if (info.id == id) return info;
  }
  throw Error(Errc::InvalidArgument, "unknown measure id");
}

MeasureId parse_measure_id(const std::string& name) {
  for (const auto& info : kRegistry) {
    if (name == info.name) return info.id;
  }
  if (name == "h") return MeasureId::Entropy;
  if (name == "je") return MeasureId::JointEntropy;
  if (name == "mi") return MeasureId::MutualInformation;
  if (name == "ce") return MeasureId::ConditionalEntropy;
  if (name == "ais") return MeasureId::ActiveInformationStorage;
  if (name == "si") return MeasureId::StochasticInteraction;
  if (name == "tlmi") return MeasureId::TimeLaggedMi;
  if (name == "cce") return MeasureId::CausallyConditionedEntropy;
  if (name == "di") return MeasureId::DirectedInformation;
  if (name == "te") return MeasureId::TransferEntropy;
  if (name == "gc") return MeasureId::GrangerCausality;
  throw Error(Errc::InvalidArgument, "unknown measure '" + name + "'");
}

EstimatorKind default_estimator_for(MeasureId id) {
  switch (id) {
    case MeasureId::MutualInformation:
    case MeasureId::ActiveInformationStorage:
    case MeasureId::TimeLaggedMi:
    case MeasureId::TransferEntropy:
      return EstimatorKind::ksg();
    case MeasureId::GrangerCausality:
      return EstimatorKind::gaussian();
    default:
      return EstimatorKind::kozachenko();
  }
}

MeasurePlan measure_plan(const MeasureRequest& req) {
  validate_request(req);
  const std::string& src = req.source;
  const std::string& tgt = req.target;
  MeasurePlan plan;

  switch (req.id) {
    case MeasureId::Entropy: {
      plan.blocks = {{tgt, {1, 1, 0}, "x"}};
      const auto cols = block_column_map(plan.blocks);
      plan.groups = {{"+H(X)", {{+1.0, cols[0]}}}};
      break;
    }
    case MeasureId::JointEntropy: {
      plan.blocks = {{src, {1, 1, 0}, "x"}, {tgt, {1, 1, 0}, "y"}};
      const auto cols = block_column_map(plan.blocks);
      plan.groups = {{"+H(X,Y)", {{+1.0, concat(cols[0], cols[1])}}}};
      break;
    }
    case MeasureId::MutualInformation: {
      plan.blocks = {{src, {1, 1, 0}, "x"}, {tgt, {1, 1, 0}, "y"}};
      const auto cols = block_column_map(plan.blocks);
      plan.groups = {{"+H(X)", {{+1.0, cols[0]}}},
                     {"+H(Y)", {{+1.0, cols[1]}}},
                     {"-H(X,Y)", {{-1.0, concat(cols[0], cols[1])}}}};
      break;
    }
    case MeasureId::ConditionalEntropy: {
      plan.blocks = {{src, {1, 1, 0}, "x"}, {tgt, {1, 1, 0}, "y"}};
      const auto cols = block_column_map(plan.blocks);
      plan.groups = {{"+H(X,Y)", {{+1.0, concat(cols[0], cols[1])}}},
                     {"-H(X)", {{-1.0, cols[0]}}}};
      break;
    }
    case MeasureId::ActiveInformationStorage: {
      plan.blocks = {{tgt, {req.k, req.tau_target, -1}, "past"},
                     {tgt, {1, 1, 0}, "present"}};
      const auto cols = block_column_map(plan.blocks);
      plan.groups = {{"+H(Xpast)", {{+1.0, cols[0]}}},
                     {"+H(Xpresent)", {{+1.0, cols[1]}}},
                     {"-H(Xpast,Xpresent)", {{-1.0, concat(cols[0], cols[1])}}}};
      break;
    }
    case MeasureId::StochasticInteraction: {
      // Memory length fixed to 1.
      plan.blocks = {{src, {1, 1, 0}, "x_present"},
                     {tgt, {1, 1, 0}, "y_present"},
                     {src, {1, 1, -1}, "x_past"},
                     {tgt, {1, 1, -1}, "y_past"}};
      const auto cols = block_column_map(plan.blocks);
      const auto& xp = cols[0];
      const auto& yp = cols[1];
      const auto& xq = cols[2];
      const auto& yq = cols[3];
      plan.groups = {{"+H(X+,X)", {{+1.0, concat(xp, xq)}}},
                     {"-H(X)", {{-1.0, xq}}},
                     {"+H(Y+,Y)", {{+1.0, concat(yp, yq)}}},
                     {"-H(Y)", {{-1.0, yq}}},
                     {"-H(X+,Y+,X,Y)", {{-1.0, concat(concat(xp, yp), concat(xq, yq))}}},
                     {"+H(X,Y)", {{+1.0, concat(xq, yq)}}}};
      break;
    }
    case MeasureId::TimeLaggedMi: {
      plan.blocks = {{src, {1, 1, -1}, "x_lagged"}, {tgt, {1, 1, 0}, "y_present"}};
      const auto cols = block_column_map(plan.blocks);
      plan.groups = {{"+H(Xlag)", {{+1.0, cols[0]}}},
                     {"+H(Ypresent)", {{+1.0, cols[1]}}},
                     {"-H(Xlag,Ypresent)", {{-1.0, concat(cols[0], cols[1])}}}};
      break;
    }
    case MeasureId::CausallyConditionedEntropy: {
      // H(Y+ | Ypast(k), X(k+1) ending at the present).
      plan.blocks = {{tgt, {1, 1, 0}, "y_present"},
                     {tgt, {req.k, req.tau_target, -1}, "y_past"},
                     {src, {req.k + 1, req.tau_source, 0}, "x_block"}};
      const auto cols = block_column_map(plan.blocks);
      const auto cond = concat(cols[1], cols[2]);
      plan.groups = {{"+H(Y+,Ypast,X)", {{+1.0, concat(cols[0], cond)}}},
                     {"-H(Ypast,X)", {{-1.0, cond}}}};
      break;
    }
    case MeasureId::DirectedInformation: {
      // One shared alignment sized for the largest window; smaller-k terms
      // select column prefixes (past vectors are most-recent-first).
      const int window = req.max_window;
      plan.blocks = {{tgt, {1, 1, 0}, "y_present"},
                     {tgt, {window - 1, req.tau_target, -1}, "y_past"},
                     {src, {window, req.tau_source, 0}, "x_block"}};
      if (req.di_mode == DiMode::PooledApprox) {
        plan.blocks.push_back({tgt, {window, req.tau_target, 0}, "y_pooled"});
      }
      const auto cols = block_column_map(plan.blocks);
      const auto& yp = cols[0];
      for (int ki = 0; ki < window; ++ki) {
        const auto ypast = head(cols[1], ki);
        const auto xblk = head(cols[2], ki + 1);
        TermGroup group;
        group.label = "term_k" + std::to_string(ki);
        if (req.di_mode == DiMode::Exact) {
          group.parts = {{+1.0, concat(yp, ypast)},
                         {-1.0, ypast},
                         {-1.0, concat(concat(yp, ypast), xblk)},
                         {+1.0, concat(ypast, xblk)}};
        } else {
          group.parts = {{+1.0 / static_cast<double>(ki + 1), head(cols[3], ki + 1)},
                         {-1.0, concat(concat(yp, ypast), xblk)},
                         {+1.0, concat(ypast, xblk)}};
        }
        plan.groups.push_back(std::move(group));
      }
      break;
    }
    case MeasureId::TransferEntropy: {
      plan.blocks = {{tgt, {1, 1, 0}, "y_present"},
                     {tgt, {req.k, req.tau_target, -1}, "y_past"},
                     {src, {req.l, req.tau_source, -1}, "x_past"}};
      const auto cols = block_column_map(plan.blocks);
      const auto& yp = cols[0];
      const auto& yq = cols[1];
      const auto& xq = cols[2];
      plan.groups = {{"+H(Y+,Ypast)", {{+1.0, concat(yp, yq)}}},
                     {"-H(Ypast)", {{-1.0, yq}}},
                     {"-H(Y+,Ypast,Xpast)", {{-1.0, concat(concat(yp, yq), xq)}}},
                     {"+H(Ypast,Xpast)", {{+1.0, concat(yq, xq)}}}};
      break;
    }
    case MeasureId::GrangerCausality:
      throw Error(Errc::UnsupportedMeasure,
                  "granger_causality has no entropy decomposition");
  }
  return plan;
}

MeasureResult evaluate(const Dataset& dataset, const MeasureRequest& request) {
  validate_request(request);
  for (const auto* name : {&request.source, &request.target}) {
    if (!name->empty() && !dataset.has_column(*name)) {
      throw Error(Errc::InvalidArgument, "no column named '" + *name + "'");
    }
  }

  MeasureResult result;
  result.request = request;

  if (request.id == MeasureId::GrangerCausality) {
    // Always Gaussian/OLS; the requested estimator is ignored.
    const Prepared p = prepare(dataset,
                               {{request.target, {1, 1, 0}, "y_present"},
                                {request.target, {request.k, request.tau_target, -1}, "y_past"},
                                {request.source, {request.l, request.tau_source, -1}, "x_past"}},
                               EstimatorKind::gaussian(), request.noise_seed);
    result.n_eff = p.aligned.n_eff();
    const auto yq = p.aligned.block_columns(1);
    const auto xq = p.aligned.block_columns(2);
    const Eigen::VectorXd response = p.data.col(p.aligned.block_columns(0)[0]);
    const double rss_reduced = ols_rss(select_columns(p.data, yq), response);
    const double rss_full = ols_rss(select_columns(p.data, concat(yq, xq)), response);
    if (!(rss_reduced > 0.0) || !(rss_full > 0.0) || rss_full <= 1e-12 * rss_reduced) {
      throw Error(Errc::RankDeficient,
                  "residual variance vanishes; the log-ratio is unbounded");
    }
    result.value = std::log(rss_reduced / rss_full);
    result.terms.emplace_back("ln(RSS_reduced/RSS_full)", result.value);
    return result;
  }

  const MeasurePlan plan = measure_plan(request);
  const Prepared p = prepare(dataset, plan.blocks, request.estimator, request.noise_seed);
  result.n_eff = p.aligned.n_eff();
  const bool ksg = request.estimator.tag == EstimatorKind::Tag::Ksg;

  // MI-shaped measures go through the dedicated Kraskov estimators; the
  // gaussian MI uses the correlation closed form. Everything else sums the
  // plan's entropy terms.
  if (request.id == MeasureId::MutualInformation &&
      request.estimator.tag == EstimatorKind::Tag::Gaussian) {
    const auto cols = concat(p.aligned.block_columns(0), p.aligned.block_columns(1));
    const double r = pearson_r(select_columns(p.data, cols));
    if (std::fabs(r) >= 1.0 - 1e-12) {
      throw Error(Errc::PerfectCorrelation,
                  "|r| = 1 between '" + request.source + "' and '" + request.target + "'");
    }
    result.value = -0.5 * std::log1p(-r * r);
    result.terms.emplace_back("-0.5*ln(1-r^2)", result.value);
    return result;
  }

  if (ksg && (request.id == MeasureId::MutualInformation ||
              request.id == MeasureId::ActiveInformationStorage ||
              request.id == MeasureId::TimeLaggedMi)) {
    result.value = mi_ksg(select_columns(p.data, p.aligned.block_columns(0)),
                          select_columns(p.data, p.aligned.block_columns(1)),
                          request.estimator.k_nn);
    result.terms.emplace_back("I_ksg", result.value);
    return result;
  }

  if (ksg && request.id == MeasureId::TransferEntropy) {
    result.value = cmi_ksg(select_columns(p.data, p.aligned.block_columns(0)),
                           select_columns(p.data, p.aligned.block_columns(2)),
                           select_columns(p.data, p.aligned.block_columns(1)),
                           request.estimator.k_nn);
    result.terms.emplace_back("I(Y+;Xpast|Ypast)", result.value);
    return result;
  }

  if (ksg && request.id == MeasureId::DirectedInformation &&
      request.di_mode == DiMode::Exact) {
    const auto yp = p.aligned.block_columns(0);
    const auto ypast_all = p.aligned.block_columns(1);
    const auto xblk_all = p.aligned.block_columns(2);
    double value = 0.0;
    for (int ki = 0; ki < request.max_window; ++ki) {
      const double term = cmi_ksg(select_columns(p.data, yp),
                                  select_columns(p.data, head(xblk_all, ki + 1)),
                                  select_columns(p.data, head(ypast_all, ki)),
                                  request.estimator.k_nn);
      result.terms.emplace_back("term_k" + std::to_string(ki), term);
      value += term;
    }
    result.value = value;
    return result;
  }

  double value = 0.0;
  for (const auto& group : plan.groups) {
    double term = 0.0;
    for (const auto& part : group.parts) {
      term += part.coefficient * block_entropy(p, part.columns);
    }
    result.terms.emplace_back(group.label, term);
    value += term;
  }
  result.value = value;
  if (request.id == MeasureId::DirectedInformation &&
      request.di_mode == DiMode::PooledApprox) {
    result.note =
        "pooled_approx: H(Y+|Ypast(k)) taken as H(Y(k+1))/(k+1); "
        "the k=0 term is the unconditioned present-present MI";
  }
  if (!std::isfinite(result.value)) {
    throw Error(Errc::DomainError, "non-finite measure value");
  }
  return result;
}

}  // namespace tsinfo
