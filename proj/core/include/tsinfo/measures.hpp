#ifndef TSINFO_MEASURES_HPP
#define TSINFO_MEASURES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tsinfo/embedding.hpp"
#include "tsinfo/estimators.hpp"
#include "tsinfo/series.hpp"

namespace tsinfo {

enum class MeasureId {
  Entropy,
  JointEntropy,
  MutualInformation,
  ConditionalEntropy,
  ActiveInformationStorage,
  StochasticInteraction,
  TimeLaggedMi,
  CausallyConditionedEntropy,
  DirectedInformation,
  TransferEntropy,
  GrangerCausality,
};

enum class DiMode { Exact, PooledApprox };

enum class Direction { None, Undirected, Directed };

struct MeasureInfo {
  MeasureId id;
  const char* name;  // canonical id, e.g. "transfer_entropy"
  bool pairwise;
  Direction direction;
  bool order_dependent;
};

const std::vector<MeasureInfo>& measure_registry();
const MeasureInfo& measure_info(MeasureId id);

/// Accepts canonical ids and the usual short aliases (mi, te, gc, ...).
MeasureId parse_measure_id(const std::string& name);

/// Per-measure default: ksg for the MI-shaped measures, kozachenko for the
/// entropy-difference ones, gaussian for Granger causality.
EstimatorKind default_estimator_for(MeasureId id);

/// One measure evaluation. `source` stays empty for the single-process
/// measures (entropy, active information storage).
struct MeasureRequest {
  MeasureId id = MeasureId::Entropy;
  std::string source;
  std::string target;
  EstimatorKind estimator = EstimatorKind::ksg();
  int k = 1;            // target memory length
  int l = 1;            // source memory length (TE/GC)
  int tau_source = 1;
  int tau_target = 1;
  int max_window = 5;   // K, directed-information window
  DiMode di_mode = DiMode::Exact;
  std::uint64_t noise_seed = 0;
};

struct MeasureResult {
  double value = 0.0;   // nats
  long n_eff = 0;
  MeasureRequest request;
  /// Signed contributions; for composite measures they sum to `value`
  /// exactly (the value is computed as this sum).
  std::vector<std::pair<std::string, double>> terms;
  std::string note;
};

/// Evaluate one measure on a dataset. Pure function of
/// (dataset, request); every entropy/CMI term of a composite measure is
/// computed on one shared alignment.
MeasureResult evaluate(const Dataset& dataset, const MeasureRequest& request);

/// One weighted entropy contribution: coefficient * H(columns of the
/// aligned matrix). Empty column sets are the null block, H = 0.
struct EntropyTermSpec {
  double coefficient = 1.0;
  std::vector<int> columns;
};

/// A reported term of a measure (one breakdown entry), itself a sum of
/// weighted entropies.
struct TermGroup {
  std::string label;
  std::vector<EntropyTermSpec> parts;
};

/// How a measure decomposes over one shared alignment: the embedding blocks
/// to align and the weighted entropy terms to sum. The continuous pipeline
/// and the discrete plug-in calculator both evaluate this same plan, so they
/// pool exactly the same samples. Granger causality has no entropy
/// decomposition and throws UnsupportedMeasure.
struct MeasurePlan {
  std::vector<BlockSpec> blocks;
  std::vector<TermGroup> groups;
};

MeasurePlan measure_plan(const MeasureRequest& request);

}  // namespace tsinfo

#endif  // TSINFO_MEASURES_HPP
