#include "tsinfo/discrete_plugin.hpp"

#include <cmath>

#include "tsinfo/embedding.hpp"

namespace tsinfo {

namespace {

struct PooledPmf {
  DiscretePmf pmf;
  long n_eff;
};

PooledPmf pool(const std::vector<DiscreteSeries>& sequences,
               const std::vector<BlockSpec>& blocks) {
  if (sequences.empty()) {
    throw Error(Errc::InvalidArgument, "need at least one sequence");
  }
  // Symbols ride through the real-valued alignment machinery exactly.
  std::vector<TimeSeries> columns;
  columns.reserve(sequences.size());
  for (const auto& seq : sequences) {
    std::vector<double> values(seq.symbols().begin(), seq.symbols().end());
    columns.emplace_back(std::move(values), seq.name());
  }
  const Dataset dataset{std::move(columns)};
  const AlignedSamples aligned = align(dataset, blocks);

  auto alphabet_of = [&](const std::string& name) -> int {
    for (const auto& seq : sequences) {
      if (seq.name() == name) return seq.alphabet();
    }
    throw Error(Errc::InvalidArgument, "no sequence named '" + name + "'");
  };
  std::vector<int> alphabet_sizes;
  alphabet_sizes.reserve(aligned.column_tags.size());
  for (const auto& tag : aligned.column_tags) {
    alphabet_sizes.push_back(alphabet_of(tag.column));
  }

  std::map<std::vector<int>, long> counts;
  const long n = aligned.n_eff();
  std::vector<int> key(aligned.column_tags.size());
  for (long r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < key.size(); ++c) {
      key[c] = static_cast<int>(aligned.rows(r, static_cast<long>(c)));
    }
    ++counts[key];
  }
  std::map<std::vector<int>, double> table;
  for (const auto& [k, count] : counts) {
    table[k] = static_cast<double>(count) / static_cast<double>(n);
  }
  return {DiscretePmf(std::move(alphabet_sizes), std::move(table)), n};
}

}  // namespace

DiscretePmf::DiscretePmf(std::vector<int> alphabet_sizes,
                         std::map<std::vector<int>, double> table)
    : alphabet_sizes_(std::move(alphabet_sizes)), table_(std::move(table)) {
  double total = 0.0;
  for (const auto& [key, prob] : table_) {
    if (key.size() != alphabet_sizes_.size()) {
      throw Error(Errc::InvalidArgument, "pmf key dimension mismatch");
    }
    for (std::size_t c = 0; c < key.size(); ++c) {
      if (key[c] < 0 || key[c] >= alphabet_sizes_[c]) {
        throw Error(Errc::OutOfRange, "pmf symbol outside its alphabet");
      }
    }
    if (prob < 0.0) throw Error(Errc::InvalidArgument, "negative pmf entry");
    total += prob;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw Error(Errc::InvalidArgument,
                "pmf sums to " + std::to_string(total) + ", expected 1");
  }
}

double DiscretePmf::entropy(const std::vector<int>& columns) const {
  if (columns.empty()) return 0.0;
  std::map<std::vector<int>, double> marginal;
  std::vector<int> projected(columns.size());
  for (const auto& [key, prob] : table_) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      projected[i] = key[static_cast<std::size_t>(columns[i])];
    }
    marginal[projected] += prob;
  }
  double h = 0.0;
  for (const auto& [key, prob] : marginal) {
    if (prob > 0.0) h -= prob * std::log(prob);
  }
  return h;
}

DiscretePmf empirical_pmf(const std::vector<DiscreteSeries>& sequences,
                          const std::vector<BlockSpec>& blocks) {
  return pool(sequences, blocks).pmf;
}

MeasureResult plugin_discrete_measure(const std::vector<DiscreteSeries>& sequences,
                                      const MeasureRequest& request) {
  if (request.id == MeasureId::GrangerCausality) {
    throw Error(Errc::UnsupportedMeasure,
                "granger_causality is continuous-only; no plug-in form");
  }
  for (const auto* name : {&request.source, &request.target}) {
    if (name->empty()) continue;
    bool found = false;
    for (const auto& seq : sequences) found = found || seq.name() == *name;
    if (!found) throw Error(Errc::InvalidArgument, "no sequence named '" + *name + "'");
  }

  const MeasurePlan plan = measure_plan(request);
  const PooledPmf pooled = pool(sequences, plan.blocks);

  MeasureResult result;
  result.request = request;
  result.n_eff = pooled.n_eff;
  double value = 0.0;
  for (const auto& group : plan.groups) {
    double term = 0.0;
    for (const auto& part : group.parts) {
      term += part.coefficient * pooled.pmf.entropy(part.columns);
    }
    result.terms.emplace_back(group.label, term);
    value += term;
  }
  result.value = value;
  return result;
}

}  // namespace tsinfo
