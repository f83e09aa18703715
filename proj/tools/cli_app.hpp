#ifndef TSINFO_CLI_APP_HPP
#define TSINFO_CLI_APP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsinfo/measures.hpp"
#include "tsinfo/series.hpp"

namespace tsinfo::cli {

enum class Mode { Single, Pairwise, Seed };
enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string input_path;
  std::string output_path;  // empty: stdout, no sidecar
  std::vector<MeasureId> measures;
  std::optional<EstimatorKind::Tag> estimator;  // unset: per-measure default
  int k = 1;
  int l = 1;
  int tau = 1;
  int max_window = 5;
  int k_nn = 4;
  double kernel_width = 0.5;
  DiMode di_mode = DiMode::Exact;
  Mode mode = Mode::Pairwise;
  std::string seed_column;
  std::uint64_t noise_seed = 0;
  OutputFormat format = OutputFormat::Csv;
};

/// One output row. Either `value` is set or `error` names the typed failure;
/// single-process rows leave `source` empty.
struct ResultRow {
  std::string source;
  std::string target;
  std::string measure;
  std::string estimator;
  std::optional<double> value;
  long n_eff = 0;
  std::string params;
  std::string error;
};

/// Per-measure extremes over the computed rows (the sweep report).
struct MeasureSummary {
  std::string measure;
  ResultRow min_row;
  ResultRow max_row;
};

struct RunOutput {
  std::vector<ResultRow> rows;          // lexicographic (source, target, measure)
  std::vector<MeasureSummary> summary;  // per measure with >= 1 value
};

/// Header row of unique column names, numeric cells, >= 2 data rows.
/// Locale-independent (decimal point only). Throws ParseError / RaggedRows /
/// DuplicateHeader with 1-based file row and column name.
Dataset load_csv(const std::string& path);

/// Columns are standardized per column before any estimator; per-pair
/// failures become error rows rather than aborting the sweep.
RunOutput run(const RunConfig& config, const Dataset& dataset);

std::string render_csv(const RunConfig& config, const RunOutput& output);
std::string render_json(const RunConfig& config, const RunOutput& output);
std::string render_metadata(const RunConfig& config);

/// Full command-line entry point. Exit codes: 0 success (even with per-pair
/// error rows), 1 config or I/O error, 2 no computable pair.
int run_main(int argc, const char* const* argv);

}  // namespace tsinfo::cli

#endif  // TSINFO_CLI_APP_HPP
