#include "cli_app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsinfo/version.hpp"

namespace tsinfo::cli {

namespace {

using nlohmann::json;

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Single: return "single";
    case Mode::Pairwise: return "pairwise";
    case Mode::Seed: return "seed";
  }
  return "?";
}

const char* di_mode_name(DiMode mode) {
  return mode == DiMode::Exact ? "exact" : "pooled-approx";
}

EstimatorKind resolve_estimator(const RunConfig& cfg, MeasureId id) {
  EstimatorKind est =
      cfg.estimator ? EstimatorKind{*cfg.estimator, cfg.kernel_width, cfg.k_nn}
                    : default_estimator_for(id);
  est.kernel_width = cfg.kernel_width;
  est.k_nn = cfg.k_nn;
  return est;
}

std::string params_for(const RunConfig& cfg, MeasureId id, const EstimatorKind& est) {
  std::vector<std::string> kv;
  switch (id) {
    case MeasureId::ActiveInformationStorage:
      kv.push_back("k=" + std::to_string(cfg.k));
      kv.push_back("tau_target=" + std::to_string(cfg.tau));
      break;
    case MeasureId::CausallyConditionedEntropy:
      kv.push_back("k=" + std::to_string(cfg.k));
      kv.push_back("tau_source=" + std::to_string(cfg.tau));
      kv.push_back("tau_target=" + std::to_string(cfg.tau));
      break;
    case MeasureId::TransferEntropy:
    case MeasureId::GrangerCausality:
      kv.push_back("k=" + std::to_string(cfg.k));
      kv.push_back("l=" + std::to_string(cfg.l));
      kv.push_back("tau_source=" + std::to_string(cfg.tau));
      kv.push_back("tau_target=" + std::to_string(cfg.tau));
      break;
    case MeasureId::DirectedInformation:
      kv.push_back("K=" + std::to_string(cfg.max_window));
      kv.push_back(std::string("di_mode=") + di_mode_name(cfg.di_mode));
      kv.push_back("tau_source=" + std::to_string(cfg.tau));
      kv.push_back("tau_target=" + std::to_string(cfg.tau));
      break;
    default:
      break;
  }
  if (id != MeasureId::GrangerCausality) {
    if (est.tag == EstimatorKind::Tag::Kozachenko || est.tag == EstimatorKind::Tag::Ksg) {
      kv.push_back("knn=" + std::to_string(est.k_nn));
    } else if (est.tag == EstimatorKind::Tag::Kernel) {
      kv.push_back("kernel_width=" + format_value(est.kernel_width));
    }
  }
  kv.push_back("noise_seed=" + std::to_string(cfg.noise_seed));
  std::string out;
  for (std::size_t i = 0; i < kv.size(); ++i) {
    if (i) out += ';';
    out += kv[i];
  }
  return out;
}

struct Task {
  MeasureId id;
  std::string source;
  std::string target;
};

std::vector<Task> enumerate_tasks(const RunConfig& cfg, const Dataset& dataset) {
  std::vector<std::string> names;
  for (const auto& col : dataset.columns()) names.push_back(col.name());

  if (cfg.mode == Mode::Seed) {
    if (cfg.seed_column.empty()) {
      throw Error(Errc::InvalidArgument, "seed mode requires --seed-column");
    }
    if (!dataset.has_column(cfg.seed_column)) {
      throw Error(Errc::InvalidArgument,
                  "seed column '" + cfg.seed_column + "' not in the input");
    }
  }

  std::vector<Task> tasks;
  for (MeasureId id : cfg.measures) {
    const MeasureInfo& info = measure_info(id);
    if (!info.pairwise) {
      for (const auto& name : names) tasks.push_back({id, "", name});
      continue;
    }
    switch (cfg.mode) {
      case Mode::Single:
        throw Error(Errc::InvalidArgument,
                    std::string(info.name) + " is pairwise; use --mode pairwise or seed");
      case Mode::Seed:
        for (const auto& name : names) {
          if (name != cfg.seed_column) tasks.push_back({id, cfg.seed_column, name});
        }
        break;
      case Mode::Pairwise:
        if (info.direction == Direction::Directed) {
          for (const auto& a : names) {
            for (const auto& b : names) {
              if (a != b) tasks.push_back({id, a, b});
            }
          }
        } else {
          // One row per unordered pair, lexicographically oriented.
          for (std::size_t i = 0; i < names.size(); ++i) {
            for (std::size_t j = i + 1; j < names.size(); ++j) {
              const auto& a = std::min(names[i], names[j]);
              const auto& b = std::max(names[i], names[j]);
              tasks.push_back({id, a, b});
            }
          }
        }
        break;
    }
  }
  return tasks;
}

}  // namespace

Dataset load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  std::string line;
  auto next_line = [&](std::string& out) -> bool {
    if (!std::getline(in, out)) return false;
    if (!out.empty() && out.back() == '\r') out.pop_back();
    return true;
  };
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.push_back("");
    return cells;
  };

  if (!next_line(line)) throw Error(Errc::ParseError, "empty file '" + path + "'");
  const std::vector<std::string> header = split(line);
  if (header.empty()) throw Error(Errc::ParseError, "missing header row");
  std::set<std::string> seen;
  for (const auto& name : header) {
    if (name.empty()) throw Error(Errc::ParseError, "empty column name in header");
    if (!seen.insert(name).second) {
      throw Error(Errc::DuplicateHeader, "duplicate column name '" + name + "'");
    }
  }

  std::vector<std::vector<double>> columns(header.size());
  long file_row = 1;  // header is row 1
  while (next_line(line)) {
    ++file_row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(Errc::RaggedRows,
                  "row " + std::to_string(file_row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      double value = 0.0;
      const char* begin = cell.data();
      const char* end = begin + cell.size();
      const auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw Error(Errc::ParseError, "row " + std::to_string(file_row) +
                                          " column " + header[c] + ": '" + cell +
                                          "' is not a finite number");
      }
      columns[c].push_back(value);
    }
  }
  if (columns.empty() || columns[0].size() < 2) {
    throw Error(Errc::ParseError, "need at least 2 data rows");
  }
  std::vector<TimeSeries> series;
  series.reserve(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    series.emplace_back(std::move(columns[c]), header[c]);
  }
  return Dataset(std::move(series));
}

RunOutput run(const RunConfig& config, const Dataset& dataset) {
  if (config.measures.empty()) {
    throw Error(Errc::InvalidArgument, "no measures requested");
  }
  const std::vector<Task> tasks = enumerate_tasks(config, dataset);

  // Standardize once per column; a degenerate column poisons only the rows
  // that touch it.
  std::map<std::string, TimeSeries> standardized;
  std::map<std::string, std::string> column_errors;
  for (const auto& col : dataset.columns()) {
    try {
      standardized.emplace(col.name(), standardize(col));
    } catch (const Error& e) {
      column_errors.emplace(col.name(), to_string(e.code()));
    }
  }

  RunOutput out;
  for (const auto& task : tasks) {
    const EstimatorKind est = resolve_estimator(config, task.id);
    ResultRow row;
    row.source = task.source;
    row.target = task.target;
    row.measure = measure_info(task.id).name;
    row.estimator = task.id == MeasureId::GrangerCausality
                        ? "gaussian"
                        : to_string(est.tag);
    row.params = params_for(config, task.id, est);

    std::vector<TimeSeries> needed;
    for (const auto* name : {&task.source, &task.target}) {
      if (name->empty()) continue;
      if (auto it = column_errors.find(*name); it != column_errors.end()) {
        row.error = it->second;
        break;
      }
      needed.push_back(standardized.at(*name));
    }
    if (row.error.empty()) {
      try {
        MeasureRequest req;
        req.id = task.id;
        req.source = task.source;
        req.target = task.target;
        req.estimator = est;
        req.k = config.k;
        req.l = config.l;
        req.tau_source = config.tau;
        req.tau_target = config.tau;
        req.max_window = config.max_window;
        req.di_mode = config.di_mode;
        req.noise_seed = config.noise_seed;
        const MeasureResult res = evaluate(Dataset(std::move(needed)), req);
        row.value = res.value;
        row.n_eff = res.n_eff;
      } catch (const Error& e) {
        row.error = to_string(e.code());
      }
    }
    out.rows.push_back(std::move(row));
  }

  std::sort(out.rows.begin(), out.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.source != b.source) return a.source < b.source;
    if (a.target != b.target) return a.target < b.target;
    return a.measure < b.measure;
  });

  // Min/max per measure over the rows that produced a value.
  std::map<std::string, MeasureSummary> summary;
  for (const auto& row : out.rows) {
    if (!row.value) continue;
    auto it = summary.find(row.measure);
    if (it == summary.end()) {
      summary.emplace(row.measure, MeasureSummary{row.measure, row, row});
    } else {
      if (*row.value < *it->second.min_row.value) it->second.min_row = row;
      if (*row.value > *it->second.max_row.value) it->second.max_row = row;
    }
  }
  for (auto& [name, entry] : summary) out.summary.push_back(entry);
  return out;
}

namespace {

std::string config_comment(const RunConfig& cfg) {
  std::string measures;
  for (std::size_t i = 0; i < cfg.measures.size(); ++i) {
    if (i) measures += ',';
    measures += measure_info(cfg.measures[i]).name;
  }
  std::string s = "mode=" + std::string(mode_name(cfg.mode));
  if (!cfg.seed_column.empty()) s += " seed_column=" + cfg.seed_column;
  s += " measures=" + measures;
  s += " estimator=" + std::string(cfg.estimator ? to_string(*cfg.estimator) : "per-measure-default");
  s += " k=" + std::to_string(cfg.k) + " l=" + std::to_string(cfg.l) +
       " tau=" + std::to_string(cfg.tau) + " K=" + std::to_string(cfg.max_window) +
       " knn=" + std::to_string(cfg.k_nn) + " kernel_width=" + format_value(cfg.kernel_width) +
       " di_mode=" + di_mode_name(cfg.di_mode) +
       " noise_seed=" + std::to_string(cfg.noise_seed) +
       " standardization=per-column";
  return s;
}

}  // namespace

std::string render_csv(const RunConfig& config, const RunOutput& output) {
  std::string s;
  s += "# tsinfo " + std::string(kVersion) + "\n";
  s += "# " + config_comment(config) + "\n";
  s += "source,target,measure,estimator,value_nats,n_eff,params\n";
  for (const auto& row : output.rows) {
    s += row.source + "," + row.target + "," + row.measure + "," + row.estimator + ",";
    if (row.value) {
      s += format_value(*row.value) + "," + std::to_string(row.n_eff);
    } else {
      s += row.error + ",0";
    }
    s += "," + row.params + "\n";
  }
  for (const auto& entry : output.summary) {
    s += "# summary measure=" + entry.measure;
    s += " min_source=" + entry.min_row.source + " min_target=" + entry.min_row.target +
         " min_value=" + format_value(*entry.min_row.value);
    s += " max_source=" + entry.max_row.source + " max_target=" + entry.max_row.target +
         " max_value=" + format_value(*entry.max_row.value);
    s += "\n";
  }
  return s;
}

namespace {

json config_json(const RunConfig& cfg) {
  json j;
  j["input"] = cfg.input_path;
  j["mode"] = mode_name(cfg.mode);
  if (!cfg.seed_column.empty()) j["seed_column"] = cfg.seed_column;
  json measures = json::array();
  for (MeasureId id : cfg.measures) measures.push_back(measure_info(id).name);
  j["measures"] = measures;
  j["estimator"] = cfg.estimator ? to_string(*cfg.estimator) : "per-measure-default";
  j["k"] = cfg.k;
  j["l"] = cfg.l;
  j["tau"] = cfg.tau;
  j["K"] = cfg.max_window;
  j["knn"] = cfg.k_nn;
  j["kernel_width"] = cfg.kernel_width;
  j["di_mode"] = di_mode_name(cfg.di_mode);
  j["noise_seed"] = cfg.noise_seed;
  j["standardization"] = "per-column";
  return j;
}

json row_json(const ResultRow& row) {
  json j;
  j["source"] = row.source;
  j["target"] = row.target;
  j["measure"] = row.measure;
  j["estimator"] = row.estimator;
  if (row.value) {
    j["value_nats"] = *row.value;
    j["n_eff"] = row.n_eff;
  } else {
    j["value_nats"] = nullptr;
    j["n_eff"] = 0;
    j["error"] = row.error;
  }
  j["params"] = row.params;
  return j;
}

}  // namespace

std::string render_json(const RunConfig& config, const RunOutput& output) {
  json j;
  j["tsinfo_version"] = kVersion;
  j["config"] = config_json(config);
  json rows = json::array();
  for (const auto& row : output.rows) rows.push_back(row_json(row));
  j["results"] = rows;
  json summary = json::array();
  for (const auto& entry : output.summary) {
    json e;
    e["measure"] = entry.measure;
    e["min"] = row_json(entry.min_row);
    e["max"] = row_json(entry.max_row);
    summary.push_back(e);
  }
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

std::string render_metadata(const RunConfig& config) {
  json j;
  j["tsinfo_version"] = kVersion;
  j["config"] = config_json(config);
  j["defaults"] = {{"k", 1},           {"l", 1},
                   {"tau", 1},         {"K", 5},
                   {"knn", 4},         {"kernel_width", 0.5},
                   {"di_mode", "exact"}, {"noise_seed", 0}};
  j["notes"] = {
      {"units", "nats"},
      {"standardization", "each input column is standardized to mean 0, sd 1 before estimation"},
      {"tie_noise", "rank-keyed uniform noise, amplitude 1e-8 of column sd, splitmix64 streams"},
      {"generator", "splitmix64 + Box-Muller"},
      {"di_k0_term",
       "the K-window sum starts at the unconditioned present-present MI (null past)"},
  };
  return j.dump(2) + "\n";
}

int run_main(int argc, const char* const* argv) {
  CLI::App app{"Information-theoretic time-series measures over CSV inputs"};
  RunConfig cfg;
  std::string measures_arg;
  std::string estimator_arg;
  std::string mode_arg = "pairwise";
  std::string di_mode_arg = "exact";
  std::string format_arg = "csv";

  app.add_option("--input", cfg.input_path, "input CSV (header row, one column per process)")
      ->required();
  app.add_option("--output", cfg.output_path,
                 "output path (default stdout; a .meta.json sidecar is written next to it)");
  app.add_option("--mode", mode_arg, "single | pairwise | seed")
      ->check(CLI::IsMember({"single", "pairwise", "seed"}));
  app.add_option("--seed-column", cfg.seed_column, "source column for seed mode");
  app.add_option("--measures", measures_arg,
                 "comma list of measure ids (default: all eleven)");
  app.add_option("--estimator", estimator_arg,
                 "gaussian | kernel | kozachenko | ksg (default: per-measure)")
      ->check(CLI::IsMember({"gaussian", "kernel", "kozachenko", "ksg"}));
  app.add_option("--k", cfg.k, "target memory length");
  app.add_option("--l", cfg.l, "source memory length");
  app.add_option("--tau", cfg.tau, "embedding lag for source and target");
  app.add_option("--K", cfg.max_window, "directed-information window");
  app.add_option("--knn", cfg.k_nn, "nearest-neighbor count");
  app.add_option("--kernel-width", cfg.kernel_width, "box kernel half-width (sd units)");
  app.add_option("--di-mode", di_mode_arg, "exact | pooled-approx")
      ->check(CLI::IsMember({"exact", "pooled-approx", "pooled_approx"}));
  app.add_option("--noise-seed", cfg.noise_seed, "tie-breaking noise seed");
  app.add_option("--format", format_arg, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    cfg.mode = mode_arg == "single" ? Mode::Single
               : mode_arg == "seed" ? Mode::Seed
                                    : Mode::Pairwise;
    cfg.di_mode = di_mode_arg == "exact" ? DiMode::Exact : DiMode::PooledApprox;
    cfg.format = format_arg == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (!estimator_arg.empty()) cfg.estimator = parse_estimator_tag(estimator_arg);
    if (measures_arg.empty()) {
      for (const auto& info : measure_registry()) cfg.measures.push_back(info.id);
    } else {
      std::stringstream ss(measures_arg);
      std::string item;
      std::set<MeasureId> seen;
      while (std::getline(ss, item, ',')) {
        const MeasureId id = parse_measure_id(item);
        if (seen.insert(id).second) cfg.measures.push_back(id);
      }
      if (cfg.measures.empty()) {
        throw Error(Errc::InvalidArgument, "empty --measures list");
      }
    }

    const Dataset dataset = load_csv(cfg.input_path);
    const RunOutput output = run(cfg, dataset);
    const std::string rendered = cfg.format == OutputFormat::Json
                                     ? render_json(cfg, output)
                                     : render_csv(cfg, output);
    if (cfg.output_path.empty()) {
      std::fwrite(rendered.data(), 1, rendered.size(), stdout);
    } else {
      std::ofstream out(cfg.output_path, std::ios::binary);
      if (!out) throw Error(Errc::ParseError, "cannot write '" + cfg.output_path + "'");
      out << rendered;
      std::ofstream meta(cfg.output_path + ".meta.json", std::ios::binary);
      meta << render_metadata(cfg);
    }

    for (const auto& row : output.rows) {
      if (row.value) return 0;
    }
    return 2;  // nothing computable
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace tsinfo::cli
