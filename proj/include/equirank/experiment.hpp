// Copyright 2026 The Equirank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "equirank/csv.hpp"
#include "equirank/data.hpp"
#include "equirank/reranker.hpp"

namespace equirank {

// Config-driven experiment: a dataset, a replay mode, one policy and one
// attention model, with per-iteration metrics written as CSV.
struct ExperimentConfig {
  enum class Dataset { synthetic, listings, querylog };
  enum class Mode { single_query, multi_query, stream };

  Dataset dataset = Dataset::synthetic;
  SyntheticShape shape = SyntheticShape::uniform(100);
  std::string listings_path;
  std::string id_column = "id";
  std::vector<std::string> rating_columns;
  std::string querylog_path;

  Mode mode = Mode::single_query;
  long iterations = 1;
  long sequence_repeats = 1;

  RerankPolicy policy;
  AttentionModel attention;
  std::string output_path;
};

using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad number for '" + key + "': '" + value + "'");
  }
}

inline long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad integer for '" + key + "': '" + value + "'");
  }
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

// Flat key = value lines; '#' starts a comment, blank lines are skipped.
// Duplicate keys are rejected.
inline KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               " is not 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: empty key at line " + std::to_string(lineno));
    if (!kv.emplace(key, value).second)
      throw std::runtime_error("config: duplicate key '" + key + "'");
  }
  return kv;
}

// "key=value" override from the command line; replaces or adds the key.
inline void apply_override(KeyValues& kv, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("override '" + assignment + "' is not key=value");
  kv[detail::trim(assignment.substr(0, eq))] = detail::trim(assignment.substr(eq + 1));
}

// Resolves and validates a full configuration. Unknown keys and keys that
// do not apply to the selected dataset/policy are rejected.
inline ExperimentConfig parse_config(const KeyValues& kv) {
  ExperimentConfig cfg;
  std::set<std::string> allowed{"dataset", "mode", "policy", "attention", "output_path",
                                "quality_rank", "feasibility_tol"};
  const auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  const auto require = [&](const std::string& key) -> const std::string& {
    const std::string* v = get(key);
    if (!v) throw std::runtime_error("config: missing required key '" + key + "'");
    return *v;
  };

  // dataset
  const std::string& dataset = require("dataset");
  if (dataset == "synthetic") {
    cfg.dataset = ExperimentConfig::Dataset::synthetic;
    allowed.insert({"shape", "subjects", "decay"});
    cfg.shape.n = 100;
    if (const auto* v = get("subjects"))
      cfg.shape.n = static_cast<int>(detail::parse_long("subjects", *v));
    const std::string shape = get("shape") ? *get("shape") : "uniform";
    if (shape == "uniform") cfg.shape.kind = SyntheticShape::Kind::uniform;
    else if (shape == "linear") cfg.shape.kind = SyntheticShape::Kind::linear;
    else if (shape == "exponential") cfg.shape.kind = SyntheticShape::Kind::exponential;
    else throw std::runtime_error("config: unknown shape '" + shape + "'");
    if (const auto* v = get("decay")) cfg.shape.decay = detail::parse_double("decay", *v);
    if (cfg.shape.n < 1) throw std::runtime_error("config: subjects must be >= 1");
    if (cfg.shape.kind == SyntheticShape::Kind::exponential &&
        !(cfg.shape.decay > 0.0 && cfg.shape.decay < 1.0))
      throw std::runtime_error("config: decay must be in (0,1)");
  } else if (dataset == "listings") {
    cfg.dataset = ExperimentConfig::Dataset::listings;
    allowed.insert({"listings_path", "id_column", "rating_columns"});
    cfg.listings_path = require("listings_path");
    if (const auto* v = get("id_column")) cfg.id_column = *v;
    cfg.rating_columns = detail::split_list(require("rating_columns"));
    if (cfg.rating_columns.empty())
      throw std::runtime_error("config: rating_columns must name at least one column");
  } else if (dataset == "querylog") {
    cfg.dataset = ExperimentConfig::Dataset::querylog;
    allowed.insert("querylog_path");
    cfg.querylog_path = require("querylog_path");
  } else {
    throw std::runtime_error("config: unknown dataset '" + dataset + "'");
  }

  // mode
  const std::string& mode = require("mode");
  if (mode == "single_query") {
    cfg.mode = ExperimentConfig::Mode::single_query;
    allowed.insert("iterations");
    cfg.iterations = detail::parse_long("iterations", require("iterations"));
    if (cfg.iterations < 1) throw std::runtime_error("config: iterations must be >= 1");
    if (cfg.dataset == ExperimentConfig::Dataset::querylog)
      throw std::runtime_error("config: single_query mode needs a synthetic or listings dataset");
    if (cfg.dataset == ExperimentConfig::Dataset::listings && cfg.rating_columns.size() != 1)
      throw std::runtime_error("config: single_query mode needs exactly one rating column");
  } else if (mode == "multi_query") {
    cfg.mode = ExperimentConfig::Mode::multi_query;
    allowed.insert("sequence_repeats");
    cfg.sequence_repeats = detail::parse_long("sequence_repeats", require("sequence_repeats"));
    if (cfg.sequence_repeats < 1)
      throw std::runtime_error("config: sequence_repeats must be >= 1");
    if (cfg.dataset == ExperimentConfig::Dataset::querylog)
      throw std::runtime_error("config: multi_query mode needs a synthetic or listings dataset");
  } else if (mode == "stream") {
    cfg.mode = ExperimentConfig::Mode::stream;
    if (cfg.dataset != ExperimentConfig::Dataset::querylog)
      throw std::runtime_error("config: stream mode needs a querylog dataset");
  } else {
    throw std::runtime_error("config: unknown mode '" + mode + "'");
  }

  // attention
  const std::string& attention = require("attention");
  if (attention == "singular") {
    cfg.attention = AttentionModel::singular();
  } else if (attention == "geometric") {
    allowed.insert({"attention_p", "attention_cutoff"});
    double p = 0.5;
    int cutoff = 5;
    if (const auto* v = get("attention_p")) p = detail::parse_double("attention_p", *v);
    if (const auto* v = get("attention_cutoff"))
      cutoff = static_cast<int>(detail::parse_long("attention_cutoff", *v));
    if (!(p > 0.0 && p <= 1.0)) throw std::runtime_error("config: attention_p must be in (0,1]");
    if (cutoff < 1) throw std::runtime_error("config: attention_cutoff must be >= 1");
    cfg.attention = AttentionModel::geometric(p, cutoff);
  } else {
    throw std::runtime_error("config: unknown attention model '" + attention + "'");
  }

  // quality rank defaults to the attention cutoff
  int quality_rank = cfg.attention.kind == AttentionModel::Kind::singular
                         ? 1
                         : cfg.attention.cutoff;
  if (const auto* v = get("quality_rank"))
    quality_rank = static_cast<int>(detail::parse_long("quality_rank", *v));
  if (quality_rank < 1) throw std::runtime_error("config: quality_rank must be >= 1");

  double feasibility_tol = 1e-7;
  if (const auto* v = get("feasibility_tol"))
    feasibility_tol = detail::parse_double("feasibility_tol", *v);
  if (!(feasibility_tol >= 0.0))
    throw std::runtime_error("config: feasibility_tol must be >= 0");

  // policy
  const std::string& policy = require("policy");
  if (policy == "relevance") {
    cfg.policy = RerankPolicy::relevance();
  } else if (policy == "objective") {
    cfg.policy = RerankPolicy::objective();
  } else if (policy == "ilp") {
    allowed.insert({"theta", "candidate_size"});
    double theta = 1.0;
    int candidate_size = 100;
    if (const auto* v = get("theta")) theta = detail::parse_double("theta", *v);
    if (const auto* v = get("candidate_size"))
      candidate_size = static_cast<int>(detail::parse_long("candidate_size", *v));
    try {
      cfg.policy = RerankPolicy::ilp(theta, candidate_size, quality_rank, feasibility_tol);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("config: ") + e.what());
    }
  } else {
    throw std::runtime_error("config: unknown policy '" + policy + "'");
  }
  cfg.policy.quality.k = quality_rank;
  cfg.policy.feasibility_tol = feasibility_tol;

  if (const auto* v = get("output_path")) cfg.output_path = *v;

  for (const auto& [key, value] : kv)
    if (!allowed.count(key)) throw std::runtime_error("config: unknown key '" + key + "'");
  return cfg;
}

// Requests replayed by the experiment, in iteration order.
inline std::vector<RankingRequest> dataset_requests(const ExperimentConfig& cfg) {
  switch (cfg.dataset) {
    case ExperimentConfig::Dataset::synthetic:
      return {generate(cfg.shape)};
    case ExperimentConfig::Dataset::listings:
      return load_listings(cfg.listings_path, cfg.id_column, cfg.rating_columns);
    case ExperimentConfig::Dataset::querylog:
      return load_querylog(cfg.querylog_path);
  }
  throw std::logic_error("unreachable");
}

struct RunResult {
  std::vector<IterationRecord> records;
  Ledger ledger;
  double total_ms = 0.0;
};

inline RunResult run_experiment(const ExperimentConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  const std::vector<RankingRequest> requests = dataset_requests(cfg);

  RunResult result;
  const auto run_one = [&](const RankingRequest& request) {
    result.records.push_back(step(result.ledger, request, cfg.policy, cfg.attention).record);
  };

  switch (cfg.mode) {
    case ExperimentConfig::Mode::single_query:
      if (requests.size() != 1)
        throw std::runtime_error("single_query mode needs exactly one request");
      for (long i = 0; i < cfg.iterations; ++i) run_one(requests.front());
      break;
    case ExperimentConfig::Mode::multi_query:
      for (long rep = 0; rep < cfg.sequence_repeats; ++rep)
        for (const auto& request : requests) run_one(request);
      break;
    case ExperimentConfig::Mode::stream:
      for (const auto& request : requests) run_one(request);
      break;
  }

  result.total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

inline void write_metrics_csv(std::ostream& out, const std::vector<IterationRecord>& records) {
  out << "iteration,unfairness,ndcg_quality,feasible,solve_ms\n";
  char ms[32];
  for (const auto& r : records) {
    std::snprintf(ms, sizeof(ms), "%.3f", r.solve_ms);
    out << r.iteration << ',' << csv::format_double(r.unfairness) << ','
        << csv::format_double(r.ndcg_quality) << ',' << (r.solver_feasible ? 1 : 0) << ','
        << ms << '\n';
  }
}

inline void write_ledger_csv(std::ostream& out, const Ledger& ledger) {
  out << "subject_id,cum_attention,cum_relevance\n";
  for (const auto& [id, e] : ledger.entries())
    out << csv::escape(id) << ',' << csv::format_double(e.attention) << ','
        << csv::format_double(e.relevance) << '\n';
}

// Writes metrics.csv, ledger.csv and summary.txt under cfg.output_path.
inline void write_run_outputs(const ExperimentConfig& cfg, const RunResult& result) {
  if (cfg.output_path.empty())
    throw std::runtime_error("config: missing required key 'output_path'");
  const std::filesystem::path dir(cfg.output_path);
  std::filesystem::create_directories(dir);

  const auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
    return out;
  };

  {
    auto out = open("metrics.csv");
    write_metrics_csv(out, result.records);
  }
  {
    auto out = open("ledger.csv");
    write_ledger_csv(out, result.ledger);
  }
  {
    auto out = open("summary.txt");
    double min_q = 1.0, max_q = 0.0;
    for (const auto& r : result.records) {
      min_q = std::min(min_q, r.ndcg_quality);
      max_q = std::max(max_q, r.ndcg_quality);
    }
    if (result.records.empty()) min_q = max_q = 1.0;
    out << "iterations=" << result.records.size() << '\n'
        << "final_unfairness="
        << csv::format_double(result.records.empty() ? 0.0
                                                     : result.records.back().unfairness)
        << '\n'
        << "min_ndcg_quality=" << csv::format_double(min_q) << '\n'
        << "max_ndcg_quality=" << csv::format_double(max_q) << '\n';
    char ms[32];
    std::snprintf(ms, sizeof(ms), "%.3f", result.total_ms);
    out << "total_runtime_ms=" << ms << '\n';
  }
}

inline std::string policy_label(const RerankPolicy& policy) {
  switch (policy.kind) {
    case RerankPolicy::Kind::relevance:
      return "relevance";
    case RerankPolicy::Kind::objective:
      return "objective";
    case RerankPolicy::Kind::ilp: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "ilp_theta%g", policy.quality.theta);
      return buf;
    }
  }
  return "unknown";
}

// Everything that must match for runs to be comparable side by side.
inline std::string dataset_signature(const ExperimentConfig& cfg) {
  std::ostringstream sig;
  switch (cfg.dataset) {
    case ExperimentConfig::Dataset::synthetic:
      sig << "synthetic:" << static_cast<int>(cfg.shape.kind) << ':' << cfg.shape.n << ':'
          << csv::format_double(cfg.shape.decay);
      break;
    case ExperimentConfig::Dataset::listings:
      sig << "listings:" << cfg.listings_path << ':' << cfg.id_column;
      for (const auto& c : cfg.rating_columns) sig << ':' << c;
      break;
    case ExperimentConfig::Dataset::querylog:
      sig << "querylog:" << cfg.querylog_path;
      break;
  }
  sig << "|mode:" << static_cast<int>(cfg.mode) << ':' << cfg.iterations << ':'
      << cfg.sequence_repeats;
  sig << "|attention:" << static_cast<int>(cfg.attention.kind) << ':'
      << csv::format_double(cfg.attention.p) << ':' << cfg.attention.cutoff;
  return sig.str();
}

struct CompareTable {
  std::vector<std::string> labels;            // one per config
  std::vector<std::vector<double>> columns;   // unfairness per iteration per config
  std::size_t rows = 0;
};

// Runs each configuration on its own ledger and merges the unfairness
// curves into one table. All configurations must share the dataset, replay
// mode and attention model.
inline CompareTable compare_experiments(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw std::runtime_error("compare: no configurations");
  const std::string signature = dataset_signature(configs.front());
  for (const auto& cfg : configs)
    if (dataset_signature(cfg) != signature)
      throw std::runtime_error("compare: configurations must share dataset, mode and attention");

  CompareTable table;
  std::map<std::string, int> label_uses;
  for (const auto& cfg : configs) {
    std::string label = policy_label(cfg.policy);
    const int uses = ++label_uses[label];
    if (uses > 1) label += "_" + std::to_string(uses);
    table.labels.push_back(label);

    RunResult run = run_experiment(cfg);
    std::vector<double> column;
    column.reserve(run.records.size());
    for (const auto& r : run.records) column.push_back(r.unfairness);
    if (!table.columns.empty() && column.size() != table.rows)
      throw std::runtime_error("compare: iteration counts differ");
    table.rows = column.size();
    table.columns.push_back(std::move(column));
  }
  return table;
}

inline void write_compare_csv(std::ostream& out, const CompareTable& table) {
  out << "iteration";
  for (const auto& label : table.labels) out << ',' << csv::escape("unfairness_" + label);
  out << '\n';
  for (std::size_t row = 0; row < table.rows; ++row) {
    out << (row + 1);
    for (const auto& column : table.columns) out << ',' << csv::format_double(column[row]);
    out << '\n';
  }
}

}  // namespace equirank
