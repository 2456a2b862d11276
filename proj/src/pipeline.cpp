/*
 * Copyright 2026 The mtqual Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "errors.hpp"

namespace mtqual {

const Cell* ScoreMatrix::find(const CellKey& key) const {
  for (const auto& c : cells) {
    if (c.key == key) return &c;
  }
  return nullptr;
}

namespace {

// Per-segment reference lists for one selector: version k only, or every
// version when k is empty.
std::vector<SegmentList> select_references(const std::vector<SegmentList>& versions, std::optional<std::size_t> k) {
  const std::size_t segments = versions.front().size();
  std::vector<SegmentList> out(segments);
  for (std::size_t i = 0; i < segments; ++i) {
    if (k) {
      out[i].push_back(versions[*k][i]);
    } else {
      for (const auto& v : versions) out[i].push_back(v[i]);
    }
  }
  return out;
}

std::optional<std::size_t> selector_version(const std::string& selector) {
  if (selector == "All") return std::nullopt;
  return static_cast<std::size_t>(std::stoul(selector.substr(3)) - 1);
}

}  // namespace

ScoreMatrix run_matrix(const EvaluationSet& set, const MatrixOptions& options) {
  if (options.metrics.empty()) fail(ErrorKind::invalid_argument, "matrix needs at least one metric");
  if (!options.single_references && !options.all_references) {
    fail(ErrorKind::invalid_argument, "matrix needs at least one reference selector");
  }

  ScoreMatrix matrix;
  for (const auto& m : options.metrics) matrix.metrics.push_back(m.name());
  matrix.documents = set.documents();
  matrix.systems = set.systems();
  if (options.single_references) {
    for (std::size_t v = 0; v < set.reference_versions(); ++v) matrix.references.push_back("Ref" + std::to_string(v + 1));
  }
  if (options.all_references) matrix.references.push_back("All");

  nlohmann::json metric_configs = nlohmann::json::array();
  for (const auto& m : options.metrics) metric_configs.push_back(to_json(m));
  matrix.provenance = {{"tokenization", to_json(set.policy())},
                       {"metrics", metric_configs},
                       {"documents", matrix.documents},
                       {"systems", matrix.systems},
                       {"references", matrix.references},
                       {"sentence_level", options.sentence_level},
                       {"nist_info_weights", "per selector, pooled over all documents"}};

  // Reference lists per (document, selector), shared by all cells.
  std::map<std::pair<std::string, std::string>, std::vector<SegmentList>> refs;
  for (const auto& doc : matrix.documents) {
    for (const auto& sel : matrix.references) refs[{doc, sel}] = select_references(set.references(doc), selector_version(sel));
  }

  // NIST weights per (metric index, selector).
  std::map<std::pair<std::size_t, std::string>, InfoWeightTable> info;
  std::map<std::pair<std::size_t, std::string>, std::string> info_errors;
  for (std::size_t mi = 0; mi < options.metrics.size(); ++mi) {
    if (options.metrics[mi].kind != MetricKind::nist) continue;
    for (const auto& sel : matrix.references) {
      std::vector<SegmentList> pooled;
      for (const auto& doc : matrix.documents) {
        const auto& r = refs[{doc, sel}];
        pooled.insert(pooled.end(), r.begin(), r.end());
      }
      try {
        info[{mi, sel}] = build_info_weights(std::span<const SegmentList>(pooled), options.metrics[mi].nist.max_order);
      } catch (const Error& e) {
        info_errors[{mi, sel}] = e.what();
      }
    }
  }

  struct Task {
    std::size_t metric;
    std::string document, system, reference;
  };
  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < options.metrics.size(); ++mi) {
    for (const auto& doc : matrix.documents) {
      for (const auto& sys : matrix.systems) {
        for (const auto& sel : matrix.references) tasks.push_back({mi, doc, sys, sel});
      }
    }
  }
  matrix.cells.resize(tasks.size());

  auto compute = [&](std::size_t t) {
    const Task& task = tasks[t];
    Cell& cell = matrix.cells[t];
    cell.key = {matrix.metrics[task.metric], task.document, task.system, task.reference};
    try {
      const MetricSpec& spec = options.metrics[task.metric];
      const InfoWeightTable* table = nullptr;
      if (spec.kind == MetricKind::nist) {
        if (auto e = info_errors.find({task.metric, task.reference}); e != info_errors.end()) {
          fail(ErrorKind::scoring, e->second);
        }
        table = &info.at({task.metric, task.reference});
      }
      MetricResult r = run_metric(spec, set.candidates(task.system, task.document),
                                  refs.at({task.document, task.reference}), options.sentence_level, table);
      cell.score = std::move(r.aggregate);
      cell.sentences = std::move(r.sentences);
    } catch (const std::exception& e) {
      cell.score.reset();
      cell.sentences.clear();
      cell.error = e.what();
    }
  };

  std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, tasks.size());
  if (threads <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) compute(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) compute(t);
      });
    }
  }
  return matrix;
}

}  // namespace mtqual

namespace mtqual {

CorrelationReport correlate_with_human(const EvaluationSet& set, std::span<const HumanRating> ratings,
                                       const CorrelationOptions& options) {
  if (options.metrics.empty()) fail(ErrorKind::invalid_argument, "correlation needs at least one metric");
  const bool system_level = options.granularity == "system";
  if (!system_level && options.granularity != "segment") {
    fail(ErrorKind::invalid_argument, "granularity must be 'system' or 'segment'");
  }
  std::optional<std::size_t> version;
  if (options.reference != "All") {
    if (options.reference.rfind("Ref", 0) != 0) fail(ErrorKind::invalid_argument, "reference must be 'All' or 'Ref<k>'");
    version = selector_version(options.reference);
    if (*version >= set.reference_versions()) {
      fail(ErrorKind::invalid_argument, "reference " + options.reference + " does not exist");
    }
  }

  std::map<std::string, ScoreTable> metric_tables;
  for (const auto& spec : options.metrics) {
    ScoreTable& table = metric_tables[spec.name()];
    for (const auto& system : set.systems()) {
      SegmentList candidates;
      std::vector<SegmentList> references;
      std::vector<SegmentRef> where;
      for (const auto& doc : set.documents()) {
        const auto& c = set.candidates(system, doc);
        const auto r = select_references(set.references(doc), version);
        candidates.insert(candidates.end(), c.begin(), c.end());
        references.insert(references.end(), r.begin(), r.end());
        for (std::size_t i = 0; i < c.size(); ++i) where.push_back({doc, i});
      }
      const MetricResult result = run_metric(spec, candidates, references, !system_level);
      if (system_level) {
        table[system] = result.aggregate.value;
      } else {
        for (std::size_t i = 0; i < result.sentences.size(); ++i) table[segment_key(system, where[i])] = result.sentences[i].value;
      }
    }
  }

  ScoreTable human;
  const auto scores = aggregate_human(ratings, system_level ? HumanLevel::system : HumanLevel::segment, options.aggregation);
  for (const auto& s : scores) {
    if (system_level) {
      human[s.system_id] = s.mean;
    } else {
      human[segment_key(s.system_id, *s.segment)] = s.mean;
    }
  }

  CorrelationReport report = build_correlation_report(metric_tables, human, options.granularity);
  report.metadata["reference"] = options.reference;
  report.metadata["human_parameter"] =
      options.aggregation.single_parameter ? nlohmann::json(*options.aggregation.single_parameter) : nlohmann::json("mean");
  nlohmann::json configs = nlohmann::json::array();
  for (const auto& m : options.metrics) configs.push_back(to_json(m));
  report.metadata["metrics"] = configs;
  report.metadata["tokenization"] = to_json(set.policy());
  nlohmann::json metric_values = nlohmann::json::object();
  for (const auto& [name, table] : metric_tables) metric_values[name] = table;
  report.metadata["metric_scores"] = metric_values;
  report.metadata["human_scores"] = human;
  return report;
}

}  // namespace mtqual
