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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "json.hpp"
#include "metric.hpp"

namespace mtqual {

struct CellKey {
  std::string metric;
  std::string document;
  std::string system;
  std::string reference;  // "Ref1", "Ref2", ... or "All"

  bool operator==(const CellKey&) const = default;
};

struct Cell {
  CellKey key;
  std::optional<MetricScore> score;  // empty when the cell failed
  std::vector<MetricScore> sentences;
  std::string error;
};

/// Results grid: metric x document x system x reference selector.
/// Cells are stored in render order (metric, document, system, reference).
struct ScoreMatrix {
  std::vector<std::string> metrics;
  std::vector<std::string> documents;
  std::vector<std::string> systems;
  std::vector<std::string> references;
  std::vector<Cell> cells;
  nlohmann::json provenance;

  const Cell* find(const CellKey& key) const;
};

struct MatrixOptions {
  std::vector<MetricSpec> metrics;
  bool single_references = true;     // one selector per reference version
  bool all_references = false;       // plus an "All" selector
  bool sentence_level = true;        // per-segment series for every cell
  std::size_t threads = 0;           // 0: hardware concurrency
};

/// Computes every cell. A failing cell records its error and the run
/// continues. NIST information weights come from the selector's references
/// pooled over all documents.
ScoreMatrix run_matrix(const EvaluationSet& set, const MatrixOptions& options);

enum class ReportFormat { csv, json, markdown, sentences_csv };

ReportFormat report_format_from_string(const std::string& s);
/// Picks the format from a file extension (.csv, .json, .md).
ReportFormat report_format_for_path(const std::string& path);

/// Deterministic rendering. CSV and markdown round values to 2 decimals;
/// JSON keeps full precision.
std::string render_report(const ScoreMatrix& matrix, ReportFormat format);

}  // namespace mtqual

#include "human.hpp"

namespace mtqual {

struct CorrelationOptions {
  std::vector<MetricSpec> metrics;
  std::string granularity = "system";  // or "segment"
  std::string reference = "All";       // "All" or "Ref<k>"
  AggregationPolicy aggregation;
};

/// System level scores each system on all documents pooled as one corpus;
/// segment level uses sentence scores. Human scores come from
/// aggregate_human at the matching level.
CorrelationReport correlate_with_human(const EvaluationSet& set, std::span<const HumanRating> ratings,
                                       const CorrelationOptions& options);

}  // namespace mtqual
