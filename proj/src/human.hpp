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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mtqual {

inline constexpr int kScaleMin = 1;
inline constexpr int kScaleMax = 5;
inline constexpr int kParameterCount = 10;

/// Text of a quality parameter, 1..10. Throws Error(invalid_argument)
/// outside that range.
const std::string& parameter_label(int parameter);

/// Text of a rating on the 1..5 scale ("Unacceptable" .. "Excellent").
const std::string& scale_label(int rating);

struct SegmentRef {
  std::string document;
  std::size_t index = 0;  // zero-based position within the document

  auto operator<=>(const SegmentRef&) const = default;
};

struct HumanRating {
  std::string judge_id;
  std::string system_id;
  SegmentRef segment;
  int parameter = 1;
  int rating = 1;

  /// Throws Error(invalid_argument) naming the offending field.
  void validate() const;
  bool operator==(const HumanRating&) const = default;
};

inline constexpr std::string_view kRatingsCsvHeader = "judge_id,system_id,document,segment_index,parameter,rating";

std::vector<HumanRating> read_ratings_csv(std::string_view text);
std::vector<HumanRating> read_ratings_csv_file(const std::string& path);
/// Rows sorted by (system, document, segment, judge, parameter).
std::string write_ratings_csv(std::span<const HumanRating> ratings);

enum class HumanLevel { segment, system };

/// Which ratings feed the mean: every parameter (default), or only one
/// parameter treated as the overall judgment.
struct AggregationPolicy {
  std::optional<int> single_parameter;
};

struct HumanScore {
  std::string system_id;
  std::optional<SegmentRef> segment;  // set at segment level
  double mean = 0.0;
  double normalized_value = 0.0;  // (mean - 1) / 4
  double coverage = 0.0;          // rated (judge, parameter) cells / (judges x parameters)
  std::size_t rating_count = 0;
};

/// Mean over parameters per judge, then over judges per segment, then over
/// segments per system. Output is ordered by system, then segment.
std::vector<HumanScore> aggregate_human(std::span<const HumanRating> ratings, HumanLevel level,
                                        const AggregationPolicy& policy = {});

/// Sample Pearson correlation. Throws Error(undefined_correlation) for
/// zero variance, Error(invalid_argument) for fewer than two points or
/// unequal lengths.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Fractional ranks starting at 1; ties share their average rank.
std::vector<double> fractional_ranks(std::span<const double> values);

double spearman(std::span<const double> xs, std::span<const double> ys);

/// Keys are system ids (system granularity) or "system|document|index"
/// (segment granularity).
using ScoreTable = std::map<std::string, double>;

struct MetricCorrelation {
  std::string metric;
  std::string granularity;
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::size_t n = 0;
  std::vector<std::string> ranking;        // systems best-first (system granularity)
  bool ranking_ties = false;
  bool top_agrees_with_human = false;
  bool ranking_agrees_with_human = false;
  std::vector<std::string> warnings;
};

struct CorrelationReport {
  std::string granularity;
  std::vector<std::string> human_ranking;
  bool human_ranking_ties = false;
  std::vector<MetricCorrelation> metrics;
  nlohmann::json metadata;
};

/// Best-first ranking with ties broken by id. Lower-is-better metrics
/// (TER) rank ascending.
std::vector<std::string> rank_systems(const ScoreTable& scores, bool lower_is_better, bool* ties = nullptr);

bool lower_is_better(std::string_view metric);

/// Correlates each metric's table with the human table over their common
/// keys. Throws Error(invalid_argument) when fewer than two keys are shared.
CorrelationReport build_correlation_report(const std::map<std::string, ScoreTable>& metric_scores,
                                           const ScoreTable& human, const std::string& granularity);

nlohmann::json to_json(const MetricCorrelation& m);
nlohmann::json to_json(const CorrelationReport& report);

std::string segment_key(const std::string& system, const SegmentRef& segment);

}  // namespace mtqual
