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

#include "human.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "errors.hpp"

namespace mtqual {

namespace {

const std::array<std::string, kParameterCount> kParameterLabels = {
    "Translation of Gender and Number of the Noun/s.",
    "Translation of tense in the source sentence.",
    "Translation of Voice in the source sentence.",
    "Identification of the Proper Nouns.",
    "Use of Adjectives and Adverbs corresponding to the nouns and verbs in the source sentence.",
    "Selection of proper words / synonyms.",
    "The sequence of Noun, Helping Verb and Verb in the translation.",
    "Use of Punctuation signs in the translation.",
    "Maintaining the stress on the significant part in the source sentence in the translation.",
    "Maintaining the semantics of the source sentence in the translation.",
};

const std::array<std::string, kScaleMax> kScaleLabels = {
    "Unacceptable", "Barely Understandable", "Understandable", "Good", "Excellent",
};

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) fail(ErrorKind::invalid_argument, "ratings CSV line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

long parse_integer(const std::string& s, const char* field, std::size_t line_no) {
  long value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    fail(ErrorKind::invalid_argument,
         "ratings CSV line " + std::to_string(line_no) + ": field " + field + " is not an integer: '" + s + "'");
  }
  return value;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

const std::string& parameter_label(int parameter) {
  if (parameter < 1 || parameter > kParameterCount) {
    fail(ErrorKind::invalid_argument, "parameter must be in 1..10, got " + std::to_string(parameter));
  }
  return kParameterLabels[static_cast<std::size_t>(parameter - 1)];
}

const std::string& scale_label(int rating) {
  if (rating < kScaleMin || rating > kScaleMax) {
    fail(ErrorKind::invalid_argument, "rating must be in 1..5, got " + std::to_string(rating));
  }
  return kScaleLabels[static_cast<std::size_t>(rating - 1)];
}

void HumanRating::validate() const {
  if (judge_id.empty()) fail(ErrorKind::invalid_argument, "judge_id: must not be empty");
  if (system_id.empty()) fail(ErrorKind::invalid_argument, "system_id: must not be empty");
  if (segment.document.empty()) fail(ErrorKind::invalid_argument, "document: must not be empty");
  if (parameter < 1 || parameter > kParameterCount) fail(ErrorKind::invalid_argument, "parameter: must be an integer in 1..10");
  if (rating < kScaleMin || rating > kScaleMax) fail(ErrorKind::invalid_argument, "rating: must be an integer in 1..5");
}

std::vector<HumanRating> read_ratings_csv(std::string_view text) {
  std::vector<HumanRating> out;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    std::erase(line, '\r');
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!header_seen) {
      if (line != kRatingsCsvHeader) {
        fail(ErrorKind::invalid_argument, "ratings CSV header must be '" + std::string(kRatingsCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != 6) {
      fail(ErrorKind::invalid_argument, "ratings CSV line " + std::to_string(line_no) + ": expected 6 fields, got " +
                                            std::to_string(fields.size()));
    }
    HumanRating r;
    r.judge_id = fields[0];
    r.system_id = fields[1];
    r.segment.document = fields[2];
    const long index = parse_integer(fields[3], "segment_index", line_no);
    if (index < 0) fail(ErrorKind::invalid_argument, "ratings CSV line " + std::to_string(line_no) + ": negative segment_index");
    r.segment.index = static_cast<std::size_t>(index);
    r.parameter = static_cast<int>(parse_integer(fields[4], "parameter", line_no));
    r.rating = static_cast<int>(parse_integer(fields[5], "rating", line_no));
    try {
      r.validate();
    } catch (const Error& e) {
      fail(e.kind(), "ratings CSV line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(r));
    if (end == text.size()) break;
  }
  if (!header_seen) fail(ErrorKind::invalid_argument, "ratings CSV is empty (missing header)");
  return out;
}

std::vector<HumanRating> read_ratings_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open ratings file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_ratings_csv(buffer.str());
}

std::string write_ratings_csv(std::span<const HumanRating> ratings) {
  std::vector<HumanRating> sorted(ratings.begin(), ratings.end());
  std::sort(sorted.begin(), sorted.end(), [](const HumanRating& a, const HumanRating& b) {
    return std::tie(a.system_id, a.segment, a.judge_id, a.parameter, a.rating) <
           std::tie(b.system_id, b.segment, b.judge_id, b.parameter, b.rating);
  });
  std::string out(kRatingsCsvHeader);
  out.push_back('\n');
  for (const auto& r : sorted) {
    out += csv_field(r.judge_id) + ',' + csv_field(r.system_id) + ',' + csv_field(r.segment.document) + ',' +
           std::to_string(r.segment.index) + ',' + std::to_string(r.parameter) + ',' + std::to_string(r.rating) + '\n';
  }
  return out;
}

std::vector<HumanScore> aggregate_human(std::span<const HumanRating> ratings, HumanLevel level,
                                        const AggregationPolicy& policy) {
  if (ratings.empty()) return {};
  if (policy.single_parameter) parameter_label(*policy.single_parameter);

  // (system, segment) -> judge -> parameter -> ratings
  std::map<std::pair<std::string, SegmentRef>, std::map<std::string, std::map<int, std::vector<double>>>> cells;
  for (const auto& r : ratings) {
    r.validate();
    if (policy.single_parameter && r.parameter != *policy.single_parameter) continue;
    cells[{r.system_id, r.segment}][r.judge_id][r.parameter].push_back(static_cast<double>(r.rating));
  }
  const double parameters_expected = policy.single_parameter ? 1.0 : static_cast<double>(kParameterCount);

  std::vector<HumanScore> segments;
  for (const auto& [key, judges] : cells) {
    HumanScore s;
    s.system_id = key.first;
    s.segment = key.second;
    std::vector<double> judge_means;
    std::size_t rated_cells = 0;
    for (const auto& [judge, params] : judges) {
      std::vector<double> param_means;
      for (const auto& [param, values] : params) {
        param_means.push_back(mean_of(values));
        s.rating_count += values.size();
      }
      rated_cells += params.size();
      judge_means.push_back(mean_of(param_means));
    }
    s.mean = mean_of(judge_means);
    s.normalized_value = (s.mean - 1.0) / 4.0;
    s.coverage = static_cast<double>(rated_cells) / (static_cast<double>(judges.size()) * parameters_expected);
    segments.push_back(std::move(s));
  }
  if (level == HumanLevel::segment) return segments;

  std::vector<HumanScore> systems;
  for (std::size_t i = 0; i < segments.size();) {
    std::size_t j = i;
    HumanScore s;
    s.system_id = segments[i].system_id;
    std::vector<double> means;
    double coverage = 0.0;
    while (j < segments.size() && segments[j].system_id == s.system_id) {
      means.push_back(segments[j].mean);
      coverage += segments[j].coverage;
      s.rating_count += segments[j].rating_count;
      ++j;
    }
    s.mean = mean_of(means);
    s.normalized_value = (s.mean - 1.0) / 4.0;
    s.coverage = coverage / static_cast<double>(means.size());
    systems.push_back(std::move(s));
    i = j;
  }
  return systems;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) fail(ErrorKind::invalid_argument, "correlation inputs differ in length");
  if (xs.size() < 2) fail(ErrorKind::invalid_argument, "correlation needs at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorKind::undefined_correlation, "correlation is undefined for zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) fail(ErrorKind::invalid_argument, "correlation inputs differ in length");
  if (xs.size() < 2) fail(ErrorKind::invalid_argument, "correlation needs at least two points");
  const auto rx = fractional_ranks(xs);
  const auto ry = fractional_ranks(ys);
  return pearson(rx, ry);
}

bool lower_is_better(std::string_view metric) { return metric == "ter"; }

std::vector<std::string> rank_systems(const ScoreTable& scores, bool lower_better, bool* ties) {
  std::vector<std::pair<std::string, double>> items(scores.begin(), scores.end());
  std::stable_sort(items.begin(), items.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return lower_better ? a.second < b.second : a.second > b.second;
    return a.first < b.first;
  });
  if (ties) {
    *ties = false;
    for (std::size_t i = 1; i < items.size(); ++i) {
      if (items[i].second == items[i - 1].second) *ties = true;
    }
  }
  std::vector<std::string> ranking;
  for (auto& [id, _] : items) ranking.push_back(id);
  return ranking;
}

CorrelationReport build_correlation_report(const std::map<std::string, ScoreTable>& metric_scores,
                                           const ScoreTable& human, const std::string& granularity) {
  const bool system_level = granularity == "system";
  if (!system_level && granularity != "segment") {
    fail(ErrorKind::invalid_argument, "granularity must be 'system' or 'segment'");
  }
  CorrelationReport report;
  report.granularity = granularity;
  report.metadata = {{"aggregation", "mean over parameters, then judges, then segments; unweighted"},
                     {"ranking_tie_break", "system id"}};
  if (system_level) report.human_ranking = rank_systems(human, false, &report.human_ranking_ties);

  for (const auto& [metric, table] : metric_scores) {
    MetricCorrelation m;
    m.metric = metric;
    m.granularity = granularity;
    std::vector<double> xs, ys;
    ScoreTable shared_metric, shared_human;
    for (const auto& [key, value] : table) {
      auto it = human.find(key);
      if (it == human.end()) continue;
      xs.push_back(value);
      ys.push_back(it->second);
      shared_metric[key] = value;
      shared_human[key] = it->second;
    }
    m.n = xs.size();
    if (m.n < 2) {
      fail(ErrorKind::invalid_argument, "metric " + metric + ": " + std::to_string(m.n) +
                                            " " + granularity + "(s) with both metric and human scores; need at least 2");
    }
    if (m.n < 5) m.warnings.push_back("small sample: n=" + std::to_string(m.n));
    try {
      m.pearson = pearson(xs, ys);
    } catch (const Error& e) {
      m.warnings.push_back(std::string("pearson: ") + e.what());
    }
    try {
      m.spearman = spearman(xs, ys);
    } catch (const Error& e) {
      m.warnings.push_back(std::string("spearman: ") + e.what());
    }
    if (system_level) {
      m.ranking = rank_systems(shared_metric, lower_is_better(metric), &m.ranking_ties);
      if (m.ranking_ties) m.warnings.push_back("ranking has ties (broken by system id)");
      const auto human_rank = rank_systems(shared_human, false);
      m.top_agrees_with_human = !m.ranking.empty() && m.ranking.front() == human_rank.front();
      m.ranking_agrees_with_human = m.ranking == human_rank;
    }
    report.metrics.push_back(std::move(m));
  }
  return report;
}

nlohmann::json to_json(const MetricCorrelation& m) {
  nlohmann::json j = {{"metric", m.metric}, {"granularity", m.granularity}};
  j["pearson"] = m.pearson ? nlohmann::json(*m.pearson) : nlohmann::json(nullptr);
  j["spearman"] = m.spearman ? nlohmann::json(*m.spearman) : nlohmann::json(nullptr);
  j["n"] = m.n;
  j["ranking"] = m.ranking;
  j["ranking_ties"] = m.ranking_ties;
  j["top_agrees_with_human"] = m.top_agrees_with_human;
  j["ranking_agrees_with_human"] = m.ranking_agrees_with_human;
  j["warnings"] = m.warnings;
  return j;
}

nlohmann::json to_json(const CorrelationReport& report) {
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& m : report.metrics) metrics.push_back(to_json(m));
  return {{"granularity", report.granularity},
          {"human_ranking", report.human_ranking},
          {"human_ranking_ties", report.human_ranking_ties},
          {"metrics", metrics},
          {"metadata", report.metadata}};
}

std::string segment_key(const std::string& system, const SegmentRef& segment) {
  return system + "|" + segment.document + "|" + std::to_string(segment.index);
}

}  // namespace mtqual
