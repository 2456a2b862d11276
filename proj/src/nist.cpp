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

#include "nist.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "errors.hpp"

namespace mtqual {

std::size_t InfoWeightTable::count(const NGram& gram) const {
  if (gram.empty()) return total_tokens_;
  if (gram.size() > counts_.size()) return 0;
  const auto& table = counts_[gram.size() - 1];
  auto it = table.find(gram);
  return it == table.end() ? 0 : it->second;
}

double InfoWeightTable::info(const NGram& gram) const {
  if (gram.empty() || gram.size() > weights_.size()) return 0.0;
  const auto& table = weights_[gram.size() - 1];
  auto it = table.find(gram);
  return it == table.end() ? 0.0 : it->second;
}

std::string InfoWeightTable::to_tsv() const {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& table : weights_) {
    for (const auto& [gram, w] : table) out << ngram_key(gram) << '\t' << w << '\n';
  }
  return out.str();
}

InfoWeightTable build_info_weights(std::span<const Segment> references, std::size_t max_order) {
  if (max_order < 1) fail(ErrorKind::invalid_argument, "NIST max order must be at least 1");
  if (references.empty()) fail(ErrorKind::invalid_argument, "NIST information weights need a nonempty reference corpus");
  InfoWeightTable table;
  table.counts_.resize(max_order);
  table.weights_.resize(max_order);
  for (const auto& seg : references) {
    table.total_tokens_ += seg.size();
    for (std::size_t n = 1; n <= max_order; ++n) {
      for (const auto& [gram, c] : ngrams(seg.tokens, n).counts) table.counts_[n - 1][gram] += c;
    }
  }
  for (std::size_t n = 1; n <= max_order; ++n) {
    for (const auto& [gram, c] : table.counts_[n - 1]) {
      const NGram prefix(gram.begin(), gram.end() - 1);
      table.weights_[n - 1][gram] =
          std::log2(static_cast<double>(table.count(prefix)) / static_cast<double>(c));
    }
  }
  return table;
}

InfoWeightTable build_info_weights(std::span<const SegmentList> references, std::size_t max_order) {
  SegmentList flat;
  for (const auto& versions : references) flat.insert(flat.end(), versions.begin(), versions.end());
  return build_info_weights(std::span<const Segment>(flat), max_order);
}

double default_nist_beta() {
  const double log_ratio = std::log(2.0 / 3.0);
  return std::log(0.5) / (log_ratio * log_ratio);
}

void NistConfig::validate() const {
  if (max_order < 1) fail(ErrorKind::invalid_argument, "NIST max order must be at least 1");
  if (beta && *beta > 0.0) fail(ErrorKind::invalid_argument, "NIST beta must be nonpositive");
}

NistStats& NistStats::operator+=(const NistStats& other) {
  if (info_sums.size() < other.info_sums.size()) {
    info_sums.resize(other.info_sums.size(), 0.0);
    totals.resize(other.totals.size(), 0);
  }
  for (std::size_t i = 0; i < other.info_sums.size(); ++i) {
    info_sums[i] += other.info_sums[i];
    totals[i] += other.totals[i];
  }
  system_length += other.system_length;
  reference_length += other.reference_length;
  return *this;
}

NistStats nist_stats(const Segment& candidate, std::span<const Segment> references, const InfoWeightTable& info,
                     std::size_t max_order) {
  NistStats stats;
  stats.info_sums.assign(max_order, 0.0);
  stats.totals.assign(max_order, 0);
  stats.system_length = static_cast<double>(candidate.size());
  if (!references.empty()) {
    double sum = 0.0;
    for (const auto& r : references) sum += static_cast<double>(r.size());
    stats.reference_length = sum / static_cast<double>(references.size());
  }
  for (std::size_t n = 1; n <= max_order; ++n) {
    const NGramCounts cand = ngrams(candidate.tokens, n);
    std::vector<NGramCounts> ref_counts;
    for (const auto& r : references) ref_counts.push_back(ngrams(r.tokens, n));
    const NGramCounts ceiling = max_counts(ref_counts);
    for (const auto& [gram, c] : cand.counts) {
      stats.totals[n - 1] += c;
      const std::size_t matched = std::min(c, ceiling.count(gram));
      if (matched) stats.info_sums[n - 1] += static_cast<double>(matched) * info.info(gram);
    }
  }
  return stats;
}

double nist_brevity_factor(double length_ratio, double beta) {
  const double r = std::min(length_ratio, 1.0);
  if (r <= 0.0) return 0.0;
  const double l = std::log(r);
  return std::exp(beta * l * l);
}

NistScore nist_from_stats(const NistStats& stats, const NistConfig& config) {
  config.validate();
  NistScore score;
  score.beta = config.beta_value();
  score.info_sums = stats.info_sums;
  score.totals = stats.totals;
  score.info_sums.resize(config.max_order, 0.0);
  score.totals.resize(config.max_order, 0);
  score.per_order.assign(config.max_order, 0.0);

  double sum = 0.0;
  for (std::size_t i = 0; i < config.max_order; ++i) {
    if (score.totals[i] == 0) continue;
    score.per_order[i] = score.info_sums[i] / static_cast<double>(score.totals[i]);
    sum += score.per_order[i];
  }
  if (stats.reference_length > 0.0) {
    score.length_ratio = stats.system_length / stats.reference_length;
  } else {
    score.length_ratio = 1.0;
    score.flags.push_back("empty_references");
  }
  if (stats.system_length == 0.0) score.flags.push_back("empty_candidate");
  score.brevity_factor = nist_brevity_factor(score.length_ratio, score.beta);
  score.value = sum * score.brevity_factor;
  return score;
}

std::vector<NistScore> nist_score(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                  const InfoWeightTable& info, const NistConfig& config, Level level) {
  config.validate();
  if (candidates.size() != references.size()) fail(ErrorKind::alignment, "NIST inputs are not aligned");
  std::size_t system_tokens = 0;
  for (const auto& c : candidates) system_tokens += c.size();
  if (system_tokens == 0) fail(ErrorKind::scoring, "NIST: candidate corpus is empty");

  std::vector<NistScore> out;
  NistStats pooled;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    NistStats s = nist_stats(candidates[i], references[i], info, config.max_order);
    if (level == Level::sentence) {
      out.push_back(nist_from_stats(s, config));
    } else {
      pooled += s;
    }
  }
  if (level == Level::corpus) out.push_back(nist_from_stats(pooled, config));
  return out;
}

}  // namespace mtqual
