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

#include "bleu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "ngram.hpp"

namespace mtqual {

const char* to_string(Smoothing s) {
  switch (s) {
    case Smoothing::none: return "none";
    case Smoothing::add_one: return "add-one";
    case Smoothing::exp_decay: return "exp-decay";
  }
  return "none";
}

Smoothing smoothing_from_string(const std::string& s) {
  if (s == "none") return Smoothing::none;
  if (s == "add-one" || s == "add_one") return Smoothing::add_one;
  if (s == "exp-decay" || s == "exp_decay") return Smoothing::exp_decay;
  fail(ErrorKind::invalid_argument, "unknown smoothing '" + s + "' (expected none, add-one, exp-decay)");
}

void BleuConfig::validate() const {
  if (max_order < 1) fail(ErrorKind::invalid_argument, "BLEU max order must be at least 1");
  if (weights.empty()) return;
  if (weights.size() != max_order) fail(ErrorKind::invalid_argument, "BLEU weights must have max_order entries");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) fail(ErrorKind::invalid_argument, "BLEU weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(ErrorKind::invalid_argument, "BLEU weights must sum to 1");
}

std::vector<double> BleuConfig::effective_weights() const {
  if (!weights.empty()) return weights;
  return std::vector<double>(max_order, 1.0 / static_cast<double>(max_order));
}

Smoothing BleuConfig::smoothing_for(Level level) const {
  if (smoothing) return *smoothing;
  return level == Level::sentence ? Smoothing::add_one : Smoothing::none;
}

ClippedCount modified_precision(const Segment& candidate, std::span<const Segment> references, std::size_t n) {
  if (candidate.empty()) fail(ErrorKind::undefined_precision, "modified precision is undefined for an empty candidate");
  const NGramCounts cand = ngrams(candidate.tokens, n);
  std::vector<NGramCounts> ref_counts;
  ref_counts.reserve(references.size());
  for (const auto& r : references) ref_counts.push_back(ngrams(r.tokens, n));
  const NGramCounts ceiling = max_counts(ref_counts);

  ClippedCount out;
  for (const auto& [gram, c] : cand.counts) {
    out.matches += std::min(c, ceiling.count(gram));
    out.total += c;
  }
  return out;
}

std::size_t effective_reference_length(std::size_t candidate_length, std::span<const std::size_t> reference_lengths) {
  if (reference_lengths.empty()) fail(ErrorKind::invalid_argument, "brevity penalty needs at least one reference length");
  std::size_t best = reference_lengths.front();
  auto distance = [&](std::size_t r) { return r > candidate_length ? r - candidate_length : candidate_length - r; };
  for (std::size_t r : reference_lengths) {
    if (distance(r) < distance(best) || (distance(r) == distance(best) && r < best)) best = r;
  }
  return best;
}

double brevity_penalty(std::size_t candidate_length, std::span<const std::size_t> reference_lengths) {
  if (candidate_length == 0) fail(ErrorKind::invalid_argument, "brevity penalty needs a nonempty candidate");
  const std::size_t r = effective_reference_length(candidate_length, reference_lengths);
  if (candidate_length >= r) return 1.0;
  return std::exp(1.0 - static_cast<double>(r) / static_cast<double>(candidate_length));
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  if (matches.size() < other.matches.size()) {
    matches.resize(other.matches.size());
    totals.resize(other.totals.size());
  }
  for (std::size_t i = 0; i < other.matches.size(); ++i) {
    matches[i] += other.matches[i];
    totals[i] += other.totals[i];
  }
  candidate_length += other.candidate_length;
  reference_length += other.reference_length;
  return *this;
}

BleuStats bleu_stats(const Segment& candidate, std::span<const Segment> references, std::size_t max_order) {
  BleuStats stats;
  stats.matches.assign(max_order, 0);
  stats.totals.assign(max_order, 0);
  stats.candidate_length = candidate.size();
  std::vector<std::size_t> lengths;
  for (const auto& r : references) lengths.push_back(r.size());
  stats.reference_length = effective_reference_length(candidate.size(), lengths);
  if (candidate.empty()) return stats;
  for (std::size_t n = 1; n <= max_order; ++n) {
    const ClippedCount c = modified_precision(candidate, references, n);
    stats.matches[n - 1] = c.matches;
    stats.totals[n - 1] = c.total;
  }
  return stats;
}

BleuScore bleu_from_stats(const BleuStats& stats, const BleuConfig& config, Smoothing smoothing) {
  config.validate();
  const std::size_t order = config.max_order;
  const std::vector<double> weights = config.effective_weights();

  BleuScore score;
  score.smoothing = smoothing;
  score.matches = stats.matches;
  score.totals = stats.totals;
  score.matches.resize(order, 0);
  score.totals.resize(order, 0);
  score.candidate_length = stats.candidate_length;
  score.reference_length = stats.reference_length;
  score.precisions.assign(order, 0.0);
  score.used_precisions.assign(order, 0.0);

  if (stats.candidate_length == 0) {
    score.value = 0.0;
    score.brevity_penalty = 0.0;
    score.flags.push_back("empty_candidate");
    return score;
  }
  const std::size_t r = stats.reference_length;
  const std::size_t c = stats.candidate_length;
  score.brevity_penalty = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));

  double weight_in_use = 0.0;
  double log_sum = 0.0;
  bool zero = false;
  double decay = 1.0;
  for (std::size_t i = 0; i < order; ++i) {
    const auto m = static_cast<double>(score.matches[i]);
    const auto t = static_cast<double>(score.totals[i]);
    if (score.totals[i] == 0) continue;
    score.precisions[i] = m / t;
    if (weights[i] == 0.0) continue;
    double p = score.precisions[i];
    if (score.matches[i] == 0) {
      switch (smoothing) {
        case Smoothing::none: zero = true; break;
        case Smoothing::add_one: p = 1.0 / (t + 1.0); break;
        case Smoothing::exp_decay:
          decay *= 2.0;
          p = 1.0 / (decay * t);
          break;
      }
    }
    score.used_precisions[i] = p;
    weight_in_use += weights[i];
    if (p > 0.0) log_sum += weights[i] * std::log(p);
  }
  if (weight_in_use < 1.0 - 1e-12) score.flags.push_back("orders_skipped");
  if (zero) {
    score.value = 0.0;
    score.flags.push_back("zero_precision");
    return score;
  }
  if (weight_in_use <= 0.0) {
    score.value = 0.0;
    return score;
  }
  score.value = score.brevity_penalty * std::exp(log_sum / weight_in_use);
  return score;
}

std::vector<BleuScore> bleu_score(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                  const BleuConfig& config, Level level) {
  config.validate();
  if (candidates.size() != references.size()) fail(ErrorKind::alignment, "BLEU inputs are not aligned");
  const Smoothing smoothing = config.smoothing_for(level);

  std::vector<BleuStats> per_segment;
  per_segment.reserve(candidates.size());
  bool any_nonempty = false;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    per_segment.push_back(bleu_stats(candidates[i], references[i], config.max_order));
    any_nonempty = any_nonempty || !candidates[i].empty();
  }
  if (!any_nonempty) fail(ErrorKind::scoring, "BLEU: every candidate segment is empty");

  std::vector<BleuScore> out;
  if (level == Level::corpus) {
    BleuStats pooled;
    pooled.matches.assign(config.max_order, 0);
    pooled.totals.assign(config.max_order, 0);
    for (const auto& s : per_segment) pooled += s;
    out.push_back(bleu_from_stats(pooled, config, smoothing));
  } else {
    for (const auto& s : per_segment) out.push_back(bleu_from_stats(s, config, smoothing));
  }
  return out;
}

}  // namespace mtqual
