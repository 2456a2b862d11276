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
#include <span>
#include <string>
#include <vector>

#include "corpus.hpp"

namespace mtqual {

enum class Smoothing { none, add_one, exp_decay };
enum class Level { corpus, sentence };

const char* to_string(Smoothing s);
Smoothing smoothing_from_string(const std::string& s);

struct BleuConfig {
  std::size_t max_order = 4;
  std::vector<double> weights;          // empty means uniform 1/max_order
  std::optional<Smoothing> smoothing;   // unset: none at corpus level, add_one at sentence level

  void validate() const;
  std::vector<double> effective_weights() const;
  Smoothing smoothing_for(Level level) const;
};

struct ClippedCount {
  std::size_t matches = 0;
  std::size_t total = 0;
  bool operator==(const ClippedCount&) const = default;
};

/// Candidate n-grams matched at most as often as the most generous single
/// reference contains them. Throws Error(undefined_precision) on an empty
/// candidate.
ClippedCount modified_precision(const Segment& candidate, std::span<const Segment> references, std::size_t n);

/// Reference length closest to the candidate length; ties go to the shorter.
std::size_t effective_reference_length(std::size_t candidate_length, std::span<const std::size_t> reference_lengths);

/// 1 when the candidate is at least as long as the effective reference,
/// exp(1 - r/c) otherwise.
double brevity_penalty(std::size_t candidate_length, std::span<const std::size_t> reference_lengths);

/// Sufficient statistics; summing them pools a corpus.
struct BleuStats {
  std::vector<std::size_t> matches;
  std::vector<std::size_t> totals;
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;

  BleuStats& operator+=(const BleuStats& other);
};

BleuStats bleu_stats(const Segment& candidate, std::span<const Segment> references, std::size_t max_order);

struct BleuScore {
  double value = 0.0;
  std::vector<double> precisions;       // raw matches/totals, 0 where undefined
  std::vector<double> used_precisions;  // after smoothing; 0 for skipped orders
  std::vector<std::size_t> matches;
  std::vector<std::size_t> totals;
  double brevity_penalty = 1.0;
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;  // effective reference length
  Smoothing smoothing = Smoothing::none;
  std::vector<std::string> flags;
};

/// Orders whose candidate total is zero are left out of the geometric mean
/// and the remaining weights renormalized (flag "orders_skipped").
BleuScore bleu_from_stats(const BleuStats& stats, const BleuConfig& config, Smoothing smoothing);

/// Corpus level returns one score from pooled statistics; sentence level one
/// score per segment. references[i] holds every reference version of
/// segment i.
std::vector<BleuScore> bleu_score(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                  const BleuConfig& config, Level level);

}  // namespace mtqual
