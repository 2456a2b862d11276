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
#include <vector>

#include "bleu.hpp"
#include "corpus.hpp"
#include "ngram.hpp"

namespace mtqual {

/// Information weights learned from reference n-gram counts:
/// Info(w1..wn) = log2(count(w1..wn-1) / count(w1..wn)), where the count of
/// the empty prefix is the total number of reference tokens.
class InfoWeightTable {
 public:
  InfoWeightTable() = default;

  std::size_t max_order() const { return counts_.size(); }
  std::size_t total_tokens() const { return total_tokens_; }
  std::size_t count(const NGram& gram) const;
  /// 0 for n-grams never seen in the references.
  double info(const NGram& gram) const;
  const std::map<NGram, double>& weights(std::size_t order) const { return weights_.at(order - 1); }

  /// `ngram<TAB>weight` lines ordered by order, then n-gram.
  std::string to_tsv() const;

  friend InfoWeightTable build_info_weights(std::span<const Segment> references, std::size_t max_order);

 private:
  std::size_t total_tokens_ = 0;
  std::vector<std::map<NGram, std::size_t>> counts_;
  std::vector<std::map<NGram, double>> weights_;
};

InfoWeightTable build_info_weights(std::span<const Segment> references, std::size_t max_order = 5);

/// Flattens per-segment reference versions and builds the table from all of
/// them.
InfoWeightTable build_info_weights(std::span<const SegmentList> references, std::size_t max_order = 5);

/// Brevity coefficient for which the brevity factor is 0.5 at a
/// system/reference length ratio of 2/3.
double default_nist_beta();

struct NistConfig {
  std::size_t max_order = 5;
  std::optional<double> beta;
  bool normalize_self = false;

  void validate() const;
  double beta_value() const { return beta ? *beta : default_nist_beta(); }
};

struct NistStats {
  std::vector<double> info_sums;
  std::vector<std::size_t> totals;
  double system_length = 0.0;
  double reference_length = 0.0;  // sum of per-segment average reference lengths

  NistStats& operator+=(const NistStats& other);
};

/// Matched n-grams are clipped by the largest count in any single
/// reference version before their information is summed.
NistStats nist_stats(const Segment& candidate, std::span<const Segment> references, const InfoWeightTable& info,
                     std::size_t max_order);

double nist_brevity_factor(double length_ratio, double beta);

struct NistScore {
  double value = 0.0;
  std::vector<double> per_order;  // info_sums / totals
  std::vector<double> info_sums;
  std::vector<std::size_t> totals;
  double length_ratio = 1.0;
  double beta = 0.0;
  double brevity_factor = 1.0;
  std::vector<std::string> flags;
};

NistScore nist_from_stats(const NistStats& stats, const NistConfig& config);

std::vector<NistScore> nist_score(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                  const InfoWeightTable& info, const NistConfig& config, Level level);

}  // namespace mtqual
