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
#include <span>
#include <string>
#include <vector>

#include "bleu.hpp"
#include "corpus.hpp"

namespace mtqual {

struct GtmConfig {
  /// Run-length exponent. 1 reduces to plain unigram matching.
  double exponent = 1.0;

  void validate() const;
};

/// Size of a maximum matching between equal-surface token occurrences,
/// i.e. the sum over word types of min(candidate count, reference count).
std::size_t maximum_match_size(const Segment& candidate, const Segment& reference);

/// Generalized match size (sum of run_length^e)^(1/e), where runs are
/// picked greedily longest-first among still-unmatched positions. Equals
/// maximum_match_size when the exponent is 1.
double match_size(const Segment& candidate, const Segment& reference, double exponent);

struct GtmScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double match_size = 0.0;
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;
  std::size_t reference_version = 0;  // best version, sentence level only
  std::vector<std::string> flags;
};

/// P = match/|candidate|, R = match/|reference|, F = 2PR/(P+R). Throws
/// Error(scoring) when both totals are zero; one empty side scores 0 with
/// flag "degenerate".
GtmScore gtm_from_counts(double match, std::size_t candidate_length, std::size_t reference_length);

/// Each segment keeps the reference version with the best F. Corpus level
/// pools the match sizes and lengths of those choices.
std::vector<GtmScore> gtm_score(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                const GtmConfig& config, Level level);

}  // namespace mtqual
