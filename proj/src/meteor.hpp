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
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bleu.hpp"
#include "corpus.hpp"

namespace mtqual {

enum class MatchStage { exact, stem, synonym };

const char* to_string(MatchStage stage);
MatchStage stage_from_string(const std::string& s);

/// Word -> synonym group ids. Two words are synonyms when they share a group.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;
  explicit SynonymLexicon(const std::vector<std::vector<std::string>>& groups);

  /// One whitespace-separated synonym group per line; words are normalized
  /// with the given policy. Blank lines and lines starting with '#' are
  /// skipped.
  static SynonymLexicon from_file(const std::filesystem::path& path, const TokenizationPolicy& policy = {});

  bool synonyms(const std::string& a, const std::string& b) const;
  bool empty() const { return groups_.empty(); }
  std::size_t group_count() const { return group_count_; }

 private:
  std::map<std::string, std::set<std::size_t>> groups_;
  std::size_t group_count_ = 0;
};

struct AlignedPair {
  std::size_t candidate = 0;
  std::size_t reference = 0;
  MatchStage stage = MatchStage::exact;

  bool operator==(const AlignedPair&) const = default;
};

struct Alignment {
  std::vector<AlignedPair> pairs;  // sorted by candidate position
  std::size_t chunk_count = 0;
  std::size_t crossings = 0;
  bool heuristic = false;  // some stage fell back to beam search
};

/// Pairs (a, b) with a before b on the candidate side but after it on the
/// reference side.
std::size_t count_crossings(std::span<const AlignedPair> pairs);

/// Maximal runs of pairs adjacent on both sides, pairs taken in candidate
/// order.
std::size_t count_chunks(std::span<const AlignedPair> pairs);

enum class MeteorMode { simple, weighted_penalized };

struct MeteorConfig {
  std::vector<MatchStage> stages{MatchStage::exact, MatchStage::stem, MatchStage::synonym};
  double alpha = 0.9;
  double gamma = 0.5;
  double penalty_power = 3.0;
  MeteorMode mode = MeteorMode::simple;
  /// Segments up to this many tokens (either side) get an exact
  /// crossing-minimal search; longer ones use beam search.
  std::size_t exact_search_limit = 12;
  std::size_t beam_width = 16;

  void validate() const;
};

/// Stages run in order over still-unaligned words. Each stage adds a
/// maximum matching that, among all maximum matchings, minimizes crossings
/// of the whole alignment; remaining ties go to the lexicographically
/// smallest pair list.
Alignment align(const Segment& candidate, const Segment& reference, const MeteorConfig& config,
                const SynonymLexicon& lexicon);

struct MeteorScore {
  double value = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double fmean = 0.0;
  double penalty = 0.0;
  std::size_t matches = 0;
  std::size_t chunks = 0;
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;
  std::size_t reference_version = 0;
  Alignment alignment;
  std::vector<std::string> flags;
};

/// Score of one candidate against one reference. Throws Error(scoring)
/// when both are empty.
MeteorScore meteor_segment(const Segment& candidate, const Segment& reference, const MeteorConfig& config,
                           const SynonymLexicon& lexicon);

/// Sentence level keeps the best reference version per segment. Corpus
/// level is the mean of those segment scores weighted by candidate length
/// plus chosen reference length.
std::vector<MeteorScore> meteor_score(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                      const MeteorConfig& config, const SynonymLexicon& lexicon, Level level);

}  // namespace mtqual
