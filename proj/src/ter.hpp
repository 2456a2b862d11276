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
#include "json.hpp"

namespace mtqual {

struct TerConfig {
  std::size_t max_shift_block = 10;
  std::size_t max_iterations = 50;

  void validate() const;
};

struct ShiftedBlock {
  std::size_t source_start = 0;  // block start in the sequence before the shift
  std::size_t length = 0;
  std::size_t destination = 0;   // insertion index once the block is removed
  std::size_t edits_before = 0;  // shifts so far + edit distance, before this shift
  std::size_t edits_after = 0;
};

struct EditTrace {
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::size_t shifts = 0;
  std::size_t total_edits = 0;
  std::vector<ShiftedBlock> shifted_blocks;
  bool block_cap_hit = false;
  bool iteration_cap_hit = false;
};

nlohmann::json to_json(const EditTrace& trace);

struct TerScore {
  double value = 0.0;  // may exceed 1
  EditTrace edits;
  double avg_reference_length = 0.0;
  std::size_t reference_version = 0;
  std::vector<std::string> flags;
};

/// Word-level Levenshtein distance with unit costs.
std::size_t word_edit_distance(std::span<const Token> candidate, std::span<const Token> reference);
std::size_t word_edit_distance(const Segment& candidate, const Segment& reference);

/// Greedy block-shift search followed by edit distance. A block may move
/// only if it equals some reference span it is not already aligned with;
/// each round applies the single shift with the largest strict reduction of
/// total edits (a shift costs one edit).
EditTrace ter_edits(const Tokens& candidate, const Tokens& reference, const TerConfig& config = {});

/// Fewest edits over the reference versions divided by their average
/// length. Throws Error(scoring) if every reference is empty.
TerScore ter_score(const Segment& candidate, std::span<const Segment> references, const TerConfig& config = {});

/// Corpus level divides pooled edits by pooled average reference lengths.
std::vector<TerScore> ter_corpus(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                 const TerConfig& config, Level level);

}  // namespace mtqual
