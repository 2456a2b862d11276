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

#include "ter.hpp"

#include <algorithm>
#include <limits>

#include "errors.hpp"

namespace mtqual {

void TerConfig::validate() const {
  if (max_shift_block == 0) fail(ErrorKind::invalid_argument, "TER max shift block must be at least 1");
  if (max_iterations == 0) fail(ErrorKind::invalid_argument, "TER max iterations must be at least 1");
}

nlohmann::json to_json(const EditTrace& trace) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : trace.shifted_blocks) {
    blocks.push_back({{"source_start", b.source_start},
                      {"length", b.length},
                      {"destination", b.destination},
                      {"edits_before", b.edits_before},
                      {"edits_after", b.edits_after}});
  }
  return {{"insertions", trace.insertions},       {"deletions", trace.deletions},
          {"substitutions", trace.substitutions}, {"shifts", trace.shifts},
          {"total_edits", trace.total_edits},     {"shifted_blocks", blocks},
          {"block_cap_hit", trace.block_cap_hit}, {"iteration_cap_hit", trace.iteration_cap_hit}};
}

namespace {

enum class Op : char { match, substitute, remove, insert };

struct Levenshtein {
  std::size_t distance = 0;
  std::vector<Op> ops;                 // hypothesis -> reference, in order
  std::vector<long> hyp_to_ref;        // exact-match partner or -1
  std::vector<long> ref_to_hyp_any;    // hypothesis position on a match/substitute, or -1
};

Levenshtein levenshtein(std::span<const Token> hyp, std::span<const Token> ref) {
  const std::size_t n = hyp.size(), m = ref.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  Levenshtein out;
  out.distance = at(n, m);
  out.hyp_to_ref.assign(n, -1);
  out.ref_to_hyp_any.assign(m, -1);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = hyp[i - 1] == ref[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        out.ops.push_back(same ? Op::match : Op::substitute);
        if (same) out.hyp_to_ref[i - 1] = static_cast<long>(j - 1);
        out.ref_to_hyp_any[j - 1] = static_cast<long>(i - 1);
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      out.ops.push_back(Op::remove);
      --i;
    } else {
      out.ops.push_back(Op::insert);
      --j;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

Tokens apply_shift(const Tokens& hyp, std::size_t start, std::size_t length, std::size_t destination) {
  Tokens rest;
  rest.reserve(hyp.size());
  rest.insert(rest.end(), hyp.begin(), hyp.begin() + static_cast<long>(start));
  rest.insert(rest.end(), hyp.begin() + static_cast<long>(start + length), hyp.end());
  rest.insert(rest.begin() + static_cast<long>(destination), hyp.begin() + static_cast<long>(start),
              hyp.begin() + static_cast<long>(start + length));
  return rest;
}

}  // namespace

std::size_t word_edit_distance(std::span<const Token> candidate, std::span<const Token> reference) {
  const std::size_t m = reference.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= candidate.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = std::min({prev[j - 1] + (candidate[i - 1] == reference[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::size_t word_edit_distance(const Segment& candidate, const Segment& reference) {
  return word_edit_distance(std::span<const Token>(candidate.tokens), std::span<const Token>(reference.tokens));
}

EditTrace ter_edits(const Tokens& candidate, const Tokens& reference, const TerConfig& config) {
  config.validate();
  EditTrace trace;
  Tokens hyp = candidate;
  Levenshtein lev = levenshtein(hyp, reference);

  for (std::size_t iteration = 0;; ++iteration) {
    if (lev.distance == 0) break;
    if (iteration == config.max_iterations) {
      trace.iteration_cap_hit = true;
      break;
    }
    long best_gain = 0;
    std::size_t best_start = 0, best_len = 0, best_dest = 0, best_distance = 0;
    Levenshtein best_lev;

    const std::size_t n = hyp.size();
    for (std::size_t start = 0; start < n; ++start) {
      for (std::size_t len = 1; len <= config.max_shift_block && start + len <= n; ++len) {
        for (std::size_t j = 0; j + len <= reference.size(); ++j) {
          if (!std::equal(hyp.begin() + static_cast<long>(start), hyp.begin() + static_cast<long>(start + len),
                          reference.begin() + static_cast<long>(j))) {
            continue;
          }
          bool aligned = true;
          for (std::size_t k = 0; k < len && aligned; ++k) {
            aligned = lev.hyp_to_ref[start + k] == static_cast<long>(j + k);
          }
          if (aligned) continue;
          if (len == config.max_shift_block && start + len < n && j + len < reference.size() &&
              hyp[start + len] == reference[j + len]) {
            trace.block_cap_hit = true;
          }

          // Destinations: right after the hypothesis word covering ref j-1,
          // or right before the one covering ref j+len.
          std::vector<std::size_t> destinations;
          auto add_after = [&](long h) {
            const auto pos = static_cast<std::size_t>(h + 1);
            if (pos <= start) destinations.push_back(pos);
            else if (pos >= start + len) destinations.push_back(pos - len);
          };
          if (j == 0) {
            destinations.push_back(0);
          } else {
            for (long r = static_cast<long>(j) - 1; r >= 0; --r) {
              if (lev.ref_to_hyp_any[static_cast<std::size_t>(r)] >= 0) {
                add_after(lev.ref_to_hyp_any[static_cast<std::size_t>(r)]);
                break;
              }
              if (r == 0) destinations.push_back(0);
            }
          }
          for (std::size_t r = j + len; r < reference.size(); ++r) {
            if (lev.ref_to_hyp_any[r] >= 0) {
              add_after(lev.ref_to_hyp_any[r] - 1);
              break;
            }
          }
          std::sort(destinations.begin(), destinations.end());
          destinations.erase(std::unique(destinations.begin(), destinations.end()), destinations.end());

          for (std::size_t dest : destinations) {
            if (dest == start) continue;
            Tokens moved = apply_shift(hyp, start, len, dest);
            Levenshtein after = levenshtein(moved, reference);
            const long gain = static_cast<long>(lev.distance) - static_cast<long>(after.distance) - 1;
            if (gain > best_gain) {
              best_gain = gain;
              best_start = start;
              best_len = len;
              best_dest = dest;
              best_distance = after.distance;
              best_lev = std::move(after);
            }
          }
        }
      }
    }
    if (best_gain <= 0) break;

    ShiftedBlock block;
    block.source_start = best_start;
    block.length = best_len;
    block.destination = best_dest;
    block.edits_before = trace.shifts + lev.distance;
    block.edits_after = trace.shifts + 1 + best_distance;
    trace.shifted_blocks.push_back(block);
    ++trace.shifts;
    hyp = apply_shift(hyp, best_start, best_len, best_dest);
    lev = std::move(best_lev);
  }

  for (Op op : lev.ops) {
    switch (op) {
      case Op::match: break;
      case Op::substitute: ++trace.substitutions; break;
      case Op::remove: ++trace.deletions; break;
      case Op::insert: ++trace.insertions; break;
    }
  }
  trace.total_edits = trace.insertions + trace.deletions + trace.substitutions + trace.shifts;
  return trace;
}

TerScore ter_score(const Segment& candidate, std::span<const Segment> references, const TerConfig& config) {
  if (references.empty()) fail(ErrorKind::scoring, "TER needs at least one reference");
  double length_sum = 0.0;
  for (const auto& r : references) length_sum += static_cast<double>(r.size());
  if (length_sum == 0.0) fail(ErrorKind::scoring, "TER is undefined when every reference is empty");

  TerScore score;
  score.avg_reference_length = length_sum / static_cast<double>(references.size());
  bool have = false;
  for (std::size_t v = 0; v < references.size(); ++v) {
    EditTrace trace = ter_edits(candidate.tokens, references[v].tokens, config);
    if (!have || trace.total_edits < score.edits.total_edits) {
      score.edits = std::move(trace);
      score.reference_version = v;
      have = true;
    }
  }
  if (score.edits.block_cap_hit) score.flags.push_back("block_cap_hit");
  if (score.edits.iteration_cap_hit) score.flags.push_back("iteration_cap_hit");
  score.value = static_cast<double>(score.edits.total_edits) / score.avg_reference_length;
  return score;
}

std::vector<TerScore> ter_corpus(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                 const TerConfig& config, Level level) {
  config.validate();
  if (candidates.size() != references.size()) fail(ErrorKind::alignment, "TER inputs are not aligned");
  std::vector<TerScore> per_segment;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    per_segment.push_back(ter_score(candidates[i], references[i], config));
  }
  if (level == Level::sentence) return per_segment;

  TerScore corpus;
  for (const auto& s : per_segment) {
    corpus.edits.insertions += s.edits.insertions;
    corpus.edits.deletions += s.edits.deletions;
    corpus.edits.substitutions += s.edits.substitutions;
    corpus.edits.shifts += s.edits.shifts;
    corpus.edits.total_edits += s.edits.total_edits;
    corpus.edits.block_cap_hit = corpus.edits.block_cap_hit || s.edits.block_cap_hit;
    corpus.edits.iteration_cap_hit = corpus.edits.iteration_cap_hit || s.edits.iteration_cap_hit;
    corpus.avg_reference_length += s.avg_reference_length;
  }
  if (corpus.avg_reference_length == 0.0) fail(ErrorKind::scoring, "TER: reference corpus is empty");
  if (corpus.edits.block_cap_hit) corpus.flags.push_back("block_cap_hit");
  if (corpus.edits.iteration_cap_hit) corpus.flags.push_back("iteration_cap_hit");
  corpus.value = static_cast<double>(corpus.edits.total_edits) / corpus.avg_reference_length;
  return {corpus};
}

}  // namespace mtqual
