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

#include "meteor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "errors.hpp"
#include "stemmer.hpp"

namespace mtqual {

const char* to_string(MatchStage stage) {
  switch (stage) {
    case MatchStage::exact: return "exact";
    case MatchStage::stem: return "stem";
    case MatchStage::synonym: return "synonym";
  }
  return "exact";
}

MatchStage stage_from_string(const std::string& s) {
  if (s == "exact") return MatchStage::exact;
  if (s == "stem") return MatchStage::stem;
  if (s == "synonym") return MatchStage::synonym;
  fail(ErrorKind::invalid_argument, "unknown METEOR stage '" + s + "' (expected exact, stem, synonym)");
}

SynonymLexicon::SynonymLexicon(const std::vector<std::vector<std::string>>& groups) {
  for (const auto& group : groups) {
    if (group.empty()) continue;
    for (const auto& word : group) groups_[word].insert(group_count_);
    ++group_count_;
  }
}

SynonymLexicon SynonymLexicon::from_file(const std::filesystem::path& path, const TokenizationPolicy& policy) {
  TokenizationPolicy words = policy;
  words.split_punctuation = false;
  std::vector<std::vector<std::string>> groups;
  for (const auto& line : read_lines(path)) {
    if (line.empty() || line.front() == '#') continue;
    Tokens group = tokenize(line, words);
    if (group.size() > 1) groups.push_back(std::move(group));
  }
  return SynonymLexicon(groups);
}

bool SynonymLexicon::synonyms(const std::string& a, const std::string& b) const {
  auto ia = groups_.find(a);
  if (ia == groups_.end()) return false;
  auto ib = groups_.find(b);
  if (ib == groups_.end()) return false;
  const auto& sa = ia->second;
  const auto& sb = ib->second;
  auto x = sa.begin();
  auto y = sb.begin();
  while (x != sa.end() && y != sb.end()) {
    if (*x == *y) return true;
    if (*x < *y) ++x; else ++y;
  }
  return false;
}

std::size_t count_crossings(std::span<const AlignedPair> pairs) {
  std::size_t n = 0;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      const bool cand_order = pairs[a].candidate < pairs[b].candidate;
      const bool ref_order = pairs[a].reference < pairs[b].reference;
      if (cand_order != ref_order) ++n;
    }
  }
  return n;
}

std::size_t count_chunks(std::span<const AlignedPair> pairs) {
  if (pairs.empty()) return 0;
  std::vector<AlignedPair> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.candidate < y.candidate; });
  std::size_t chunks = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const bool contiguous = sorted[i].candidate == sorted[i - 1].candidate + 1 &&
                            sorted[i].reference == sorted[i - 1].reference + 1;
    if (!contiguous) ++chunks;
  }
  return chunks;
}

void MeteorConfig::validate() const {
  if (stages.empty()) fail(ErrorKind::invalid_argument, "METEOR needs at least one matching stage");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::invalid_argument, "METEOR alpha must lie in (0,1)");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail(ErrorKind::invalid_argument, "METEOR gamma must lie in [0,1]");
  if (!(penalty_power > 0.0)) fail(ErrorKind::invalid_argument, "METEOR penalty power must be positive");
  if (beam_width == 0) fail(ErrorKind::invalid_argument, "METEOR beam width must be positive");
}

namespace {

// One stage's matching problem: candidate positions (rows) with the reference
// positions (columns) they may pair with, ascending.
struct StageGraph {
  std::vector<std::size_t> rows;
  std::vector<std::vector<std::size_t>> adjacency;
  std::size_t columns = 0;
};

// Kuhn's augmenting-path maximum matching restricted to rows[from..] and
// columns not in `blocked`.
std::size_t max_matching(const StageGraph& g, std::size_t from, const std::vector<char>& blocked) {
  std::vector<int> owner(g.columns, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t row) {
    for (std::size_t col : g.adjacency[row]) {
      if (blocked[col] || seen[col]) continue;
      seen[col] = 1;
      if (owner[col] < 0 || augment(static_cast<std::size_t>(owner[col]))) {
        owner[col] = static_cast<int>(row);
        return true;
      }
    }
    return false;
  };
  std::size_t size = 0;
  for (std::size_t row = from; row < g.rows.size(); ++row) {
    seen.assign(g.columns, 0);
    if (augment(row)) ++size;
  }
  return size;
}

std::size_t crossings_with(std::size_t cand, std::size_t ref, std::span<const AlignedPair> others) {
  std::size_t n = 0;
  for (const auto& p : others) {
    if ((p.candidate < cand) != (p.reference < ref)) ++n;
  }
  return n;
}

bool lex_less(const std::vector<AlignedPair>& a, const std::vector<AlignedPair>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
    return x.candidate != y.candidate ? x.candidate < y.candidate : x.reference < y.reference;
  });
}

struct StageSearch {
  const StageGraph& graph;
  const std::vector<AlignedPair>& fixed;
  MatchStage stage;
  std::size_t target = 0;

  // Depth-first in lexicographic order; the first optimum found is the
  // lexicographically smallest, so equal-crossing branches are pruned.
  bool exact(std::vector<AlignedPair>& out, std::size_t node_budget) {
    std::vector<char> used(graph.columns, 0);
    std::vector<AlignedPair> current;
    std::size_t best_cross = 0;
    bool have = false;
    std::size_t nodes = 0;
    bool exhausted = false;

    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t idx, std::size_t crossings) {
      if (exhausted) return;
      if (++nodes > node_budget) {
        exhausted = true;
        return;
      }
      if (have && crossings >= best_cross) return;
      if (current.size() + max_matching(graph, idx, used) < target) return;
      if (idx == graph.rows.size()) {
        out = current;
        best_cross = crossings;
        have = true;
        return;
      }
      const std::size_t row = graph.rows[idx];
      for (std::size_t col : graph.adjacency[idx]) {
        if (used[col]) continue;
        const std::size_t added = crossings_with(row, col, fixed) + crossings_with(row, col, current);
        used[col] = 1;
        current.push_back({row, col, stage});
        dfs(idx + 1, crossings + added);
        current.pop_back();
        used[col] = 0;
      }
      dfs(idx + 1, crossings);
    };
    dfs(0, 0);
    return have && !exhausted;
  }

  struct BeamState {
    std::vector<AlignedPair> pairs;
    std::vector<char> used;
    std::size_t crossings = 0;
  };

  void beam(std::vector<AlignedPair>& out, std::size_t width) {
    std::vector<BeamState> states(1);
    states[0].used.assign(graph.columns, 0);
    for (std::size_t idx = 0; idx < graph.rows.size(); ++idx) {
      const std::size_t row = graph.rows[idx];
      std::vector<BeamState> next;
      for (const auto& s : states) {
        auto feasible = [&](const BeamState& n) {
          return n.pairs.size() + max_matching(graph, idx + 1, n.used) >= target;
        };
        for (std::size_t col : graph.adjacency[idx]) {
          if (s.used[col]) continue;
          BeamState n = s;
          n.crossings += crossings_with(row, col, fixed) + crossings_with(row, col, s.pairs);
          n.used[col] = 1;
          n.pairs.push_back({row, col, stage});
          if (feasible(n)) next.push_back(std::move(n));
        }
        if (feasible(s)) next.push_back(s);
      }
      std::stable_sort(next.begin(), next.end(), [](const BeamState& a, const BeamState& b) {
        if (a.crossings != b.crossings) return a.crossings < b.crossings;
        return lex_less(a.pairs, b.pairs);
      });
      if (next.size() > width) next.resize(width);
      states = std::move(next);
    }
    out = states.front().pairs;
  }
};

}  // namespace

Alignment align(const Segment& candidate, const Segment& reference, const MeteorConfig& config,
                const SynonymLexicon& lexicon) {
  config.validate();
  const auto& c = candidate.tokens;
  const auto& r = reference.tokens;

  std::vector<std::string> cand_stems, ref_stems;
  auto stems = [&] {
    if (!cand_stems.empty() || c.empty()) return;
    for (const auto& t : c) cand_stems.push_back(stem(t));
    for (const auto& t : r) ref_stems.push_back(stem(t));
  };

  Alignment alignment;
  std::vector<char> cand_used(c.size(), 0), ref_used(r.size(), 0);
  const bool exact_search = std::max(c.size(), r.size()) <= config.exact_search_limit;

  for (MatchStage stage : config.stages) {
    if (stage == MatchStage::stem) stems();
    auto matches = [&](std::size_t i, std::size_t j) {
      switch (stage) {
        case MatchStage::exact: return c[i] == r[j];
        case MatchStage::stem: return cand_stems[i] == ref_stems[j];
        case MatchStage::synonym: return lexicon.synonyms(c[i], r[j]);
      }
      return false;
    };

    StageGraph graph;
    graph.columns = r.size();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (cand_used[i]) continue;
      std::vector<std::size_t> cols;
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (!ref_used[j] && matches(i, j)) cols.push_back(j);
      }
      if (cols.empty()) continue;
      graph.rows.push_back(i);
      graph.adjacency.push_back(std::move(cols));
    }
    if (graph.rows.empty()) continue;

    StageSearch search{graph, alignment.pairs, stage};
    search.target = max_matching(graph, 0, std::vector<char>(graph.columns, 0));
    std::vector<AlignedPair> added;
    if (!(exact_search && search.exact(added, 2'000'000))) {
      search.beam(added, config.beam_width);
      alignment.heuristic = true;
    }
    for (const auto& p : added) {
      cand_used[p.candidate] = 1;
      ref_used[p.reference] = 1;
      alignment.pairs.push_back(p);
    }
    std::sort(alignment.pairs.begin(), alignment.pairs.end(),
              [](const auto& x, const auto& y) { return x.candidate < y.candidate; });
  }
  alignment.crossings = count_crossings(alignment.pairs);
  alignment.chunk_count = count_chunks(alignment.pairs);
  return alignment;
}

MeteorScore meteor_segment(const Segment& candidate, const Segment& reference, const MeteorConfig& config,
                           const SynonymLexicon& lexicon) {
  if (candidate.empty() && reference.empty()) {
    fail(ErrorKind::scoring, "METEOR is undefined when candidate and reference are both empty");
  }
  MeteorScore s;
  s.candidate_length = candidate.size();
  s.reference_length = reference.size();
  s.alignment = align(candidate, reference, config, lexicon);
  if (s.alignment.heuristic) s.flags.push_back("heuristic_alignment");
  s.matches = s.alignment.pairs.size();
  s.chunks = s.alignment.chunk_count;
  if (s.matches == 0) return s;

  const double m = static_cast<double>(s.matches);
  s.precision = m / static_cast<double>(candidate.size());
  s.recall = m / static_cast<double>(reference.size());
  if (config.mode == MeteorMode::simple) {
    s.fmean = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    s.value = s.fmean;
  } else {
    s.fmean = s.precision * s.recall / (config.alpha * s.precision + (1.0 - config.alpha) * s.recall);
    s.penalty = config.gamma * std::pow(static_cast<double>(s.chunks) / m, config.penalty_power);
    s.value = s.fmean * (1.0 - s.penalty);
  }
  return s;
}

std::vector<MeteorScore> meteor_score(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                      const MeteorConfig& config, const SynonymLexicon& lexicon, Level level) {
  config.validate();
  if (candidates.size() != references.size()) fail(ErrorKind::alignment, "METEOR inputs are not aligned");

  std::vector<MeteorScore> per_segment;
  per_segment.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& versions = references[i];
    if (versions.empty()) fail(ErrorKind::alignment, "METEOR needs at least one reference version");
    MeteorScore best;
    bool have = false;
    for (std::size_t v = 0; v < versions.size(); ++v) {
      if (candidates[i].empty() && versions[v].empty()) continue;
      MeteorScore s = meteor_segment(candidates[i], versions[v], config, lexicon);
      s.reference_version = v;
      if (!have || s.value > best.value) {
        best = std::move(s);
        have = true;
      }
    }
    if (!have) {
      if (level == Level::sentence) meteor_segment(candidates[i], versions.front(), config, lexicon);
      continue;
    }
    per_segment.push_back(std::move(best));
  }
  if (level == Level::sentence) return per_segment;

  MeteorScore corpus;
  double weight = 0.0, weighted = 0.0;
  for (const auto& s : per_segment) {
    const double w = static_cast<double>(s.candidate_length + s.reference_length);
    weight += w;
    weighted += w * s.value;
    corpus.matches += s.matches;
    corpus.chunks += s.chunks;
    corpus.candidate_length += s.candidate_length;
    corpus.reference_length += s.reference_length;
    if (s.alignment.heuristic && corpus.flags.empty()) corpus.flags.push_back("heuristic_alignment");
  }
  if (weight == 0.0) fail(ErrorKind::scoring, "METEOR: every segment is empty on both sides");
  corpus.value = weighted / weight;
  if (corpus.candidate_length) corpus.precision = static_cast<double>(corpus.matches) / static_cast<double>(corpus.candidate_length);
  if (corpus.reference_length) corpus.recall = static_cast<double>(corpus.matches) / static_cast<double>(corpus.reference_length);
  return {corpus};
}

}  // namespace mtqual
