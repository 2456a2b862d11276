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

#include "gtm.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "errors.hpp"

namespace mtqual {

void GtmConfig::validate() const {
  if (!(exponent >= 1.0)) fail(ErrorKind::invalid_argument, "GTM exponent must be at least 1");
}

std::size_t maximum_match_size(const Segment& candidate, const Segment& reference) {
  std::map<std::string_view, std::size_t> cand_counts;
  for (const auto& t : candidate.tokens) ++cand_counts[t];
  std::size_t size = 0;
  std::map<std::string_view, std::size_t> ref_counts;
  for (const auto& t : reference.tokens) ++ref_counts[t];
  for (const auto& [word, c] : cand_counts) {
    if (auto it = ref_counts.find(word); it != ref_counts.end()) size += std::min(c, it->second);
  }
  return size;
}

double match_size(const Segment& candidate, const Segment& reference, double exponent) {
  if (exponent == 1.0) return static_cast<double>(maximum_match_size(candidate, reference));
  const auto& c = candidate.tokens;
  const auto& r = reference.tokens;
  std::vector<bool> used_c(c.size(), false), used_r(r.size(), false);
  double sum = 0.0;
  for (;;) {
    std::size_t best_len = 0, best_i = 0, best_j = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (used_c[i]) continue;
      for (std::size_t j = 0; j < r.size(); ++j) {
        std::size_t len = 0;
        while (i + len < c.size() && j + len < r.size() && !used_c[i + len] && !used_r[j + len] &&
               c[i + len] == r[j + len]) {
          ++len;
        }
        if (len > best_len) {
          best_len = len;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_len == 0) break;
    for (std::size_t k = 0; k < best_len; ++k) used_c[best_i + k] = used_r[best_j + k] = true;
    sum += std::pow(static_cast<double>(best_len), exponent);
  }
  return std::pow(sum, 1.0 / exponent);
}

GtmScore gtm_from_counts(double match, std::size_t candidate_length, std::size_t reference_length) {
  if (candidate_length == 0 && reference_length == 0) {
    fail(ErrorKind::scoring, "GTM is undefined when candidate and reference are both empty");
  }
  GtmScore s;
  s.match_size = match;
  s.candidate_length = candidate_length;
  s.reference_length = reference_length;
  if (candidate_length == 0 || reference_length == 0) {
    s.flags.push_back("degenerate");
    return s;
  }
  s.precision = match / static_cast<double>(candidate_length);
  s.recall = match / static_cast<double>(reference_length);
  if (s.precision + s.recall > 0.0) s.f_measure = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

namespace {

// Best-F reference version for one segment; segments where every version
// leaves both sides empty are reported through the thrown error.
GtmScore best_segment(const Segment& candidate, const SegmentList& versions, const GtmConfig& config) {
  if (versions.empty()) fail(ErrorKind::alignment, "GTM needs at least one reference version");
  GtmScore best;
  bool have = false;
  for (std::size_t v = 0; v < versions.size(); ++v) {
    if (candidate.empty() && versions[v].empty()) continue;
    GtmScore s = gtm_from_counts(match_size(candidate, versions[v], config.exponent), candidate.size(), versions[v].size());
    s.reference_version = v;
    if (!have || s.f_measure > best.f_measure) {
      best = std::move(s);
      have = true;
    }
  }
  if (!have) gtm_from_counts(0.0, 0, 0);
  return best;
}

}  // namespace

std::vector<GtmScore> gtm_score(std::span<const Segment> candidates, std::span<const SegmentList> references,
                                const GtmConfig& config, Level level) {
  config.validate();
  if (candidates.size() != references.size()) fail(ErrorKind::alignment, "GTM inputs are not aligned");
  std::vector<GtmScore> out;
  if (level == Level::sentence) {
    for (std::size_t i = 0; i < candidates.size(); ++i) out.push_back(best_segment(candidates[i], references[i], config));
    return out;
  }
  double match = 0.0;
  std::size_t cand_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].empty() && std::all_of(references[i].begin(), references[i].end(),
                                             [](const Segment& s) { return s.empty(); })) {
      continue;
    }
    const GtmScore s = best_segment(candidates[i], references[i], config);
    match += s.match_size;
    cand_len += s.candidate_length;
    ref_len += s.reference_length;
  }
  out.push_back(gtm_from_counts(match, cand_len, ref_len));
  return out;
}

}  // namespace mtqual
