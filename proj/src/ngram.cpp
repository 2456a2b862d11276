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

#include "ngram.hpp"

#include <algorithm>

#include "errors.hpp"

namespace mtqual {

std::size_t NGramCounts::total() const {
  std::size_t sum = 0;
  for (const auto& [_, c] : counts) sum += c;
  return sum;
}

std::size_t NGramCounts::count(const NGram& gram) const {
  auto it = counts.find(gram);
  return it == counts.end() ? 0 : it->second;
}

NGramCounts ngrams(std::span<const Token> tokens, std::size_t n) {
  if (n == 0) fail(ErrorKind::invalid_argument, "n-gram order must be at least 1");
  NGramCounts out;
  out.order = n;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out.counts[NGram(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return out;
}

NGramCounts max_counts(std::span<const NGramCounts> tables) {
  NGramCounts out;
  if (!tables.empty()) out.order = tables.front().order;
  for (const auto& t : tables) {
    for (const auto& [gram, c] : t.counts) {
      auto& slot = out.counts[gram];
      slot = std::max(slot, c);
    }
  }
  return out;
}

std::string ngram_key(const NGram& gram) { return detokenize(gram); }

}  // namespace mtqual
