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
#include <span>

#include "corpus.hpp"

namespace mtqual {

using NGram = std::vector<Token>;

/// Occurrence counts of every contiguous window of one order.
struct NGramCounts {
  std::size_t order = 1;
  std::map<NGram, std::size_t> counts;

  std::size_t total() const;
  std::size_t count(const NGram& gram) const;
  bool empty() const { return counts.empty(); }
};

/// Counts every contiguous n-token window. Throws for n == 0.
NGramCounts ngrams(std::span<const Token> tokens, std::size_t n);

/// Per-gram maximum count over several count tables of the same order.
NGramCounts max_counts(std::span<const NGramCounts> tables);

std::string ngram_key(const NGram& gram);

}  // namespace mtqual
