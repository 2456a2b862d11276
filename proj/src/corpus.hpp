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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace mtqual {

/// A normalized word or punctuation mark. Never empty, never contains
/// whitespace.
using Token = std::string;
using Tokens = std::vector<Token>;

struct TokenizationPolicy {
  bool case_fold = true;
  bool split_punctuation = true;

  bool operator==(const TokenizationPolicy&) const = default;
};

nlohmann::json to_json(const TokenizationPolicy& policy);
TokenizationPolicy policy_from_json(const nlohmann::json& j);

/// NFC-normalizes, optionally case-folds, then splits on Unicode whitespace
/// and (optionally) emits every punctuation code point as its own token.
/// Throws Error(ingestion) naming the byte offset of the first invalid
/// UTF-8 sequence.
Tokens tokenize(std::string_view text, const TokenizationPolicy& policy = {});

/// Space-joined form of a token sequence.
std::string detokenize(const Tokens& tokens);

struct Segment {
  std::string id;
  Tokens tokens;
  std::string text;  // raw line, kept for display

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

using SegmentList = std::vector<Segment>;

/// Builds a segment directly from already-tokenized words.
Segment make_segment(std::string id, Tokens tokens);

/// Reads a UTF-8 file with one segment per line. CR characters are dropped
/// and a trailing newline does not produce an extra segment.
std::vector<std::string> read_lines(const std::filesystem::path& path);

SegmentList segments_from_lines(const std::vector<std::string>& lines, std::string_view id_prefix,
                                const TokenizationPolicy& policy, std::string_view origin = {});

SegmentList load_segments(const std::filesystem::path& path, std::string_view id_prefix,
                          const TokenizationPolicy& policy);

struct DocumentInput {
  std::string id;
  std::map<std::string, SegmentList> systems;
  std::vector<SegmentList> references;
  std::vector<std::string> source;  // optional source-language lines
};

/// Candidate output of every system plus reference versions, aligned by
/// segment position within each document.
class EvaluationSet {
 public:
  /// Validates alignment: per document every system and every reference
  /// version has the same segment count, every document has the same
  /// systems and the same number of reference versions (at least one).
  static EvaluationSet assemble(std::vector<DocumentInput> documents, TokenizationPolicy policy,
                                std::map<std::string, std::string> origins = {});

  const std::vector<std::string>& documents() const { return documents_; }
  const std::vector<std::string>& systems() const { return systems_; }
  std::size_t reference_versions() const { return reference_versions_; }
  const TokenizationPolicy& policy() const { return policy_; }

  const SegmentList& candidates(const std::string& system, const std::string& document) const;
  const std::vector<SegmentList>& references(const std::string& document) const;
  const std::vector<std::string>& source(const std::string& document) const;
  std::size_t segment_count(const std::string& document) const;

  /// A copy restricted to a subset of systems.
  EvaluationSet without_system(const std::string& system) const;

 private:
  std::vector<std::string> documents_;
  std::vector<std::string> systems_;
  std::size_t reference_versions_ = 0;
  TokenizationPolicy policy_;
  std::map<std::pair<std::string, std::string>, SegmentList> candidates_;
  std::map<std::string, std::vector<SegmentList>> references_;
  std::map<std::string, std::vector<std::string>> source_;
};

/// Manifest format:
///   {"documents":[{"id":"doc1","systems":{"E1":"path"},"references":["r1","r2"],
///                  "source":"optional path"}]}
/// Relative paths resolve against the manifest's directory.
EvaluationSet load_evaluation_set(const std::filesystem::path& manifest,
                                  const TokenizationPolicy& policy = {});

EvaluationSet load_evaluation_set(const nlohmann::json& manifest, const std::filesystem::path& base_dir,
                                  const TokenizationPolicy& policy = {});

/// Single document "doc1", single system "candidate", one reference version
/// per path. Used by the `score` subcommand.
EvaluationSet load_single(const std::filesystem::path& candidate,
                          const std::vector<std::filesystem::path>& references,
                          const TokenizationPolicy& policy = {});

}  // namespace mtqual
