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

#include "corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "errors.hpp"

namespace mtqual {

namespace {

// Byte offset of the first ill-formed UTF-8 sequence, or npos.
std::size_t find_invalid_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) return static_cast<std::size_t>(start);
  }
  return std::string_view::npos;
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || normalizer == nullptr) fail(ErrorKind::ingestion, "ICU NFC normalizer unavailable");
  return *normalizer;
}

icu::UnicodeString normalize(icu::UnicodeString text, bool case_fold) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(text, status);
  if (case_fold) {
    out.foldCase();
    // Folding can produce unnormalized sequences (e.g. U+0130).
    out = nfc().normalize(out, status);
  }
  if (U_FAILURE(status)) fail(ErrorKind::ingestion, std::string("normalization failed: ") + u_errorName(status));
  return out;
}

bool is_punctuation(UChar32 c) { return u_ispunct(c) != 0; }

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0 || c == 0x200B; }

}  // namespace

nlohmann::json to_json(const TokenizationPolicy& policy) {
  return {{"case_fold", policy.case_fold}, {"split_punctuation", policy.split_punctuation}, {"normalization", "NFC"}};
}

TokenizationPolicy policy_from_json(const nlohmann::json& j) {
  TokenizationPolicy policy;
  if (j.is_null()) return policy;
  policy.case_fold = j.value("case_fold", policy.case_fold);
  policy.split_punctuation = j.value("split_punctuation", policy.split_punctuation);
  return policy;
}

Tokens tokenize(std::string_view text, const TokenizationPolicy& policy) {
  if (const auto bad = find_invalid_utf8(text); bad != std::string_view::npos) {
    fail(ErrorKind::ingestion, "invalid UTF-8 at byte offset " + std::to_string(bad));
  }
  const icu::UnicodeString normalized =
      normalize(icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))),
                policy.case_fold);

  Tokens tokens;
  icu::UnicodeString current;
  auto flush = [&] {
    if (current.isEmpty()) return;
    std::string utf8;
    current.toUTF8String(utf8);
    tokens.push_back(std::move(utf8));
    current.remove();
  };

  for (int32_t i = 0; i < normalized.length();) {
    const UChar32 c = normalized.char32At(i);
    i += U16_LENGTH(c);
    if (is_space(c)) {
      flush();
    } else if (policy.split_punctuation && is_punctuation(c)) {
      flush();
      current.append(c);
      flush();
    } else {
      current.append(c);
    }
  }
  flush();
  return tokens;
}

std::string detokenize(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

Segment make_segment(std::string id, Tokens tokens) {
  Segment s;
  s.id = std::move(id);
  s.text = detokenize(tokens);
  s.tokens = std::move(tokens);
  return s;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string data = buffer.str();

  std::vector<std::string> lines;
  std::string line;
  for (char ch : data) {
    if (ch == '\n') {
      lines.push_back(std::move(line));
      line.clear();
    } else if (ch != '\r') {
      line.push_back(ch);
    }
  }
  if (!line.empty()) lines.push_back(std::move(line));
  return lines;
}

SegmentList segments_from_lines(const std::vector<std::string>& lines, std::string_view id_prefix,
                                const TokenizationPolicy& policy, std::string_view origin) {
  SegmentList segments;
  segments.reserve(lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    Segment s;
    s.id = std::string(id_prefix) + ":" + std::to_string(k + 1);
    s.text = lines[k];
    try {
      s.tokens = tokenize(lines[k], policy);
    } catch (const Error& e) {
      const std::string where = origin.empty() ? std::string(id_prefix) : std::string(origin);
      fail(e.kind(), where + " line " + std::to_string(k + 1) + ": " + e.what());
    }
    segments.push_back(std::move(s));
  }
  return segments;
}

SegmentList load_segments(const std::filesystem::path& path, std::string_view id_prefix,
                          const TokenizationPolicy& policy) {
  return segments_from_lines(read_lines(path), id_prefix, policy, path.string());
}

EvaluationSet EvaluationSet::assemble(std::vector<DocumentInput> documents, TokenizationPolicy policy,
                                      std::map<std::string, std::string> origins) {
  if (documents.empty()) fail(ErrorKind::alignment, "evaluation set has no documents");
  auto origin = [&](const std::string& key) {
    auto it = origins.find(key);
    return it == origins.end() ? key : it->second;
  };

  EvaluationSet set;
  set.policy_ = policy;
  std::set<std::string> seen_docs;
  for (auto& doc : documents) {
    if (!seen_docs.insert(doc.id).second) fail(ErrorKind::alignment, "duplicate document id: " + doc.id);
    if (doc.references.empty()) fail(ErrorKind::alignment, "document " + doc.id + " has no reference version");
    if (doc.systems.empty()) fail(ErrorKind::alignment, "document " + doc.id + " has no system output");

    std::vector<std::string> systems;
    for (const auto& [name, _] : doc.systems) systems.push_back(name);
    if (set.documents_.empty()) {
      set.systems_ = systems;
      set.reference_versions_ = doc.references.size();
    } else if (systems != set.systems_) {
      fail(ErrorKind::alignment, "document " + doc.id + " does not list the same systems as the first document");
    } else if (doc.references.size() != set.reference_versions_) {
      fail(ErrorKind::alignment, "document " + doc.id + " has " + std::to_string(doc.references.size()) +
                                     " reference versions, expected " + std::to_string(set.reference_versions_));
    }

    const std::size_t expected = doc.references.front().size();
    const std::string anchor = origin(doc.id + "/ref1");
    auto check = [&](const SegmentList& list, const std::string& key) {
      if (list.size() != expected) {
        fail(ErrorKind::alignment, "line-count mismatch in document " + doc.id + ": " + origin(key) + " has " +
                                       std::to_string(list.size()) + " segments but " + anchor + " has " +
                                       std::to_string(expected));
      }
    };
    for (std::size_t v = 1; v < doc.references.size(); ++v) check(doc.references[v], doc.id + "/ref" + std::to_string(v + 1));
    for (const auto& [name, list] : doc.systems) check(list, doc.id + "/" + name);
    if (!doc.source.empty() && doc.source.size() != expected) {
      fail(ErrorKind::alignment, "line-count mismatch in document " + doc.id + ": " + origin(doc.id + "/source") +
                                     " has " + std::to_string(doc.source.size()) + " lines but " + anchor + " has " +
                                     std::to_string(expected));
    }

    set.documents_.push_back(doc.id);
    for (auto& [name, list] : doc.systems) set.candidates_[{name, doc.id}] = std::move(list);
    set.references_[doc.id] = std::move(doc.references);
    set.source_[doc.id] = std::move(doc.source);
  }
  return set;
}

const SegmentList& EvaluationSet::candidates(const std::string& system, const std::string& document) const {
  auto it = candidates_.find({system, document});
  if (it == candidates_.end()) fail(ErrorKind::not_found, "no output for system " + system + " in document " + document);
  return it->second;
}

const std::vector<SegmentList>& EvaluationSet::references(const std::string& document) const {
  auto it = references_.find(document);
  if (it == references_.end()) fail(ErrorKind::not_found, "unknown document " + document);
  return it->second;
}

const std::vector<std::string>& EvaluationSet::source(const std::string& document) const {
  auto it = source_.find(document);
  if (it == source_.end()) fail(ErrorKind::not_found, "unknown document " + document);
  return it->second;
}

std::size_t EvaluationSet::segment_count(const std::string& document) const {
  return references(document).front().size();
}

EvaluationSet EvaluationSet::without_system(const std::string& system) const {
  EvaluationSet copy = *this;
  std::erase(copy.systems_, system);
  std::erase_if(copy.candidates_, [&](const auto& entry) { return entry.first.first == system; });
  return copy;
}

EvaluationSet load_evaluation_set(const nlohmann::json& manifest, const std::filesystem::path& base_dir,
                                  const TokenizationPolicy& policy) {
  if (!manifest.is_object() || !manifest.contains("documents") || !manifest["documents"].is_array()) {
    fail(ErrorKind::invalid_argument, "manifest must be an object with a \"documents\" array");
  }
  auto resolve = [&](const nlohmann::json& p) {
    if (!p.is_string()) fail(ErrorKind::invalid_argument, "manifest paths must be strings");
    std::filesystem::path path = p.get<std::string>();
    return path.is_absolute() ? path : base_dir / path;
  };

  std::vector<DocumentInput> docs;
  std::map<std::string, std::string> origins;
  for (const auto& d : manifest["documents"]) {
    DocumentInput doc;
    if (!d.contains("id") || !d["id"].is_string()) fail(ErrorKind::invalid_argument, "manifest document without string id");
    doc.id = d["id"].get<std::string>();
    if (!d.contains("systems") || !d["systems"].is_object()) {
      fail(ErrorKind::invalid_argument, "document " + doc.id + ": \"systems\" must be an object");
    }
    if (!d.contains("references") || !d["references"].is_array()) {
      fail(ErrorKind::invalid_argument, "document " + doc.id + ": \"references\" must be an array");
    }
    for (const auto& [name, p] : d["systems"].items()) {
      const auto path = resolve(p);
      origins[doc.id + "/" + name] = path.string();
      doc.systems[name] = load_segments(path, doc.id, policy);
    }
    std::size_t v = 0;
    for (const auto& p : d["references"]) {
      const auto path = resolve(p);
      origins[doc.id + "/ref" + std::to_string(++v)] = path.string();
      doc.references.push_back(load_segments(path, doc.id, policy));
    }
    if (d.contains("source")) {
      const auto path = resolve(d["source"]);
      origins[doc.id + "/source"] = path.string();
      doc.source = read_lines(path);
    }
    docs.push_back(std::move(doc));
  }
  return EvaluationSet::assemble(std::move(docs), policy, std::move(origins));
}

EvaluationSet load_evaluation_set(const std::filesystem::path& manifest, const TokenizationPolicy& policy) {
  std::ifstream in(manifest);
  if (!in) fail(ErrorKind::io, "cannot open manifest: " + manifest.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_argument, "manifest " + manifest.string() + " is not valid JSON: " + e.what());
  }
  return load_evaluation_set(j, manifest.parent_path(), policy);
}

EvaluationSet load_single(const std::filesystem::path& candidate, const std::vector<std::filesystem::path>& references,
                          const TokenizationPolicy& policy) {
  if (references.empty()) fail(ErrorKind::invalid_argument, "at least one reference file is required");
  DocumentInput doc;
  doc.id = "doc1";
  std::map<std::string, std::string> origins;
  origins["doc1/candidate"] = candidate.string();
  doc.systems["candidate"] = load_segments(candidate, doc.id, policy);
  for (std::size_t v = 0; v < references.size(); ++v) {
    origins["doc1/ref" + std::to_string(v + 1)] = references[v].string();
    doc.references.push_back(load_segments(references[v], doc.id, policy));
  }
  std::vector<DocumentInput> docs;
  docs.push_back(std::move(doc));
  return EvaluationSet::assemble(std::move(docs), policy, std::move(origins));
}

}  // namespace mtqual
