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

// Helpers shared by the test binaries.

#pragma once

#include <stdlib.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "errors.hpp"

namespace testing {

// Whitespace split without normalization.
inline mtqual::Tokens words(std::string_view text) {
  std::istringstream in{std::string(text)};
  mtqual::Tokens out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline mtqual::Segment seg(std::string_view text, std::string id = "s") {
  return mtqual::make_segment(std::move(id), words(text));
}

inline mtqual::SegmentList segs(std::initializer_list<std::string_view> texts) {
  mtqual::SegmentList out;
  for (auto t : texts) out.push_back(seg(t, "s" + std::to_string(out.size() + 1)));
  return out;
}

// One reference list per segment, single version.
inline std::vector<mtqual::SegmentList> single_refs(const mtqual::SegmentList& refs) {
  std::vector<mtqual::SegmentList> out;
  for (const auto& r : refs) out.push_back({r});
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  mtqual::Tokens tokens(std::size_t min_len, std::size_t max_len, const std::vector<std::string>& vocab) {
    mtqual::Tokens out(uniform(min_len, max_len));
    for (auto& t : out) t = vocab[uniform(0, vocab.size() - 1)];
    return out;
  }
  mtqual::Segment segment(std::size_t min_len, std::size_t max_len, const std::vector<std::string>& vocab) {
    return mtqual::make_segment("r", tokens(min_len, max_len, vocab));
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline std::vector<std::string> letters(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "mtqual-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Kind and message of the mtqual::Error thrown by f, if any.
struct Caught {
  bool thrown = false;
  mtqual::ErrorKind kind = mtqual::ErrorKind::invalid_argument;
  std::string message;
};

template <typename F>
Caught caught(F&& f) {
  try {
    f();
  } catch (const mtqual::Error& e) {
    return {true, e.kind(), e.what()};
  }
  return {};
}

}  // namespace testing
