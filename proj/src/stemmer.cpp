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

#include "stemmer.hpp"

#include <algorithm>

namespace mtqual {

namespace {

// Works on word_[0..end_]; stem_end_ marks the end of the stem left by the
// last successful ends() call.
class Porter {
 public:
  explicit Porter(std::string word) : word_(std::move(word)), end_(static_cast<int>(word_.size()) - 1) {}

  std::string run() {
    if (end_ <= 1) return word_;
    step1ab();
    if (end_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return word_.substr(0, static_cast<std::size_t>(end_ + 1));
  }

 private:
  bool consonant(int i) const {
    switch (word_[static_cast<std::size_t>(i)]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 ? true : !consonant(i - 1);
      default: return true;
    }
  }

  // Number of VC sequences in word_[0..stem_end_].
  int measure() const {
    int n = 0;
    int i = 0;
    for (;;) {
      if (i > stem_end_) return n;
      if (!consonant(i)) break;
      ++i;
    }
    ++i;
    for (;;) {
      for (;;) {
        if (i > stem_end_) return n;
        if (consonant(i)) break;
        ++i;
      }
      ++i;
      ++n;
      for (;;) {
        if (i > stem_end_) return n;
        if (!consonant(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= stem_end_; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(int i) const {
    if (i < 1) return false;
    if (word_[static_cast<std::size_t>(i)] != word_[static_cast<std::size_t>(i - 1)]) return false;
    return consonant(i);
  }

  // consonant-vowel-consonant ending at i, last consonant not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !consonant(i) || consonant(i - 1) || !consonant(i - 2)) return false;
    const char ch = word_[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view suffix) {
    const int len = static_cast<int>(suffix.size());
    if (len > end_ + 1) return false;
    if (std::string_view(word_).substr(static_cast<std::size_t>(end_ + 1 - len), suffix.size()) != suffix) return false;
    stem_end_ = end_ - len;
    return true;
  }

  void set_to(std::string_view replacement) {
    word_.replace(static_cast<std::size_t>(stem_end_ + 1), std::string::npos, replacement);
    end_ = stem_end_ + static_cast<int>(replacement.size());
  }

  void replace_if_measured(std::string_view replacement) {
    if (measure() > 0) set_to(replacement);
  }

  char at(int i) const { return word_[static_cast<std::size_t>(i)]; }

  void step1ab() {
    if (at(end_) == 's') {
      if (ends("sses")) {
        end_ -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (at(end_ - 1) != 's') {
        --end_;
      }
    }
    stem_end_ = end_;
    if (ends("eed")) {
      if (measure() > 0) --end_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      end_ = stem_end_;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_consonant(end_)) {
        --end_;
        const char ch = at(end_);
        if (ch == 'l' || ch == 's' || ch == 'z') ++end_;
      } else {
        stem_end_ = end_;
        if (measure() == 1 && cvc(end_)) set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) word_[static_cast<std::size_t>(end_)] = 'i';
  }

  void step2() {
    static constexpr std::pair<std::string_view, std::string_view> rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"}, {"izer", "ize"},
        {"abli", "able"},   {"alli", "al"},     {"entli", "ent"}, {"eli", "e"},     {"ousli", "ous"},
        {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},  {"alism", "al"},  {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},  {"iviti", "ive"}, {"biliti", "ble"},
    };
    apply_first(rules);
  }

  void step3() {
    static constexpr std::pair<std::string_view, std::string_view> rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    apply_first(rules);
  }

  // The first (longest) matching suffix decides; no fallback to shorter ones.
  template <std::size_t N>
  void apply_first(const std::pair<std::string_view, std::string_view> (&rules)[N]) {
    std::string_view best;
    std::string_view replacement;
    for (const auto& [suffix, repl] : rules) {
      if (suffix.size() > best.size() && ends(suffix)) {
        best = suffix;
        replacement = repl;
      }
    }
    if (best.empty()) return;
    ends(best);
    replace_if_measured(replacement);
  }

  void step4() {
    static constexpr std::string_view suffixes[] = {
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
        "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    };
    std::string_view best;
    for (auto suffix : suffixes) {
      if (suffix.size() <= best.size() || !ends(suffix)) continue;
      if (suffix == "ion" && (stem_end_ < 0 || (at(stem_end_) != 's' && at(stem_end_) != 't'))) continue;
      best = suffix;
    }
    if (best.empty()) return;
    ends(best);
    if (measure() > 1) end_ = stem_end_;
  }

  void step5() {
    stem_end_ = end_;
    if (at(end_) == 'e') {
      const int m = measure();
      if (m > 1 || (m == 1 && !cvc(end_ - 1))) --end_;
    }
    if (at(end_) == 'l' && double_consonant(end_)) {
      stem_end_ = end_;
      if (measure() > 1) --end_;
    }
  }

  std::string word_;
  int end_;
  int stem_end_ = 0;
};

bool stemmable(std::string_view word) {
  return !word.empty() && std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2 || !stemmable(word)) return std::string(word);
  return Porter(std::string(word)).run();
}

std::string stem(std::string_view word) {
  std::string current(word);
  for (;;) {
    std::string next = porter_stem(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

}  // namespace mtqual
