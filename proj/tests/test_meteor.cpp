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

#include <doctest.h>

#include <cmath>

#include "meteor.hpp"
#include "oracles.hpp"
#include "stemmer.hpp"
#include "support.hpp"

using namespace mtqual;
using testing::caught;
using testing::seg;

namespace {

MeteorConfig exact_only() {
  MeteorConfig c;
  c.stages = {MatchStage::exact};
  return c;
}

std::vector<oracle::Pair> as_pairs(const Alignment& a) {
  std::vector<oracle::Pair> out;
  for (const auto& p : a.pairs) out.push_back({p.candidate, p.reference});
  return out;
}

void check_injective(const Alignment& a, std::size_t cand_len, std::size_t ref_len) {
  std::vector<int> c(cand_len, 0), r(ref_len, 0);
  for (const auto& p : a.pairs) {
    REQUIRE(p.candidate < cand_len);
    REQUIRE(p.reference < ref_len);
    CHECK(++c[p.candidate] == 1);
    CHECK(++r[p.reference] == 1);
  }
}

}  // namespace

TEST_CASE("identity alignment") {
  const auto a = align(seg("a b c"), seg("a b c"), {}, {});
  CHECK(as_pairs(a) == std::vector<oracle::Pair>{{0, 0}, {1, 1}, {2, 2}});
  CHECK(a.crossings == 0);
  CHECK(a.chunk_count == 1);
}

TEST_CASE("swapped pair has one crossing and two chunks") {
  const auto a = align(seg("b a"), seg("a b"), exact_only(), {});
  CHECK(a.pairs.size() == 2);
  CHECK(a.crossings == 1);
  CHECK(a.chunk_count == 2);
}

TEST_CASE("each word maps to at most one word") {
  const auto a = align(seg("a a"), seg("a"), {}, {});
  REQUIRE(a.pairs.size() == 1);
  CHECK(as_pairs(a) == std::vector<oracle::Pair>{{0, 0}});
}

TEST_CASE("fewer crossings win among maximum matchings") {
  // "the" can pair either way; the crossing-free choice keeps order.
  const auto a = align(seg("the cat the dog"), seg("the dog the cat"), exact_only(), {});
  CHECK(a.pairs.size() == 4);
  CHECK(a.crossings == oracle::crossings(as_pairs(a)));
  const auto o = oracle::stage_alignment(4, 4, {}, [&](std::size_t i, std::size_t j) {
    return testing::words("the cat the dog")[i] == testing::words("the dog the cat")[j];
  });
  CHECK(as_pairs(a) == o);
}

TEST_CASE("simple mode is the harmonic mean of P and R") {
  const auto s = meteor_segment(seg("a b c d"), seg("a b x y"), {}, {});
  CHECK(s.matches == 2);
  CHECK(s.precision == 0.5);
  CHECK(s.recall == 0.5);
  CHECK(s.value == 0.5);
  CHECK(meteor_segment(seg("a b c"), seg("a b c"), {}, {}).value == 1.0);
  CHECK(meteor_segment(seg("a b"), seg("c d"), {}, {}).value == 0.0);
  CHECK(meteor_segment(seg(""), seg("c d"), {}, {}).value == 0.0);
  CHECK(caught([] { meteor_segment(seg(""), seg(""), {}, {}); }).kind == ErrorKind::scoring);
}

TEST_CASE("weighted mode applies the fragmentation penalty") {
  MeteorConfig c;
  c.mode = MeteorMode::weighted_penalized;
  const auto s = meteor_segment(seg("b a c d"), seg("a b c d"), c, {});
  REQUIRE(s.matches == 4);
  const double m = 4.0;
  const double fmean = 1.0;
  CHECK(s.chunks == 3);
  CHECK(std::abs(s.penalty - 0.5 * std::pow(3.0 / m, 3.0)) <= 1e-15);
  CHECK(std::abs(s.value - fmean * (1.0 - s.penalty)) <= 1e-15);
}

TEST_CASE("stage alignment equals exhaustive enumeration") {
  testing::Rng rng(61);
  const std::vector<std::string> vocab{"a", "b", "c", "runs", "run", "running"};
  MeteorConfig config;
  config.stages = {MatchStage::exact, MatchStage::stem};
  for (int trial = 0; trial < 300; ++trial) {
    const Segment c = rng.segment(0, 7, vocab);
    const Segment r = rng.segment(0, 7, vocab);
    const auto a = align(c, r, config, {});
    CHECK_FALSE(a.heuristic);
    const auto exact = oracle::stage_alignment(c.size(), r.size(), {}, [&](std::size_t i, std::size_t j) {
      return c.tokens[i] == r.tokens[j];
    });
    auto stemmed = oracle::stage_alignment(c.size(), r.size(), exact, [&](std::size_t i, std::size_t j) {
      return stem(c.tokens[i]) == stem(r.tokens[j]);
    });
    std::vector<oracle::Pair> expected = exact;
    expected.insert(expected.end(), stemmed.begin(), stemmed.end());
    std::sort(expected.begin(), expected.end());
    CHECK(as_pairs(a) == expected);
    CHECK(a.crossings == oracle::crossings(expected));
  }
}

TEST_CASE("alignments are injective, including the beam-search path") {
  testing::Rng rng(62);
  const auto vocab = testing::letters(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Segment c = rng.segment(0, 20, vocab);
    const Segment r = rng.segment(0, 20, vocab);
    const auto a = align(c, r, exact_only(), {});
    check_injective(a, c.size(), r.size());
    // Exhaustive search is exponential; long pairs use the per-type minimum count.
    std::size_t expected = 0;
    if (std::max(c.size(), r.size()) <= 8) {
      expected = oracle::exhaustive_matching(c.tokens, r.tokens);
    } else {
      for (const auto& w : vocab) {
        expected += std::min(std::count(c.tokens.begin(), c.tokens.end(), w), std::count(r.tokens.begin(), r.tokens.end(), w));
      }
    }
    CHECK(a.pairs.size() == expected);
    if (std::max(c.size(), r.size()) > 12 && !a.pairs.empty()) CHECK(a.heuristic);
  }
}

TEST_CASE("long inputs fall back to beam search and say so") {
  const Segment long_seg = seg("a b c d e f g h i j k l m n");
  const auto s = meteor_segment(long_seg, long_seg, {}, {});
  CHECK(s.value == 1.0);
  CHECK(std::find(s.flags.begin(), s.flags.end(), "heuristic_alignment") != s.flags.end());
}

TEST_CASE("chunk count is 1 exactly for one contiguous monotone block") {
  testing::Rng rng(63);
  const auto vocab = testing::letters(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Segment c = rng.segment(1, 8, vocab);
    const Segment r = rng.segment(1, 8, vocab);
    const auto a = align(c, r, exact_only(), {});
    if (a.pairs.empty()) {
      CHECK(a.chunk_count == 0);
      continue;
    }
    bool contiguous = true;
    for (std::size_t k = 1; k < a.pairs.size(); ++k) {
      contiguous = contiguous && a.pairs[k].candidate == a.pairs[k - 1].candidate + 1 &&
                   a.pairs[k].reference == a.pairs[k - 1].reference + 1;
    }
    CHECK((a.chunk_count == 1) == contiguous);
    CHECK(a.chunk_count >= 1);
    CHECK(a.chunk_count <= a.pairs.size());
  }
}

TEST_CASE("scores stay in [0,1] and the penalty recomputes") {
  testing::Rng rng(64);
  const auto vocab = testing::letters(4);
  MeteorConfig weighted;
  weighted.mode = MeteorMode::weighted_penalized;
  for (int trial = 0; trial < 300; ++trial) {
    const Segment c = rng.segment(1, 8, vocab);
    const Segment r = rng.segment(1, 8, vocab);
    const auto simple = meteor_segment(c, r, {}, {});
    const auto w = meteor_segment(c, r, weighted, {});
    CHECK(simple.value >= 0.0);
    CHECK(simple.value <= 1.0);
    CHECK(w.value >= 0.0);
    CHECK(w.value <= 1.0);
    if (w.matches > 0) {
      const double expected = 0.5 * std::pow(static_cast<double>(w.chunks) / static_cast<double>(w.matches), 3.0);
      CHECK(std::abs(w.penalty - expected) <= 1e-15);
      const double p = static_cast<double>(w.matches) / static_cast<double>(c.size());
      const double rr = static_cast<double>(w.matches) / static_cast<double>(r.size());
      CHECK(std::abs(w.fmean - p * rr / (0.9 * p + 0.1 * rr)) <= 1e-15);
    }
  }
}

TEST_CASE("synonym lexicon groups, file format and stage monotonicity") {
  testing::TempDir dir;
  testing::write_file(dir / "syn.txt", "# groups\nBig large huge\n\nsmall little\nlarge grand\n");
  const auto lex = SynonymLexicon::from_file(dir / "syn.txt");
  CHECK(lex.group_count() == 3);
  CHECK(lex.synonyms("big", "huge"));
  CHECK(lex.synonyms("huge", "big"));
  CHECK(lex.synonyms("large", "grand"));
  CHECK_FALSE(lex.synonyms("big", "grand"));
  CHECK_FALSE(lex.synonyms("big", "small"));
  CHECK_FALSE(lex.synonyms("big", "unknown"));
  CHECK(caught([&] { SynonymLexicon::from_file(dir / "missing.txt"); }).kind == ErrorKind::io);

  const auto a = align(seg("a big house"), seg("a large house"), {}, lex);
  REQUIRE(a.pairs.size() == 3);
  CHECK(a.pairs[1].stage == MatchStage::synonym);

  testing::Rng rng(65);
  const std::vector<std::string> vocab{"big", "large", "huge", "small", "little", "a", "b"};
  MeteorConfig without;
  without.stages = {MatchStage::exact, MatchStage::stem};
  for (int trial = 0; trial < 300; ++trial) {
    const Segment c = rng.segment(0, 8, vocab);
    const Segment r = rng.segment(0, 8, vocab);
    CHECK(align(c, r, {}, lex).pairs.size() >= align(c, r, without, lex).pairs.size());
  }
}

TEST_CASE("stem stage links inflected forms") {
  const auto a = align(seg("he was running fast"), seg("he runs fast"), {}, {});
  REQUIRE(a.pairs.size() == 3);
  CHECK(a.pairs[1].stage == MatchStage::stem);
  CHECK(a.pairs[1].candidate == 2);
  CHECK(a.pairs[1].reference == 1);
}

TEST_CASE("best reference version and length-weighted corpus mean") {
  const auto cands = testing::segs({"a b c d", "x y"});
  const std::vector<SegmentList> refs{{seg("a b q q"), seg("a b c d")}, {seg("x z"), seg("w w")}};
  const auto sentences = meteor_score(cands, refs, {}, {}, Level::sentence);
  REQUIRE(sentences.size() == 2);
  CHECK(sentences[0].value == 1.0);
  CHECK(sentences[0].reference_version == 1);
  CHECK(sentences[1].value == 0.5);
  CHECK(sentences[1].reference_version == 0);
  const auto corpus = meteor_score(cands, refs, {}, {}, Level::corpus)[0];
  CHECK(std::abs(corpus.value - (8.0 * 1.0 + 4.0 * 0.5) / 12.0) <= 1e-15);
}

TEST_CASE("configuration validation") {
  MeteorConfig c;
  c.stages.clear();
  CHECK(caught([&] { c.validate(); }).kind == ErrorKind::invalid_argument);
  c = {};
  c.alpha = 1.0;
  CHECK(caught([&] { c.validate(); }).kind == ErrorKind::invalid_argument);
  c = {};
  c.gamma = 1.5;
  CHECK(caught([&] { c.validate(); }).kind == ErrorKind::invalid_argument);
  c = {};
  c.penalty_power = 0.0;
  CHECK(caught([&] { c.validate(); }).kind == ErrorKind::invalid_argument);
  CHECK(stage_from_string("synonym") == MatchStage::synonym);
  CHECK(caught([] { stage_from_string("paraphrase"); }).kind == ErrorKind::invalid_argument);
}
