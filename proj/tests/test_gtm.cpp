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

#include "gtm.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mtqual;
using testing::caught;
using testing::seg;

namespace {

bool has_flag(const std::vector<std::string>& flags, const std::string& f) {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

}  // namespace

TEST_CASE("maximum match size examples") {
  CHECK(maximum_match_size(seg("a a b"), seg("a b b")) == 2);
  CHECK(oracle::exhaustive_matching(testing::words("a a b"), testing::words("a b b")) == 2);
  CHECK(maximum_match_size(seg("a b c d"), seg("a b c d")) == 4);
  CHECK(maximum_match_size(seg("a b"), seg("c d")) == 0);
  CHECK(maximum_match_size(seg(""), seg("c d")) == 0);
}

TEST_CASE("maximum match size is symmetric, bounded and matches exhaustive search") {
  testing::Rng rng(41);
  const auto vocab = testing::letters(4);
  for (int trial = 0; trial < 500; ++trial) {
    const Segment c = rng.segment(0, 6, vocab);
    const Segment r = rng.segment(0, 6, vocab);
    const auto m = maximum_match_size(c, r);
    CHECK(m == maximum_match_size(r, c));
    CHECK(m <= std::min(c.size(), r.size()));
    CHECK(m == oracle::exhaustive_matching(c.tokens, r.tokens));
    CHECK(match_size(c, r, 1.0) == static_cast<double>(m));
  }
}

TEST_CASE("precision, recall and F") {
  const auto s = gtm_score(testing::segs({"a b"}), testing::single_refs(testing::segs({"a b c d"})), {}, Level::corpus)[0];
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 0.5);
  CHECK(std::abs(s.f_measure - 2.0 / 3.0) <= 1e-12);
  CHECK(s.match_size == 2.0);

  const auto cands = testing::segs({"the cat", "on a mat"});
  const auto same = gtm_score(cands, testing::single_refs(cands), {}, Level::corpus)[0];
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.f_measure == 1.0);
}

TEST_CASE("F is the harmonic mean and never exceeds the arithmetic mean") {
  testing::Rng rng(42);
  const auto vocab = testing::letters(4);
  for (int trial = 0; trial < 400; ++trial) {
    const Segment c = rng.segment(1, 8, vocab);
    const Segment r = rng.segment(1, 8, vocab);
    const auto s = gtm_score(std::vector<Segment>{c}, std::vector<SegmentList>{{r}}, {}, Level::sentence)[0];
    CHECK(s.precision >= 0.0);
    CHECK(s.precision <= 1.0);
    CHECK(s.recall >= 0.0);
    CHECK(s.recall <= 1.0);
    if (s.precision + s.recall > 0.0) {
      CHECK(std::abs(s.f_measure - 2.0 * s.precision * s.recall / (s.precision + s.recall)) <= 1e-12);
    } else {
      CHECK(s.f_measure == 0.0);
    }
    CHECK(s.f_measure <= (s.precision + s.recall) / 2.0 + 1e-15);
  }
}

TEST_CASE("empty sides") {
  const auto one = gtm_from_counts(0.0, 0, 3);
  CHECK(one.f_measure == 0.0);
  CHECK(has_flag(one.flags, "degenerate"));
  CHECK(has_flag(gtm_from_counts(0.0, 3, 0).flags, "degenerate"));
  CHECK(caught([] { gtm_from_counts(0.0, 0, 0); }).kind == ErrorKind::scoring);
}

TEST_CASE("multiple references keep the best F per segment") {
  const auto cands = testing::segs({"a b c"});
  const std::vector<SegmentList> refs{{seg("x y z"), seg("a b c d")}};
  const auto s = gtm_score(cands, refs, {}, Level::sentence)[0];
  CHECK(s.reference_version == 1);
  CHECK(std::abs(s.f_measure - 2.0 * 1.0 * 0.75 / 1.75) <= 1e-12);
}

TEST_CASE("corpus level pools match sizes and lengths") {
  const auto cands = testing::segs({"a b", "c d e f"});
  const auto refs = testing::single_refs(testing::segs({"a b", "c x"}));
  const auto s = gtm_score(cands, refs, {}, Level::corpus)[0];
  CHECK(s.match_size == 3.0);
  CHECK(s.candidate_length == 6);
  CHECK(s.reference_length == 4);
  CHECK(std::abs(s.precision - 0.5) <= 1e-15);
  CHECK(std::abs(s.recall - 0.75) <= 1e-15);
}

TEST_CASE("run-length exponent rewards contiguous matches") {
  CHECK(match_size(seg("a b c d"), seg("a b c d"), 2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(match_size(seg("a b x c d"), seg("a b c d"), 2.0) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(match_size(seg("d c b a"), seg("a b c d"), 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  GtmConfig bad;
  bad.exponent = 0.5;
  CHECK(caught([&] { bad.validate(); }).kind == ErrorKind::invalid_argument);
}
