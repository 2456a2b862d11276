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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bleu.hpp"
#include "fixtures.hpp"
#include "gtm.hpp"
#include "human.hpp"
#include "meteor.hpp"
#include "metric.hpp"
#include "nist.hpp"
#include "oracles.hpp"
#include "pipeline.hpp"
#include "stemmer.hpp"
#include "support.hpp"
#include "ter.hpp"

using namespace mtqual;

namespace {

constexpr double kIdentitySeconds = 5.0;
constexpr std::size_t kIdentitySegments = 200;
constexpr std::size_t kClipPairs = 500;
constexpr std::size_t kClipMaxLength = 8;
constexpr std::size_t kClipVocab = 5;
constexpr std::size_t kNistSegments = 20;
constexpr double kNistTolerance = 1e-9;
constexpr std::size_t kGtmMaxLength = 6;
constexpr std::size_t kMeteorPairs = 300;
constexpr std::size_t kMeteorMaxLength = 8;
constexpr std::size_t kTerPairs = 1000;
constexpr double kCorrelationTolerance = 1e-12;
constexpr std::size_t kMonotoneVectors = 100;

// Thrown by check() to fail the running criterion with a reason.
struct Failure {
  std::string reason;
};

void check(bool ok, const std::string& reason) {
  if (!ok) throw Failure{reason};
}

std::vector<MetricSpec> all_metrics() {
  std::vector<MetricSpec> out;
  for (const char* m : {"bleu", "nist", "gtm", "meteor", "ter"}) out.push_back(metric_spec_from_json({{"metric", m}}));
  return out;
}

std::string show(const Tokens& t) { return "[" + oracle::join(t) + "]"; }

std::vector<std::string> vocab(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(std::string(1, static_cast<char>('a' + i)));
  return v;
}

void identity_suite() {
  const auto start = std::chrono::steady_clock::now();
  testing::Rng rng(7);
  const auto words = vocab(12);
  for (std::size_t size : {std::size_t{1}, std::size_t{17}, kIdentitySegments}) {
    SegmentList segs;
    for (std::size_t i = 0; i < size; ++i) segs.push_back(make_segment("s" + std::to_string(i), rng.tokens(1, 30, words)));
    std::vector<SegmentList> refs;
    for (const auto& s : segs) refs.push_back({s});
    const std::string tag = " (" + std::to_string(size) + " segments)";

    for (auto level : {Level::corpus, Level::sentence}) {
      for (const auto& b : bleu_score(segs, refs, {}, level)) check(b.value == 1.0, "BLEU " + std::to_string(b.value) + tag);
      MeteorConfig mc;
      mc.mode = MeteorMode::simple;
      for (const auto& m : meteor_score(segs, refs, mc, SynonymLexicon(), level)) {
        check(m.value == 1.0, "METEOR " + std::to_string(m.value) + tag);
      }
      for (const auto& g : gtm_score(segs, refs, {}, level)) check(g.f_measure == 1.0, "GTM F " + std::to_string(g.f_measure) + tag);
      for (const auto& t : ter_corpus(segs, refs, {}, level)) check(t.value == 0.0, "TER " + std::to_string(t.value) + tag);
      const auto info = build_info_weights(std::span<const SegmentList>(refs), 5);
      for (const auto& n : nist_score(segs, refs, info, {}, level)) {
        check(n.brevity_factor == 1.0, "NIST brevity factor " + std::to_string(n.brevity_factor) + tag);
      }
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check(seconds < kIdentitySeconds, "took " + std::to_string(seconds) + " s");
}

void bleu_clipping_oracle() {
  testing::Rng rng(11);
  const auto words = vocab(kClipVocab);
  for (std::size_t k = 0; k < kClipPairs; ++k) {
    const Tokens cand = rng.tokens(1, kClipMaxLength, words);
    std::vector<Tokens> refs;
    const std::size_t ref_count = rng.uniform(1, 3);
    for (std::size_t r = 0; r < ref_count; ++r) refs.push_back(rng.tokens(1, kClipMaxLength, words));
    const Tokens extra = rng.tokens(1, kClipMaxLength, words);

    const Segment c = make_segment("c", cand);
    SegmentList ref_segs;
    for (const auto& r : refs) ref_segs.push_back(make_segment("r", r));
    SegmentList more = ref_segs;
    more.push_back(make_segment("r", extra));
    std::vector<Tokens> more_tokens = refs;
    more_tokens.push_back(extra);

    for (std::size_t n = 1; n <= 4; ++n) {
      const auto got = modified_precision(c, ref_segs, n);
      const auto want = oracle::clipped_count(cand, refs, n);
      check(got.matches == want.first && got.total == want.second,
            "n=" + std::to_string(n) + " cand=" + show(cand) + ": got " + std::to_string(got.matches) + "/" +
                std::to_string(got.total) + ", oracle " + std::to_string(want.first) + "/" + std::to_string(want.second));
      const auto grown = modified_precision(c, more, n);
      check(grown.matches >= got.matches, "adding a reference lowered clipped count for " + show(cand));
      const auto grown_oracle = oracle::clipped_count(cand, more_tokens, n);
      check(grown.matches == grown_oracle.first, "oracle mismatch after adding a reference for " + show(cand));
    }
  }
}

void nist_info_oracle() {
  testing::Rng rng(13);
  const auto words = vocab(6);
  std::vector<Tokens> corpus;
  SegmentList segs;
  for (std::size_t i = 0; i < kNistSegments; ++i) {
    corpus.push_back(rng.tokens(3, 10, words));
    segs.push_back(make_segment("r" + std::to_string(i), corpus.back()));
  }
  constexpr std::size_t order = 5;
  const auto table = build_info_weights(std::span<const Segment>(segs), order);
  const auto tally = oracle::tally(corpus, order);
  check(table.total_tokens() == tally.total_tokens, "total token count differs");
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= order; ++n) {
    const auto& weights = table.weights(n);
    check(weights.size() == tally.by_order[n - 1].size(),
          "order " + std::to_string(n) + " has " + std::to_string(weights.size()) + " entries, oracle " +
              std::to_string(tally.by_order[n - 1].size()));
    for (const auto& [gram, w] : weights) {
      check(tally.by_order[n - 1].count(oracle::join(gram)) == 1, "unexpected n-gram " + show(gram));
      const double want = oracle::info(tally, gram);
      check(std::fabs(w - want) <= kNistTolerance && std::fabs(table.info(gram) - want) <= kNistTolerance,
            "Info" + show(gram) + " = " + std::to_string(w) + ", oracle " + std::to_string(want));
      ++checked;
    }
  }
  check(checked > 0, "empty table");
}

void gtm_oracle() {
  const auto words = vocab(3);
  std::vector<Tokens> all;
  std::vector<Tokens> frontier{Tokens{}};
  all.push_back({});
  for (std::size_t len = 1; len <= kGtmMaxLength; ++len) {
    std::vector<Tokens> next;
    for (const auto& t : frontier) {
      for (const auto& w : words) {
        Tokens u = t;
        u.push_back(w);
        next.push_back(u);
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  check(all.size() == 1093, "enumerated " + std::to_string(all.size()) + " sequences");
  std::vector<Segment> segs;
  for (const auto& t : all) segs.push_back(make_segment("s", t));
  // Exhaustive matching depends only on the two multisets; memoize by them.
  std::map<std::pair<Tokens, Tokens>, std::size_t> memo;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      Tokens a = all[i], b = all[j];
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      auto key = std::make_pair(a, b);
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, oracle::exhaustive_matching(a, b)).first;
      const std::size_t got = maximum_match_size(segs[i], segs[j]);
      check(got == it->second, show(all[i]) + " vs " + show(all[j]) + ": got " + std::to_string(got) + ", oracle " +
                                   std::to_string(it->second));
      check(match_size(segs[i], segs[j], 1.0) == static_cast<double>(got), "match_size(e=1) differs for " + show(all[i]));
    }
  }
}

void meteor_oracle() {
  // Vocabulary with known stems and one synonym group.
  const std::vector<std::string> words = {"run", "running", "runs", "cat", "cats", "feline", "jump", "jumped", "the"};
  const std::map<std::string, std::string> stems = {{"run", "run"},     {"running", "run"}, {"runs", "run"},
                                                    {"cat", "cat"},     {"cats", "cat"},    {"feline", "felin"},
                                                    {"jump", "jump"},   {"jumped", "jump"}, {"the", "the"}};
  for (const auto& [w, s] : stems) check(stem(w) == s, "stemmer maps " + w + " to " + stem(w));
  const std::set<std::pair<std::string, std::string>> synonym_pairs = {{"cat", "feline"}, {"feline", "cat"}};
  const SynonymLexicon lexicon(std::vector<std::vector<std::string>>{{"cat", "feline"}});
  MeteorConfig config;

  testing::Rng rng(17);
  std::size_t nonempty = 0;
  for (std::size_t k = 0; k < kMeteorPairs; ++k) {
    const Tokens c = rng.tokens(0, kMeteorMaxLength, words);
    const Tokens r = rng.tokens(0, kMeteorMaxLength, words);
    if (c.empty() && r.empty()) continue;
    const auto alignment = align(make_segment("c", c), make_segment("r", r), config, lexicon);
    const std::string where = show(c) + " vs " + show(r);
    check(!alignment.heuristic, "heuristic search used for " + where);

    std::set<std::size_t> cand_seen, ref_seen;
    for (const auto& p : alignment.pairs) {
      check(cand_seen.insert(p.candidate).second && ref_seen.insert(p.reference).second, "not injective: " + where);
    }

    std::vector<oracle::Pair> fixed;
    for (auto stage : config.stages) {
      auto eligible = [&](std::size_t i, std::size_t j) {
        switch (stage) {
          case MatchStage::exact: return c[i] == r[j];
          case MatchStage::stem: return stems.at(c[i]) == stems.at(r[j]);
          case MatchStage::synonym: return synonym_pairs.count({c[i], r[j]}) > 0;
        }
        return false;
      };
      std::vector<oracle::Pair> got;
      for (const auto& p : alignment.pairs) {
        if (p.stage == stage) got.push_back({p.candidate, p.reference});
      }
      for (const auto& p : got) check(eligible(p.first, p.second), "ineligible pair in " + std::string(to_string(stage)) + ": " + where);
      const auto want = oracle::stage_alignment(c.size(), r.size(), fixed, eligible);
      auto with = [&](const std::vector<oracle::Pair>& added) {
        auto all = fixed;
        all.insert(all.end(), added.begin(), added.end());
        return oracle::crossings(all);
      };
      check(got.size() == want.size(), std::string(to_string(stage)) + " stage size " + std::to_string(got.size()) +
                                           ", oracle " + std::to_string(want.size()) + ": " + where);
      check(with(got) == with(want), std::string(to_string(stage)) + " stage crossings " + std::to_string(with(got)) +
                                         ", oracle " + std::to_string(with(want)) + ": " + where);
      fixed.insert(fixed.end(), got.begin(), got.end());
    }
    check(oracle::crossings(fixed) == alignment.crossings, "reported crossings differ: " + where);
    nonempty += alignment.pairs.empty() ? 0 : 1;
  }
  check(nonempty > kMeteorPairs / 2, "too few non-trivial alignments");
}

void ter_checks() {
  testing::Rng rng(19);
  const auto words = vocab(5);
  for (std::size_t k = 0; k < kTerPairs; ++k) {
    const Tokens a = rng.tokens(0, 12, words);
    const Tokens b = rng.tokens(0, 12, words);
    const std::size_t got = word_edit_distance(a, b);
    check(got == oracle::levenshtein(a, b), "edit distance " + show(a) + " vs " + show(b));
  }

  std::size_t accepted = 0;
  for (std::size_t k = 0; k < kTerPairs; ++k) {
    const Tokens ref = rng.tokens(2, 12, vocab(4));
    Tokens cand = ref;
    std::shuffle(cand.begin(), cand.end(), rng.engine());
    if (rng.uniform(0, 1)) cand.push_back("z");
    const auto trace = ter_edits(cand, ref);
    Tokens current = cand;
    std::size_t shifts = 0;
    for (const auto& s : trace.shifted_blocks) {
      check(s.edits_after < s.edits_before, "shift did not reduce edits for " + show(cand));
      check(s.edits_before == shifts + oracle::levenshtein(current, ref), "edits before shift disagree on replay");
      current = oracle::apply_shift(current, s.source_start, s.length, s.destination);
      ++shifts;
      check(s.edits_after == shifts + oracle::levenshtein(current, ref), "edits after shift disagree on replay");
      ++accepted;
    }
    check(trace.shifts == shifts, "shift count differs from blocks");
    check(trace.total_edits == shifts + oracle::levenshtein(current, ref), "total edits differ on replay");
  }
  check(accepted > 0, "no shift was ever accepted");

  const auto ba = ter_score(make_segment("c", {"b", "a"}), SegmentList{make_segment("r", {"a", "b"})});
  check(ba.value == 0.5, "TER([b,a],[a,b]) = " + std::to_string(ba.value));
}

void correlation_suite() {
  auto near = [](double got, double want, const std::string& what) {
    check(std::fabs(got - want) <= kCorrelationTolerance, what + " = " + std::to_string(got));
  };
  near(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}), 0.5, "pearson([1,2,3],[1,3,2])");
  near(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 4, 3}), 0.8, "spearman([1,2,3,4],[1,2,4,3])");
  near(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{3, 5, 7, 9}), 1.0, "pearson(x, 2x+1)");
  near(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{-1, -2, -3, -4}), -1.0, "pearson(x, -x)");
  near(spearman(std::vector<double>{0.5, 1, 2, 3}, std::vector<double>{std::exp(0.5), std::exp(1.0), std::exp(2.0),
                                                                       std::exp(3.0)}),
       1.0, "spearman(x, exp x)");
  near(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{4, 3, 2, 1}), -1.0, "spearman reversed");

  const auto report = build_correlation_report({{"bleu", {{"E1", 0.5}, {"E2", 0.6}, {"E3", 0.1}}}},
                                               {{"E1", 4.0}, {"E2", 3.0}, {"E3", 2.0}}, "system");
  check(report.metrics.size() == 1 && report.metrics[0].spearman, "no spearman in report");
  near(*report.metrics[0].spearman, 0.5, "report spearman for E2>E1>E3 vs E1>E2>E3");
  check(report.metrics[0].n == 3, "report n");

  testing::Rng rng(23);
  for (std::size_t k = 0; k < kMonotoneVectors; ++k) {
    const std::size_t n = rng.uniform(3, 30);
    std::vector<double> x(n), y(n), fx(n), gy(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Integer-valued draws so ties occur.
      x[i] = static_cast<double>(rng.uniform(0, 10));
      y[i] = x[i] + static_cast<double>(rng.uniform(0, 6));
      fx[i] = std::exp(x[i] / 3.0) + 7.0;
      gy[i] = y[i] * y[i] * y[i] - 2.0;
    }
    try {
      const double base = spearman(x, y);
      near(spearman(fx, gy), base, "spearman after monotone transform");
      near(spearman(gy, fx), base, "spearman after monotone transform, swapped");
    } catch (const Error& e) {
      check(e.kind() == ErrorKind::undefined_correlation, e.what());
      bool threw = false;
      try {
        spearman(fx, gy);
      } catch (const Error&) {
        threw = true;
      }
      check(threw, "transform changed definedness");
    }
  }
}

void matrix_shape() {
  testing::TempDir dir;
  const auto set = load_evaluation_set(fixtures::write_matrix_fixture(dir.path()));
  MatrixOptions options;
  options.metrics = all_metrics();
  const auto matrix = run_matrix(set, options);
  check(matrix.cells.size() == 90, std::to_string(matrix.cells.size()) + " cells");
  for (const auto& c : matrix.cells) check(c.score.has_value(), "cell failed: " + c.error);
  const auto md = render_report(matrix, ReportFormat::markdown);
  std::vector<std::string> lines;
  for (std::size_t pos = 0, next; pos < md.size(); pos = next + 1) {
    next = md.find('\n', pos);
    if (next == std::string::npos) next = md.size();
    lines.push_back(md.substr(pos, next - pos));
  }
  check(lines.size() == 2 + 15, std::to_string(lines.size()) + " markdown lines");
  check(lines[0] ==
            "| Metric | Doc No. | E1 Ref 1 | E1 Ref 2 | E2 Ref 1 | E2 Ref 2 | E3 Ref 1 | E3 Ref 2 |",
        "header " + lines[0]);
  const std::vector<std::string> names = {"BLEU", "NIST", "GTM", "METEOR", "TER"};
  for (std::size_t m = 0; m < names.size(); ++m) {
    for (std::size_t d = 0; d < 3; ++d) {
      const std::string prefix = "| " + (d == 0 ? names[m] : std::string()) + " | doc" + std::to_string(d + 1) + " |";
      const auto& line = lines[2 + m * 3 + d];
      check(line.rfind(prefix, 0) == 0, "row " + line);
      check(std::count(line.begin(), line.end(), '|') == 9, "columns in " + line);
    }
  }
  const auto again = run_matrix(set, options);
  for (auto format : {ReportFormat::markdown, ReportFormat::csv, ReportFormat::json}) {
    check(render_report(again, format) == render_report(matrix, format), "rerun differs");
  }
}

void ranking_agreement() {
  testing::TempDir dir;
  const auto f = fixtures::write_ranking_fixture(dir.path());
  const auto set = load_evaluation_set(f.manifest);
  const auto ratings = read_ratings_csv_file(f.ratings.string());
  CorrelationOptions options;
  options.metrics = all_metrics();
  const auto report = correlate_with_human(set, ratings, options);
  check(report.human_ranking == std::vector<std::string>{"A", "B", "C"},
        "human ranking " + oracle::join(report.human_ranking));
  std::map<std::string, const MetricCorrelation*> by_name;
  for (const auto& m : report.metrics) {
    by_name[m.metric] = &m;
    const bool top = !m.ranking.empty() && m.ranking.front() == report.human_ranking.front();
    check(m.top_agrees_with_human == top, m.metric + " top flag");
    check(m.ranking_agrees_with_human == (m.ranking == report.human_ranking), m.metric + " ranking flag");
  }
  for (const char* name : {"meteor", "gtm"}) {
    check(by_name.count(name) == 1, std::string("missing ") + name);
    const auto& m = *by_name[name];
    check(m.ranking.front() == "A", std::string(name) + " ranks " + oracle::join(m.ranking));
    check(m.top_agrees_with_human && m.ranking_agrees_with_human, std::string(name) + " not marked as agreeing");
  }
  for (const char* name : {"bleu", "nist"}) {
    check(by_name.count(name) == 1, std::string("missing ") + name);
    const auto& m = *by_name[name];
    check(m.ranking.front() == "B", std::string(name) + " ranks " + oracle::join(m.ranking));
    check(!m.top_agrees_with_human, std::string(name) + " marked as agreeing at the top");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> criteria = {
      {"identity suite", identity_suite},
      {"BLEU clipping oracle", bleu_clipping_oracle},
      {"NIST info-weight oracle", nist_info_oracle},
      {"GTM maximum matching oracle", gtm_oracle},
      {"METEOR alignment oracle", meteor_oracle},
      {"TER edit distance and shift checks", ter_checks},
      {"correlation suite", correlation_suite},
      {"score matrix shape", matrix_shape},
      {"metric ranking agreement fixture", ranking_agreement},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    std::string reason;
    try {
      run();
    } catch (const Failure& f) {
      reason = f.reason;
    } catch (const std::exception& e) {
      reason = std::string("exception: ") + e.what();
    }
    if (reason.empty()) {
      std::printf("PASS %s\n", name);
    } else {
      std::printf("FAIL %s: %s\n", name, reason.c_str());
      ++failed;
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
