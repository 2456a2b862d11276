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

// On-disk evaluation sets shared by the pipeline tests and the acceptance
// suite.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "support.hpp"

namespace fixtures {

inline const std::vector<std::string>& base_sentences() {
  static const std::vector<std::string> s = {
      "the committee approved the new budget after a long debate",
      "farmers in the northern district expect a good harvest this year",
      "the train to the capital leaves every morning at six",
      "children must wear helmets while riding bicycles on the road",
      "the museum will open a new gallery for modern art",
      "heavy rain caused flooding in several low lying villages",
      "the doctor advised him to rest for at least two weeks",
      "our team won the final match by a narrow margin",
      "the government announced free vaccines for all citizens",
      "prices of vegetables rose sharply during the festival season",
      "the library extended its opening hours for students",
      "a new bridge will connect the two sides of the river",
  };
  return s;
}

// Deterministic noisy variant: substitutions, drops and adjacent swaps.
inline std::string perturb(const std::string& sentence, testing::Rng& rng, double rate) {
  static const std::vector<std::string> noise = {"a", "the", "of", "new", "big", "city", "people", "said", "very"};
  auto t = testing::words(sentence);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double roll = rng.real(0, 1);
    if (roll < rate / 3) continue;
    if (roll < 2 * rate / 3) {
      out.push_back(noise[rng.uniform(0, noise.size() - 1)]);
      continue;
    }
    out.push_back(t[i]);
  }
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    if (rng.real(0, 1) < rate / 3) std::swap(out[i], out[i + 1]);
  }
  if (out.empty()) out.push_back(t.front());
  std::string s;
  for (const auto& w : out) s += (s.empty() ? "" : " ") + w;
  return s;
}

// 3 systems x 3 documents x 2 reference versions, 4 segments per document.
inline std::filesystem::path write_matrix_fixture(const std::filesystem::path& dir) {
  testing::Rng rng(2024);
  const std::vector<std::pair<std::string, double>> systems = {{"E1", 0.15}, {"E2", 0.3}, {"E3", 0.45}};
  nlohmann::json docs = nlohmann::json::array();
  const auto& base = base_sentences();
  for (int d = 0; d < 3; ++d) {
    const std::string id = "doc" + std::to_string(d + 1);
    std::string ref1, ref2;
    std::vector<std::string> lines;
    for (int k = 0; k < 4; ++k) lines.push_back(base[static_cast<std::size_t>(d * 4 + k)]);
    for (const auto& l : lines) {
      ref1 += l + "\n";
      ref2 += perturb(l, rng, 0.2) + "\n";
    }
    testing::write_file(dir / id / "ref1.txt", ref1);
    testing::write_file(dir / id / "ref2.txt", ref2);
    nlohmann::json sys = nlohmann::json::object();
    for (const auto& [name, rate] : systems) {
      std::string body;
      for (const auto& l : lines) body += perturb(l, rng, rate) + "\n";
      testing::write_file(dir / id / (name + ".txt"), body);
      sys[name] = id + "/" + name + ".txt";
    }
    docs.push_back({{"id", id}, {"systems", sys}, {"references", {id + "/ref1.txt", id + "/ref2.txt"}}});
  }
  const auto manifest = dir / "manifest.json";
  testing::write_file(manifest, nlohmann::json{{"documents", docs}}.dump(2));
  return manifest;
}

// System A keeps every reference word but scrambles the order; system B
// keeps the word order but replaces one frequent word per sentence; system C
// is poor throughout. Judges prefer A, then B, then C.
struct RankingFixture {
  std::filesystem::path manifest;
  std::filesystem::path ratings;
};

inline RankingFixture write_ranking_fixture(const std::filesystem::path& dir) {
  const std::vector<std::string> ref = {
      "the farmer sold the cow to the man from the village",
      "the river near the town floods the fields in the monsoon",
      "the teacher gave the students the results of the test",
      "the doctor told the patient to take the medicine at night",
  };
  const std::vector<std::string> a = {
      "village man the from farmer the cow sold the to the",
      "monsoon the in fields river town the near floods the the",
      "test the of results students the teacher the gave the",
      "night at the medicine take to patient the told doctor the",
  };
  const std::vector<std::string> b = {
      "the farmer sold a cow to the man from the village",
      "the river near a town floods the fields in the monsoon",
      "the teacher gave a students the results of the test",
      "the doctor told a patient to take the medicine at night",
  };
  const std::vector<std::string> c = {
      "a farmer is here",
      "water comes",
      "teacher and test",
      "take medicine",
  };
  auto write = [&](const std::string& name, const std::vector<std::string>& lines) {
    std::string body;
    for (const auto& l : lines) body += l + "\n";
    testing::write_file(dir / name, body);
  };
  write("ref.txt", ref);
  write("A.txt", a);
  write("B.txt", b);
  write("C.txt", c);
  const nlohmann::json manifest = {
      {"documents",
       {{{"id", "doc1"}, {"systems", {{"A", "A.txt"}, {"B", "B.txt"}, {"C", "C.txt"}}}, {"references", {"ref.txt"}}}}}};
  RankingFixture f{dir / "manifest.json", dir / "ratings.csv"};
  testing::write_file(f.manifest, manifest.dump(2));

  std::string csv = "judge_id,system_id,document,segment_index,parameter,rating\n";
  const std::vector<std::pair<std::string, int>> quality = {{"A", 5}, {"B", 3}, {"C", 1}};
  for (const std::string judge : {"j1", "j2"}) {
    for (const auto& [system, base] : quality) {
      for (int seg = 0; seg < 4; ++seg) {
        for (int p = 1; p <= 10; ++p) {
          const int r = std::max(1, base - ((p + seg + (judge == "j2" ? 1 : 0)) % 2));
          csv += judge + "," + system + ",doc1," + std::to_string(seg) + "," + std::to_string(p) + "," +
                 std::to_string(r) + "\n";
        }
      }
    }
  }
  testing::write_file(f.ratings, csv);
  return f;
}

}  // namespace fixtures
