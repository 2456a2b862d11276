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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bleu.hpp"
#include "corpus.hpp"
#include "gtm.hpp"
#include "json.hpp"
#include "meteor.hpp"
#include "nist.hpp"
#include "ter.hpp"

namespace mtqual {

enum class MetricKind { bleu, nist, gtm, meteor, ter };

const char* to_string(MetricKind kind);
/// Throws Error(invalid_argument) listing the five metric names.
MetricKind metric_from_string(const std::string& name);
const std::vector<std::string>& metric_names();

/// A metric plus its configuration, as recorded in every report.
struct MetricSpec {
  MetricKind kind = MetricKind::bleu;
  BleuConfig bleu;
  NistConfig nist;
  GtmConfig gtm;
  MeteorConfig meteor;
  std::string synonyms_path;
  std::shared_ptr<const SynonymLexicon> lexicon;
  TerConfig ter;
  bool clamp_ter = false;

  std::string name() const { return to_string(kind); }
};

/// Keys: "metric" plus the metric's own knobs (max_order, smoothing,
/// normalize, exponent, stages, mode, synonyms, max_shift_block, clamp,
/// ...). Unknown keys are rejected.
MetricSpec metric_spec_from_json(const nlohmann::json& j, const TokenizationPolicy& policy = {});
nlohmann::json to_json(const MetricSpec& spec);

/// Uniform view of any metric's result.
struct MetricScore {
  std::string metric;
  double value = 0.0;
  nlohmann::json components = nlohmann::json::object();
  std::vector<std::string> flags;
};

nlohmann::json to_json(const MetricScore& score);

nlohmann::json to_json(const BleuScore& s);
nlohmann::json to_json(const NistScore& s);
nlohmann::json to_json(const GtmScore& s);
nlohmann::json to_json(const MeteorScore& s);
nlohmann::json to_json(const TerScore& s);

struct MetricResult {
  MetricScore aggregate;
  std::vector<MetricScore> sentences;  // filled when requested
};

/// Scores one aligned block of segments. `info` supplies NIST weights; when
/// null they are built from `references`.
MetricResult run_metric(const MetricSpec& spec, std::span<const Segment> candidates,
                        std::span<const SegmentList> references, bool with_sentences,
                        const InfoWeightTable* info = nullptr);

}  // namespace mtqual
