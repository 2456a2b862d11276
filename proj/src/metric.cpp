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

#include "metric.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace mtqual {

const char* to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::bleu: return "bleu";
    case MetricKind::nist: return "nist";
    case MetricKind::gtm: return "gtm";
    case MetricKind::meteor: return "meteor";
    case MetricKind::ter: return "ter";
  }
  return "bleu";
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"bleu", "nist", "gtm", "meteor", "ter"};
  return names;
}

MetricKind metric_from_string(const std::string& name) {
  if (name == "bleu") return MetricKind::bleu;
  if (name == "nist") return MetricKind::nist;
  if (name == "gtm") return MetricKind::gtm;
  if (name == "meteor") return MetricKind::meteor;
  if (name == "ter") return MetricKind::ter;
  fail(ErrorKind::invalid_argument, "unknown metric '" + name + "' (expected one of: bleu, nist, gtm, meteor, ter)");
}

namespace {

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  std::set<std::string> keys(allowed.begin(), allowed.end());
  keys.insert("metric");
  for (const auto& [key, _] : j.items()) {
    if (!keys.count(key)) fail(ErrorKind::invalid_argument, "unknown option '" + key + "' for metric " + j["metric"].get<std::string>());
  }
}

template <typename T>
T get(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::invalid_argument, std::string("option '") + key + "' has the wrong type");
  }
}

std::vector<MatchStage> parse_stages(const nlohmann::json& v) {
  std::vector<std::string> names;
  if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) names.push_back(part);
    }
  } else if (v.is_array()) {
    for (const auto& s : v) names.push_back(s.get<std::string>());
  } else {
    fail(ErrorKind::invalid_argument, "METEOR stages must be a list or comma-separated string");
  }
  std::vector<MatchStage> stages;
  for (const auto& n : names) {
    const MatchStage s = stage_from_string(n);
    if (std::find(stages.begin(), stages.end(), s) != stages.end()) {
      fail(ErrorKind::invalid_argument, "METEOR stage '" + n + "' listed twice");
    }
    stages.push_back(s);
  }
  return stages;
}

template <typename T>
nlohmann::json vector_json(const std::vector<T>& v) {
  return nlohmann::json(v);
}

}  // namespace

MetricSpec metric_spec_from_json(const nlohmann::json& j, const TokenizationPolicy& policy) {
  if (!j.is_object() || !j.contains("metric") || !j["metric"].is_string()) {
    fail(ErrorKind::invalid_argument, "metric configuration needs a \"metric\" name");
  }
  MetricSpec spec;
  spec.kind = metric_from_string(j["metric"].get<std::string>());
  switch (spec.kind) {
    case MetricKind::bleu:
      reject_unknown(j, {"max_order", "smoothing", "weights"});
      spec.bleu.max_order = get<std::size_t>(j, "max_order", 4);
      spec.bleu.weights = get<std::vector<double>>(j, "weights", {});
      if (j.contains("smoothing") && !j["smoothing"].is_null()) {
        spec.bleu.smoothing = smoothing_from_string(get<std::string>(j, "smoothing", "none"));
      }
      spec.bleu.validate();
      break;
    case MetricKind::nist: {
      reject_unknown(j, {"max_order", "beta", "normalize"});
      spec.nist.max_order = get<std::size_t>(j, "max_order", 5);
      if (j.contains("beta") && !j["beta"].is_null()) spec.nist.beta = get<double>(j, "beta", 0.0);
      const auto normalize = get<std::string>(j, "normalize", "none");
      if (normalize != "none" && normalize != "self") {
        fail(ErrorKind::invalid_argument, "NIST normalize must be 'none' or 'self'");
      }
      spec.nist.normalize_self = normalize == "self";
      spec.nist.validate();
      break;
    }
    case MetricKind::gtm:
      reject_unknown(j, {"exponent"});
      spec.gtm.exponent = get<double>(j, "exponent", 1.0);
      spec.gtm.validate();
      break;
    case MetricKind::meteor: {
      reject_unknown(j, {"stages", "mode", "alpha", "gamma", "penalty_power", "synonyms", "exact_search_limit",
                         "beam_width"});
      if (j.contains("stages")) spec.meteor.stages = parse_stages(j["stages"]);
      const auto mode = get<std::string>(j, "mode", "simple");
      if (mode == "simple") {
        spec.meteor.mode = MeteorMode::simple;
      } else if (mode == "weighted" || mode == "weighted_penalized") {
        spec.meteor.mode = MeteorMode::weighted_penalized;
      } else {
        fail(ErrorKind::invalid_argument, "METEOR mode must be 'simple' or 'weighted'");
      }
      spec.meteor.alpha = get<double>(j, "alpha", spec.meteor.alpha);
      spec.meteor.gamma = get<double>(j, "gamma", spec.meteor.gamma);
      spec.meteor.penalty_power = get<double>(j, "penalty_power", spec.meteor.penalty_power);
      spec.meteor.exact_search_limit = get<std::size_t>(j, "exact_search_limit", spec.meteor.exact_search_limit);
      spec.meteor.beam_width = get<std::size_t>(j, "beam_width", spec.meteor.beam_width);
      spec.meteor.validate();
      spec.synonyms_path = get<std::string>(j, "synonyms", "");
      spec.lexicon = spec.synonyms_path.empty()
                         ? std::make_shared<const SynonymLexicon>()
                         : std::make_shared<const SynonymLexicon>(SynonymLexicon::from_file(spec.synonyms_path, policy));
      break;
    }
    case MetricKind::ter:
      reject_unknown(j, {"max_shift_block", "max_iterations", "clamp"});
      spec.ter.max_shift_block = get<std::size_t>(j, "max_shift_block", 10);
      spec.ter.max_iterations = get<std::size_t>(j, "max_iterations", 50);
      spec.clamp_ter = get<bool>(j, "clamp", false);
      spec.ter.validate();
      break;
  }
  return spec;
}

nlohmann::json to_json(const MetricSpec& spec) {
  nlohmann::json j = {{"metric", spec.name()}};
  switch (spec.kind) {
    case MetricKind::bleu:
      j["max_order"] = spec.bleu.max_order;
      j["weights"] = spec.bleu.effective_weights();
      j["smoothing"] = spec.bleu.smoothing ? nlohmann::json(to_string(*spec.bleu.smoothing)) : nlohmann::json(nullptr);
      break;
    case MetricKind::nist:
      j["max_order"] = spec.nist.max_order;
      j["beta"] = spec.nist.beta_value();
      j["normalize"] = spec.nist.normalize_self ? "self" : "none";
      break;
    case MetricKind::gtm:
      j["exponent"] = spec.gtm.exponent;
      break;
    case MetricKind::meteor: {
      std::vector<std::string> stages;
      for (auto s : spec.meteor.stages) stages.emplace_back(to_string(s));
      j["stages"] = stages;
      j["mode"] = spec.meteor.mode == MeteorMode::simple ? "simple" : "weighted";
      j["alpha"] = spec.meteor.alpha;
      j["gamma"] = spec.meteor.gamma;
      j["penalty_power"] = spec.meteor.penalty_power;
      j["synonyms"] = spec.synonyms_path;
      j["exact_search_limit"] = spec.meteor.exact_search_limit;
      j["beam_width"] = spec.meteor.beam_width;
      break;
    }
    case MetricKind::ter:
      j["max_shift_block"] = spec.ter.max_shift_block;
      j["max_iterations"] = spec.ter.max_iterations;
      j["clamp"] = spec.clamp_ter;
      break;
  }
  return j;
}

nlohmann::json to_json(const MetricScore& score) {
  return {{"metric", score.metric}, {"value", score.value}, {"components", score.components}, {"flags", score.flags}};
}

nlohmann::json to_json(const BleuScore& s) {
  return {{"precisions", s.precisions},
          {"used_precisions", s.used_precisions},
          {"matches", s.matches},
          {"totals", s.totals},
          {"brevity_penalty", s.brevity_penalty},
          {"candidate_length", s.candidate_length},
          {"effective_reference_length", s.reference_length},
          {"reference_length_rule", "closest, ties to shorter"},
          {"smoothing", to_string(s.smoothing)}};
}

nlohmann::json to_json(const NistScore& s) {
  return {{"per_order", s.per_order},       {"info_sums", s.info_sums}, {"totals", s.totals},
          {"length_ratio", s.length_ratio}, {"beta", s.beta},           {"brevity_factor", s.brevity_factor}};
}

nlohmann::json to_json(const GtmScore& s) {
  return {{"precision", s.precision},
          {"recall", s.recall},
          {"f_measure", s.f_measure},
          {"match_size", s.match_size},
          {"candidate_length", s.candidate_length},
          {"reference_length", s.reference_length},
          {"reference_version", s.reference_version + 1}};
}

nlohmann::json to_json(const MeteorScore& s) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : s.alignment.pairs) pairs.push_back({p.candidate, p.reference, to_string(p.stage)});
  return {{"precision", s.precision},
          {"recall", s.recall},
          {"fmean", s.fmean},
          {"penalty", s.penalty},
          {"matches", s.matches},
          {"chunks", s.chunks},
          {"crossings", s.alignment.crossings},
          {"candidate_length", s.candidate_length},
          {"reference_length", s.reference_length},
          {"reference_version", s.reference_version + 1},
          {"alignment", pairs}};
}

nlohmann::json to_json(const TerScore& s) {
  return {{"edits", to_json(s.edits)},
          {"avg_reference_length", s.avg_reference_length},
          {"reference_version", s.reference_version + 1},
          {"raw_value", s.value}};
}

namespace {

template <typename Score>
MetricScore wrap(const MetricSpec& spec, const Score& s, double value) {
  MetricScore out;
  out.metric = spec.name();
  out.value = value;
  out.components = to_json(s);
  out.flags = s.flags;
  return out;
}

// Reference version 1 scored as if it were the system output.
std::vector<NistScore> nist_self(std::span<const SegmentList> references, const InfoWeightTable& info,
                                 const NistConfig& config, Level level) {
  SegmentList self;
  for (const auto& versions : references) self.push_back(versions.front());
  return nist_score(self, references, info, config, level);
}

}  // namespace

MetricResult run_metric(const MetricSpec& spec, std::span<const Segment> candidates,
                        std::span<const SegmentList> references, bool with_sentences, const InfoWeightTable* info) {
  if (candidates.size() != references.size()) fail(ErrorKind::alignment, "candidate and reference counts differ");
  MetricResult result;
  auto levels = [&](auto&& score_at) {
    result.aggregate = score_at(Level::corpus).front();
    if (with_sentences) result.sentences = score_at(Level::sentence);
  };

  switch (spec.kind) {
    case MetricKind::bleu:
      levels([&](Level level) {
        std::vector<MetricScore> out;
        for (const auto& s : bleu_score(candidates, references, spec.bleu, level)) out.push_back(wrap(spec, s, s.value));
        return out;
      });
      break;
    case MetricKind::nist: {
      InfoWeightTable local;
      if (!info) {
        local = build_info_weights(references, spec.nist.max_order);
        info = &local;
      }
      levels([&](Level level) {
        std::vector<MetricScore> out;
        const auto scores = nist_score(candidates, references, *info, spec.nist, level);
        std::vector<NistScore> self;
        if (spec.nist.normalize_self) self = nist_self(references, *info, spec.nist, level);
        for (std::size_t i = 0; i < scores.size(); ++i) {
          MetricScore m = wrap(spec, scores[i], scores[i].value);
          m.components["raw_value"] = scores[i].value;
          if (spec.nist.normalize_self) {
            m.components["self_value"] = self[i].value;
            m.components["normalization"] = "divided by the score of reference 1 against the references";
            if (self[i].value > 0.0) {
              m.value = scores[i].value / self[i].value;
            } else {
              m.value = 0.0;
              m.flags.push_back("self_score_zero");
            }
          }
          out.push_back(std::move(m));
        }
        return out;
      });
      break;
    }
    case MetricKind::gtm:
      levels([&](Level level) {
        std::vector<MetricScore> out;
        for (const auto& s : gtm_score(candidates, references, spec.gtm, level)) {
          MetricScore m = wrap(spec, s, s.f_measure);
          if (level == Level::corpus) m.components.erase("reference_version");
          out.push_back(std::move(m));
        }
        return out;
      });
      break;
    case MetricKind::meteor: {
      static const SynonymLexicon empty;
      const SynonymLexicon& lexicon = spec.lexicon ? *spec.lexicon : empty;
      levels([&](Level level) {
        std::vector<MetricScore> out;
        for (const auto& s : meteor_score(candidates, references, spec.meteor, lexicon, level)) {
          MetricScore m = wrap(spec, s, s.value);
          if (level == Level::corpus) {
            m.components.erase("alignment");
            m.components.erase("reference_version");
            m.components["aggregation"] = "segment scores weighted by candidate + reference length";
          }
          out.push_back(std::move(m));
        }
        return out;
      });
      break;
    }
    case MetricKind::ter:
      levels([&](Level level) {
        std::vector<MetricScore> out;
        for (const auto& s : ter_corpus(candidates, references, spec.ter, level)) {
          const double value = spec.clamp_ter ? std::min(1.0, s.value) : s.value;
          MetricScore m = wrap(spec, s, value);
          if (level == Level::corpus) m.components.erase("reference_version");
          out.push_back(std::move(m));
        }
        return out;
      });
      break;
  }
  return result;
}

}  // namespace mtqual
