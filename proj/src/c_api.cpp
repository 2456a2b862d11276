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

#include "mtqual/mtqual.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "annotation.hpp"
#include "corpus.hpp"
#include "errors.hpp"
#include "http_service.hpp"
#include "human.hpp"
#include "metric.hpp"
#include "pipeline.hpp"

struct mtqual_evalset {
  std::shared_ptr<const mtqual::EvaluationSet> set;
};

struct mtqual_matrix {
  mtqual::ScoreMatrix matrix;
};

struct mtqual_service {
  std::shared_ptr<const mtqual::EvaluationSet> set;
  std::unique_ptr<mtqual::AnnotationService> annotation;
  std::unique_ptr<mtqual::HttpService> http;
};

namespace {

thread_local std::string last_error;

mtqual_status status_of(mtqual::ErrorKind kind) {
  using mtqual::ErrorKind;
  switch (kind) {
    case ErrorKind::invalid_argument: return MTQUAL_ERROR_INVALID_ARGUMENT;
    case ErrorKind::io: return MTQUAL_ERROR_IO;
    case ErrorKind::ingestion: return MTQUAL_ERROR_INGESTION;
    case ErrorKind::alignment: return MTQUAL_ERROR_ALIGNMENT;
    case ErrorKind::scoring: return MTQUAL_ERROR_SCORING;
    case ErrorKind::undefined_precision:
    case ErrorKind::undefined_correlation: return MTQUAL_ERROR_UNDEFINED;
    case ErrorKind::not_found: return MTQUAL_ERROR_NOT_FOUND;
  }
  return MTQUAL_ERROR_INTERNAL;
}

template <typename F>
mtqual_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return MTQUAL_OK;
  } catch (const mtqual::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("invalid JSON: ") + e.what();
    return MTQUAL_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MTQUAL_ERROR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (!p) mtqual::fail(mtqual::ErrorKind::invalid_argument, std::string(name) + " must not be NULL");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_json(const char* text, const char* what) {
  if (!text || !*text) return nlohmann::json();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    mtqual::fail(mtqual::ErrorKind::invalid_argument, std::string(what) + " is not valid JSON: " + e.what());
  }
}

mtqual::TokenizationPolicy parse_policy(const char* policy_json) {
  return mtqual::policy_from_json(parse_json(policy_json, "tokenization policy"));
}

std::vector<mtqual::MetricSpec> parse_metric_list(const nlohmann::json& list, const mtqual::TokenizationPolicy& policy) {
  std::vector<mtqual::MetricSpec> specs;
  if (list.is_null()) {
    for (const auto& name : mtqual::metric_names()) specs.push_back(mtqual::metric_spec_from_json({{"metric", name}}, policy));
    return specs;
  }
  if (!list.is_array()) mtqual::fail(mtqual::ErrorKind::invalid_argument, "\"metrics\" must be an array");
  for (const auto& m : list) {
    if (m.is_string()) {
      specs.push_back(mtqual::metric_spec_from_json({{"metric", m.get<std::string>()}}, policy));
    } else {
      specs.push_back(mtqual::metric_spec_from_json(m, policy));
    }
  }
  return specs;
}

}  // namespace

extern "C" {

const char* mtqual_version(void) { return "0.1.0"; }

const char* mtqual_last_error(void) { return last_error.c_str(); }

const char* mtqual_status_name(mtqual_status status) {
  switch (status) {
    case MTQUAL_OK: return "ok";
    case MTQUAL_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case MTQUAL_ERROR_IO: return "io";
    case MTQUAL_ERROR_INGESTION: return "ingestion";
    case MTQUAL_ERROR_ALIGNMENT: return "alignment";
    case MTQUAL_ERROR_SCORING: return "scoring";
    case MTQUAL_ERROR_UNDEFINED: return "undefined";
    case MTQUAL_ERROR_NOT_FOUND: return "not_found";
    case MTQUAL_ERROR_INTERNAL: return "internal";
  }
  return "unknown";
}

void mtqual_string_free(char* s) { std::free(s); }

mtqual_status mtqual_tokenize(const char* text, const char* policy_json, char** out_json) {
  return guarded([&] {
    require(text, "text");
    require(out_json, "out_json");
    *out_json = duplicate(nlohmann::json(mtqual::tokenize(text, parse_policy(policy_json))).dump());
  });
}

mtqual_status mtqual_evalset_load_manifest(const char* manifest_path, const char* policy_json, mtqual_evalset** out) {
  return guarded([&] {
    require(manifest_path, "manifest_path");
    require(out, "out");
    *out = nullptr;
    auto set = std::make_shared<const mtqual::EvaluationSet>(
        mtqual::load_evaluation_set(std::filesystem::path(manifest_path), parse_policy(policy_json)));
    *out = new mtqual_evalset{std::move(set)};
  });
}

mtqual_status mtqual_evalset_load_files(const char* candidate_path, const char* const* reference_paths,
                                        size_t reference_count, const char* policy_json, mtqual_evalset** out) {
  return guarded([&] {
    require(candidate_path, "candidate_path");
    require(out, "out");
    *out = nullptr;
    if (reference_count == 0) mtqual::fail(mtqual::ErrorKind::invalid_argument, "at least one reference file is required");
    require(reference_paths, "reference_paths");
    std::vector<std::filesystem::path> refs;
    for (size_t i = 0; i < reference_count; ++i) {
      require(reference_paths[i], "reference path");
      refs.emplace_back(reference_paths[i]);
    }
    auto set = std::make_shared<const mtqual::EvaluationSet>(
        mtqual::load_single(candidate_path, refs, parse_policy(policy_json)));
    *out = new mtqual_evalset{std::move(set)};
  });
}

mtqual_status mtqual_evalset_describe(const mtqual_evalset* set, char** out_json) {
  return guarded([&] {
    require(set, "set");
    require(out_json, "out_json");
    const auto& s = *set->set;
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : s.documents()) docs.push_back({{"id", d}, {"segments", s.segment_count(d)}});
    nlohmann::json j = {{"documents", docs},
                        {"systems", s.systems()},
                        {"reference_versions", s.reference_versions()},
                        {"tokenization", mtqual::to_json(s.policy())}};
    *out_json = duplicate(j.dump());
  });
}

void mtqual_evalset_free(mtqual_evalset* set) { delete set; }

mtqual_status mtqual_score(const mtqual_evalset* set, const char* metric_json, char** out_json) {
  return guarded([&] {
    require(set, "set");
    require(out_json, "out_json");
    nlohmann::json config = parse_json(metric_json, "metric configuration");
    if (!config.is_object()) mtqual::fail(mtqual::ErrorKind::invalid_argument, "metric configuration must be an object");
    const std::string level = config.value("level", "corpus");
    if (level != "corpus" && level != "sentence") {
      mtqual::fail(mtqual::ErrorKind::invalid_argument, "level must be 'corpus' or 'sentence'");
    }
    config.erase("level");
    const auto& s = *set->set;
    const mtqual::MetricSpec spec = mtqual::metric_spec_from_json(config, s.policy());

    std::map<std::string, std::vector<mtqual::SegmentList>> refs;
    std::vector<mtqual::SegmentList> pooled;
    for (const auto& doc : s.documents()) {
      auto& r = refs[doc];
      r.resize(s.segment_count(doc));
      for (std::size_t i = 0; i < r.size(); ++i) {
        for (const auto& v : s.references(doc)) r[i].push_back(v[i]);
      }
      pooled.insert(pooled.end(), r.begin(), r.end());
    }
    std::optional<mtqual::InfoWeightTable> info;
    if (spec.kind == mtqual::MetricKind::nist) {
      info = mtqual::build_info_weights(std::span<const mtqual::SegmentList>(pooled), spec.nist.max_order);
    }

    nlohmann::json results = nlohmann::json::array();
    for (const auto& system : s.systems()) {
      for (const auto& doc : s.documents()) {
        const auto r = mtqual::run_metric(spec, s.candidates(system, doc), refs.at(doc), level == "sentence",
                                          info ? &*info : nullptr);
        nlohmann::json j = {{"system", system}, {"document", doc}, {"value", r.aggregate.value},
                            {"components", r.aggregate.components}, {"flags", r.aggregate.flags}};
        if (level == "sentence") {
          nlohmann::json sentences = nlohmann::json::array();
          for (std::size_t i = 0; i < r.sentences.size(); ++i) {
            nlohmann::json sj = mtqual::to_json(r.sentences[i]);
            sj.erase("metric");
            sj["segment"] = i + 1;
            sentences.push_back(std::move(sj));
          }
          j["sentences"] = sentences;
        }
        results.push_back(std::move(j));
      }
    }
    nlohmann::json out = {{"metric", spec.name()},
                          {"level", level},
                          {"config", mtqual::to_json(spec)},
                          {"tokenization", mtqual::to_json(s.policy())},
                          {"reference_versions", s.reference_versions()},
                          {"results", results}};
    *out_json = duplicate(out.dump(2));
  });
}

mtqual_status mtqual_nist_info_table(const mtqual_evalset* set, size_t max_order, char** out_tsv) {
  return guarded([&] {
    require(set, "set");
    require(out_tsv, "out_tsv");
    const auto& s = *set->set;
    mtqual::SegmentList all;
    for (const auto& doc : s.documents()) {
      for (const auto& v : s.references(doc)) all.insert(all.end(), v.begin(), v.end());
    }
    *out_tsv = duplicate(mtqual::build_info_weights(std::span<const mtqual::Segment>(all), max_order).to_tsv());
  });
}

mtqual_status mtqual_matrix_run(const mtqual_evalset* set, const char* options_json, mtqual_matrix** out) {
  return guarded([&] {
    require(set, "set");
    require(out, "out");
    *out = nullptr;
    nlohmann::json j = parse_json(options_json, "matrix options");
    if (j.is_null()) j = nlohmann::json::object();
    mtqual::MatrixOptions options;
    options.metrics = parse_metric_list(j.value("metrics", nlohmann::json()), set->set->policy());
    options.single_references = j.value("single_references", true);
    options.all_references = j.value("all_references", false);
    options.sentence_level = j.value("sentence_level", true);
    options.threads = j.value("threads", std::size_t{0});
    *out = new mtqual_matrix{mtqual::run_matrix(*set->set, options)};
  });
}

size_t mtqual_matrix_cell_count(const mtqual_matrix* matrix) { return matrix ? matrix->matrix.cells.size() : 0; }

size_t mtqual_matrix_failed_count(const mtqual_matrix* matrix) {
  if (!matrix) return 0;
  size_t n = 0;
  for (const auto& c : matrix->matrix.cells) n += c.score ? 0 : 1;
  return n;
}

mtqual_status mtqual_matrix_render(const mtqual_matrix* matrix, const char* format, char** out) {
  return guarded([&] {
    require(matrix, "matrix");
    require(format, "format");
    require(out, "out");
    *out = duplicate(mtqual::render_report(matrix->matrix, mtqual::report_format_from_string(format)));
  });
}

void mtqual_matrix_free(mtqual_matrix* matrix) { delete matrix; }

mtqual_status mtqual_correlate(const mtqual_evalset* set, const char* ratings_csv_path, const char* options_json,
                               char** out_json) {
  return guarded([&] {
    require(set, "set");
    require(ratings_csv_path, "ratings_csv_path");
    require(out_json, "out_json");
    nlohmann::json j = parse_json(options_json, "correlation options");
    if (j.is_null()) j = nlohmann::json::object();
    mtqual::CorrelationOptions options;
    options.metrics = parse_metric_list(j.value("metrics", nlohmann::json()), set->set->policy());
    options.granularity = j.value("granularity", "system");
    options.reference = j.value("reference", "All");
    if (j.contains("human_parameter") && !j["human_parameter"].is_null()) {
      options.aggregation.single_parameter = j["human_parameter"].get<int>();
    }
    const auto ratings = mtqual::read_ratings_csv_file(ratings_csv_path);
    *out_json = duplicate(mtqual::to_json(mtqual::correlate_with_human(*set->set, ratings, options)).dump(2));
  });
}

mtqual_status mtqual_parameter_label(int parameter, const char** out) {
  return guarded([&] {
    require(out, "out");
    *out = mtqual::parameter_label(parameter).c_str();
  });
}

mtqual_status mtqual_scale_label(int rating, const char** out) {
  return guarded([&] {
    require(out, "out");
    *out = mtqual::scale_label(rating).c_str();
  });
}

mtqual_status mtqual_service_create(const mtqual_evalset* set, const char* data_dir, const char* static_dir,
                                    mtqual_service** out) {
  return guarded([&] {
    require(set, "set");
    require(out, "out");
    *out = nullptr;
    auto service = std::make_unique<mtqual_service>();
    service->set = set->set;
    const std::filesystem::path dir = data_dir && *data_dir ? std::filesystem::path(data_dir) : mtqual::default_data_dir();
    service->annotation = std::make_unique<mtqual::AnnotationService>(*service->set, dir);
    service->http = std::make_unique<mtqual::HttpService>(
        *service->annotation, static_dir && *static_dir ? std::filesystem::path(static_dir) : std::filesystem::path());
    *out = service.release();
  });
}

mtqual_status mtqual_service_bind(mtqual_service* service, const char* host, int port, int* bound_port) {
  return guarded([&] {
    require(service, "service");
    require(host, "host");
    const int p = service->http->bind(host, port);
    if (bound_port) *bound_port = p;
  });
}

mtqual_status mtqual_service_run(mtqual_service* service) {
  return guarded([&] {
    require(service, "service");
    service->http->run();
  });
}

void mtqual_service_stop(mtqual_service* service) {
  if (service && service->http) service->http->stop();
}

void mtqual_service_free(mtqual_service* service) { delete service; }

mtqual_status mtqual_export_ratings(const char* data_dir, char** out_csv) {
  return guarded([&] {
    require(out_csv, "out_csv");
    const std::filesystem::path dir = data_dir && *data_dir ? std::filesystem::path(data_dir) : mtqual::default_data_dir();
    const auto log = dir / "ratings.ndjson";
    if (!std::filesystem::exists(log)) mtqual::fail(mtqual::ErrorKind::io, "no ratings log at " + log.string());
    const auto ratings = mtqual::RatingStore::replay(log);
    *out_csv = duplicate(mtqual::write_ratings_csv(ratings));
  });
}

}  // extern "C"
