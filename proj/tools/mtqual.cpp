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

// mtqual command-line front end. Talks to the library only through the C API.

#include <mtqual/mtqual.h>
#include <pthread.h>

#include <CLI11.hpp>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

const std::vector<std::string> kMetrics = {"bleu", "nist", "gtm", "meteor", "ter"};

std::string metric_list() {
  std::string s;
  for (const auto& m : kMetrics) s += (s.empty() ? "" : ", ") + m;
  return s;
}

// Thrown to unwind with a given exit code after the message was printed.
struct Exit {
  int code;
};

// Owns a char* returned by the library.
class LibString {
 public:
  LibString() = default;
  ~LibString() { mtqual_string_free(p_); }
  LibString(const LibString&) = delete;
  LibString& operator=(const LibString&) = delete;
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

void check(mtqual_status status) {
  if (status == MTQUAL_OK) return;
  std::cerr << "mtqual: " << mtqual_status_name(status) << ": " << mtqual_last_error() << "\n";
  throw Exit{status == MTQUAL_ERROR_INVALID_ARGUMENT ? kExitUsage : kExitData};
}

void usage_error(const CLI::App& cmd, const std::string& message) {
  std::cerr << "mtqual: " << message << "\n\n" << cmd.help();
  throw Exit{kExitUsage};
}

void require_metric(const CLI::App& cmd, const std::string& name) {
  for (const auto& m : kMetrics) {
    if (m == name) return;
  }
  usage_error(cmd, "unknown metric '" + name + "'; expected one of: " + metric_list());
}

std::vector<std::string> split_metrics(const CLI::App& cmd, const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    require_metric(cmd, part);
    out.push_back(part);
  }
  if (out.empty()) usage_error(cmd, "no metrics given; expected a list drawn from: " + metric_list());
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!text.empty() && text.back() != '\n') out << "\n";
  out.close();
  if (!out) {
    std::cerr << "mtqual: cannot write " << path << "\n";
    throw Exit{kExitData};
  }
}

class EvalSet {
 public:
  ~EvalSet() { mtqual_evalset_free(set_); }
  mtqual_evalset** out() { return &set_; }
  const mtqual_evalset* get() const { return set_; }

 private:
  mtqual_evalset* set_ = nullptr;
};

json policy_json(bool keep_case, bool keep_punct) {
  return {{"case_fold", !keep_case}, {"split_punctuation", !keep_punct}};
}

struct TokenFlags {
  bool keep_case = false;
  bool keep_punctuation = false;

  void add(CLI::App* cmd) {
    cmd->add_flag("--keep-case", keep_case, "Do not case-fold tokens");
    cmd->add_flag("--keep-punctuation", keep_punctuation, "Do not split punctuation into separate tokens");
  }
  std::string dump() const { return policy_json(keep_case, keep_punctuation).dump(); }
};

struct ScoreArgs {
  std::string metric;
  std::string candidate;
  std::vector<std::string> refs;
  std::string level = "corpus";
  std::optional<std::size_t> max_order;
  std::optional<std::string> smoothing;
  std::optional<std::string> normalize;
  std::optional<double> exponent;
  std::optional<std::string> stages;
  std::optional<std::string> mode;
  std::optional<std::string> synonyms;
  std::optional<std::size_t> max_shift_block;
  bool clamp = false;
  std::string out;
  std::string trace;
  std::string export_info;
  TokenFlags tokens;
};

int run_score(const CLI::App& cmd, const ScoreArgs& a) {
  require_metric(cmd, a.metric);
  if (a.refs.empty()) usage_error(cmd, "at least one --ref is required");

  json config = {{"metric", a.metric}, {"level", a.level}};
  auto set_if = [&](const char* flag, const char* key, const auto& value, std::initializer_list<const char*> allowed) {
    if (!value) return;
    bool ok = false;
    for (const char* m : allowed) ok = ok || a.metric == m;
    if (!ok) usage_error(cmd, std::string(flag) + " does not apply to metric " + a.metric);
    config[key] = *value;
  };
  set_if("--max-order", "max_order", a.max_order, {"bleu", "nist"});
  set_if("--smoothing", "smoothing", a.smoothing, {"bleu"});
  set_if("--normalize", "normalize", a.normalize, {"nist"});
  set_if("--exponent", "exponent", a.exponent, {"gtm"});
  set_if("--stages", "stages", a.stages, {"meteor"});
  set_if("--mode", "mode", a.mode, {"meteor"});
  set_if("--synonyms", "synonyms", a.synonyms, {"meteor"});
  set_if("--max-shift-block", "max_shift_block", a.max_shift_block, {"ter"});
  if (a.clamp) {
    if (a.metric != "ter") usage_error(cmd, "--clamp does not apply to metric " + a.metric);
    config["clamp"] = true;
  }
  if (!a.trace.empty() && a.metric != "ter") usage_error(cmd, "--trace applies to metric ter only");
  if (!a.export_info.empty() && a.metric != "nist") usage_error(cmd, "--export-info applies to metric nist only");

  EvalSet set;
  std::vector<const char*> refs;
  for (const auto& r : a.refs) refs.push_back(r.c_str());
  const std::string policy = a.tokens.dump();
  check(mtqual_evalset_load_files(a.candidate.c_str(), refs.data(), refs.size(), policy.c_str(), set.out()));

  LibString result;
  check(mtqual_score(set.get(), config.dump().c_str(), result.out()));
  emit(result.str(), a.out);

  if (!a.trace.empty()) {
    // Per-segment edit traces need the sentence-level run.
    json sentence = config;
    sentence["level"] = "sentence";
    LibString detail;
    check(mtqual_score(set.get(), sentence.dump().c_str(), detail.out()));
    const json j = json::parse(detail.str());
    json traces = json::array();
    for (const auto& r : j["results"]) {
      for (const auto& s : r["sentences"]) {
        traces.push_back({{"document", r["document"]}, {"segment", s["segment"]}, {"ter", s["value"]},
                          {"trace", s["components"]["edits"]}});
      }
    }
    emit(json{{"segments", traces}}.dump(2), a.trace);
  }
  if (!a.export_info.empty()) {
    LibString tsv;
    check(mtqual_nist_info_table(set.get(), a.max_order.value_or(5), tsv.out()));
    emit(tsv.str(), a.export_info);
  }
  return kExitOk;
}

json metric_array(const std::vector<std::string>& names) {
  json out = json::array();
  for (const auto& n : names) out.push_back(n);
  return out;
}

struct MatrixArgs {
  std::string manifest;
  std::string metrics = "bleu,nist,gtm,meteor,ter";
  std::string out;
  std::string format;
  std::string sentences;
  bool with_all = false;
  bool only_all = false;
  std::size_t threads = 0;
  TokenFlags tokens;
};

int run_matrix(const CLI::App& cmd, const MatrixArgs& a) {
  const auto metrics = split_metrics(cmd, a.metrics);
  std::string format = a.format;
  if (format.empty()) {
    const auto dot = a.out.rfind('.');
    format = a.out.empty() || dot == std::string::npos ? "md" : a.out.substr(dot + 1);
  }
  if (format != "csv" && format != "json" && format != "md") {
    usage_error(cmd, "report format must be csv, json or md (got '" + format + "')");
  }

  EvalSet set;
  const std::string policy = a.tokens.dump();
  check(mtqual_evalset_load_manifest(a.manifest.c_str(), policy.c_str(), set.out()));

  const json options = {{"metrics", metric_array(metrics)},
                        {"single_references", !a.only_all},
                        {"all_references", a.with_all || a.only_all},
                        {"sentence_level", !a.sentences.empty()},
                        {"threads", a.threads}};
  mtqual_matrix* matrix = nullptr;
  check(mtqual_matrix_run(set.get(), options.dump().c_str(), &matrix));
  struct Free {
    mtqual_matrix* m;
    ~Free() { mtqual_matrix_free(m); }
  } guard{matrix};

  LibString report;
  check(mtqual_matrix_render(matrix, format.c_str(), report.out()));
  emit(report.str(), a.out);
  if (!a.sentences.empty()) {
    LibString rows;
    check(mtqual_matrix_render(matrix, "sentences", rows.out()));
    emit(rows.str(), a.sentences);
  }
  if (const auto failed = mtqual_matrix_failed_count(matrix); failed > 0) {
    std::cerr << "mtqual: " << failed << " of " << mtqual_matrix_cell_count(matrix)
              << " cells could not be scored (see the report for details)\n";
  }
  return kExitOk;
}

struct CorrelateArgs {
  std::string manifest;
  std::string human;
  std::string metrics = "bleu,nist,gtm,meteor,ter";
  std::string granularity = "system";
  std::string ref = "All";
  std::optional<int> parameter;
  std::string out;
  TokenFlags tokens;
};

int run_correlate(const CLI::App& cmd, const CorrelateArgs& a) {
  const auto metrics = split_metrics(cmd, a.metrics);
  EvalSet set;
  const std::string policy = a.tokens.dump();
  check(mtqual_evalset_load_manifest(a.manifest.c_str(), policy.c_str(), set.out()));
  json options = {{"metrics", metric_array(metrics)}, {"granularity", a.granularity}, {"reference", a.ref}};
  if (a.parameter) options["human_parameter"] = *a.parameter;
  LibString report;
  check(mtqual_correlate(set.get(), a.human.c_str(), options.dump().c_str(), report.out()));
  emit(report.str(), a.out);
  return kExitOk;
}

struct ServeArgs {
  std::string manifest;
  std::string bind = "127.0.0.1:8080";
  std::string data_dir;
  std::string static_dir;
  TokenFlags tokens;
};

int run_serve(const CLI::App& cmd, const ServeArgs& a) {
  const auto colon = a.bind.rfind(':');
  if (colon == std::string::npos) usage_error(cmd, "--bind expects host:port");
  const std::string host = a.bind.substr(0, colon);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(a.bind.substr(colon + 1), &used);
    if (used != a.bind.size() - colon - 1 || port < 0 || port > 65535) throw std::out_of_range("port");
  } catch (const std::exception&) {
    usage_error(cmd, "--bind port must be an integer in 0..65535");
  }

  EvalSet set;
  const std::string policy = a.tokens.dump();
  check(mtqual_evalset_load_manifest(a.manifest.c_str(), policy.c_str(), set.out()));

  mtqual_service* service = nullptr;
  check(mtqual_service_create(set.get(), a.data_dir.c_str(), a.static_dir.c_str(), &service));
  struct Free {
    mtqual_service* s;
    ~Free() { mtqual_service_free(s); }
  } guard{service};

  int bound = 0;
  check(mtqual_service_bind(service, host.c_str(), port, &bound));
  std::cerr << "mtqual: serving on " << host << ":" << bound << "\n";

  // SIGINT/SIGTERM are blocked here and consumed by a watcher thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    mtqual_service_stop(service);
  });
  const mtqual_status status = mtqual_service_run(service);
  // Unblock the watcher if the server ended on its own.
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  check(status);
  return kExitOk;
}

struct ExportArgs {
  std::string data_dir;
  std::string out;
};

int run_export(const ExportArgs& a) {
  LibString csv;
  check(mtqual_export_ratings(a.data_dir.c_str(), csv.out()));
  emit(csv.str(), a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mtqual: machine translation evaluation (BLEU, NIST, GTM, METEOR, TER) and human ratings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mtqual_version()));

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score one candidate file against reference files");
  score_cmd->add_option("--metric", score.metric, "Metric: " + metric_list())->required();
  score_cmd->add_option("--candidate", score.candidate, "Candidate file, one segment per line")->required();
  score_cmd->add_option("--ref", score.refs, "Reference file (repeat for more versions)")->required();
  score_cmd->add_option("--level", score.level, "corpus or sentence")->check(CLI::IsMember({"corpus", "sentence"}));
  score_cmd->add_option("--max-order", score.max_order, "Highest n-gram order (bleu, nist)");
  score_cmd->add_option("--smoothing", score.smoothing, "none, add-one or exp-decay (bleu)");
  score_cmd->add_option("--normalize", score.normalize, "none or self (nist)");
  score_cmd->add_option("--exponent", score.exponent, "Run-length exponent, at least 1 (gtm)");
  score_cmd->add_option("--stages", score.stages, "Comma-separated exact,stem,synonym (meteor)");
  score_cmd->add_option("--mode", score.mode, "simple or weighted (meteor)");
  score_cmd->add_option("--synonyms", score.synonyms, "Synonym lexicon file, one group per line (meteor)");
  score_cmd->add_option("--max-shift-block", score.max_shift_block, "Longest shifted block (ter)");
  score_cmd->add_flag("--clamp", score.clamp, "Report min(TER, 1) (ter)");
  score_cmd->add_option("--out", score.out, "Write the JSON result here instead of stdout");
  score_cmd->add_option("--trace", score.trace, "Write per-segment edit traces as JSON (ter)");
  score_cmd->add_option("--export-info", score.export_info, "Write the information-weight table as TSV (nist)");
  score.tokens.add(score_cmd);

  MatrixArgs matrix;
  auto* matrix_cmd = app.add_subcommand("matrix", "Score every metric, document, system and reference selector");
  matrix_cmd->add_option("--manifest", matrix.manifest, "Evaluation-set manifest (JSON)")->required();
  matrix_cmd->add_option("--metrics", matrix.metrics, "Comma-separated subset of: " + metric_list());
  matrix_cmd->add_option("--out", matrix.out, "Report file; format follows the extension (.csv, .json, .md)");
  matrix_cmd->add_option("--format", matrix.format, "Override the report format: csv, json or md");
  matrix_cmd->add_flag("--with-all", matrix.with_all, "Add the all-references selector");
  matrix_cmd->add_flag("--only-all", matrix.only_all, "Use only the all-references selector");
  matrix_cmd->add_option("--sentences", matrix.sentences, "Also write per-segment scores as CSV");
  matrix_cmd->add_option("--threads", matrix.threads, "Worker threads (0: hardware concurrency)");
  matrix.tokens.add(matrix_cmd);

  CorrelateArgs correlate;
  auto* correlate_cmd = app.add_subcommand("correlate", "Correlate metric scores with human ratings");
  correlate_cmd->add_option("--manifest", correlate.manifest, "Evaluation-set manifest (JSON)")->required();
  correlate_cmd->add_option("--human", correlate.human, "Human ratings CSV")->required();
  correlate_cmd->add_option("--metrics", correlate.metrics, "Comma-separated subset of: " + metric_list());
  correlate_cmd->add_option("--granularity", correlate.granularity, "system or segment")
      ->check(CLI::IsMember({"system", "segment"}));
  correlate_cmd->add_option("--ref", correlate.ref, "Reference selector: All or RefK");
  correlate_cmd->add_option("--parameter", correlate.parameter, "Use only this rating parameter (1..10)");
  correlate_cmd->add_option("--out", correlate.out, "Write the JSON report here instead of stdout");
  correlate.tokens.add(correlate_cmd);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP annotation service");
  serve_cmd->add_option("--manifest", serve.manifest, "Evaluation-set manifest (JSON)")->required();
  serve_cmd->add_option("--bind", serve.bind, "host:port to listen on (port 0 picks a free port)");
  serve_cmd->add_option("--data-dir", serve.data_dir, "Ratings storage directory (default: $MTQUAL_DATA_DIR or ./mtqual-data)");
  serve_cmd->add_option("--static", serve.static_dir, "Directory of annotation UI assets served at /");
  serve.tokens.add(serve_cmd);

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export", "Write collected ratings as the human-ratings CSV");
  export_cmd->add_option("--data-dir", export_args.data_dir, "Ratings storage directory (default: $MTQUAL_DATA_DIR or ./mtqual-data)");
  export_cmd->add_option("--out", export_args.out, "Write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score_cmd) return run_score(*score_cmd, score);
    if (*matrix_cmd) return run_matrix(*matrix_cmd, matrix);
    if (*correlate_cmd) return run_correlate(*correlate_cmd, correlate);
    if (*serve_cmd) return run_serve(*serve_cmd, serve);
    if (*export_cmd) return run_export(export_args);
  } catch (const Exit& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "mtqual: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
