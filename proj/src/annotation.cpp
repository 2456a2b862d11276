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

#include "annotation.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace mtqual {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("MTQUAL_DATA_DIR"); env && *env) return env;
  return "mtqual-data";
}

namespace {

void write_all(int fd, const std::string& data, const std::filesystem::path& path) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) fail(ErrorKind::io, "write failed: " + path.string());
    off += static_cast<std::size_t>(n);
  }
}

void write_file_atomically(const std::filesystem::path& path, const std::string& data) {
  const auto tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) fail(ErrorKind::io, "cannot write " + tmp);
  write_all(fd, data, tmp);
  ::fsync(fd);
  ::close(fd);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::io, "cannot replace " + path.string() + ": " + ec.message());
}

std::optional<HumanRating> parse_log_line(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    HumanRating r;
    r.judge_id = j.at("judge_id").get<std::string>();
    r.system_id = j.at("system_id").get<std::string>();
    r.segment.document = j.at("document").get<std::string>();
    r.segment.index = j.at("segment_index").get<std::size_t>();
    r.parameter = j.at("parameter").get<int>();
    r.rating = j.at("rating").get<int>();
    r.validate();
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::filesystem::path prepare_log(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create data directory " + dir.string() + ": " + ec.message());
  return dir / "ratings.ndjson";
}

std::string blind_label(std::size_t k) {
  if (k < 26) return std::string(1, static_cast<char>('A' + k));
  return "S" + std::to_string(k + 1);
}

}  // namespace

std::string rating_to_log_line(const HumanRating& r) {
  nlohmann::json j = {{"judge_id", r.judge_id},       {"system_id", r.system_id}, {"document", r.segment.document},
                      {"segment_index", r.segment.index}, {"parameter", r.parameter}, {"rating", r.rating}};
  return j.dump();
}

RatingStore::Key RatingStore::key_of(const HumanRating& r) {
  return {r.judge_id, r.system_id, r.segment.document, r.segment.index, r.parameter};
}

std::vector<HumanRating> RatingStore::replay(const std::filesystem::path& log_path, std::size_t* skipped) {
  std::map<Key, HumanRating> latest;
  std::size_t bad = 0;
  std::ifstream in(log_path, std::ios::binary);
  if (in) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (auto r = parse_log_line(line)) {
        latest[key_of(*r)] = std::move(*r);
      } else {
        ++bad;
      }
    }
  }
  if (skipped) *skipped = bad;
  std::vector<HumanRating> out;
  for (auto& [_, r] : latest) out.push_back(std::move(r));
  return out;
}

RatingStore::RatingStore(std::filesystem::path log_path) : path_(std::move(log_path)) {
  for (auto& r : replay(path_, &skipped_)) latest_[key_of(r)] = std::move(r);
}

void RatingStore::append(const HumanRating& rating) {
  rating.validate();
  const std::string line = rating_to_log_line(rating) + '\n';
  const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) fail(ErrorKind::io, "cannot open ratings log: " + path_.string());
  // A torn previous write leaves a partial line; start on a fresh line.
  if (const off_t size = ::lseek(fd, 0, SEEK_END); size > 0) {
    char last = '\n';
    const int rfd = ::open(path_.c_str(), O_RDONLY);
    if (rfd >= 0) {
      if (::pread(rfd, &last, 1, size - 1) != 1) last = '\n';
      ::close(rfd);
    }
    if (last != '\n') write_all(fd, "\n", path_);
  }
  write_all(fd, line, path_);
  ::fsync(fd);
  ::close(fd);
  latest_[key_of(rating)] = rating;
}

std::vector<HumanRating> RatingStore::ratings() const {
  std::vector<HumanRating> out;
  for (const auto& [_, r] : latest_) out.push_back(r);
  return out;
}

std::optional<int> RatingStore::rating_of(const std::string& judge, const std::string& system,
                                          const SegmentRef& segment, int parameter) const {
  auto it = latest_.find({judge, system, segment.document, segment.index, parameter});
  if (it == latest_.end()) return std::nullopt;
  return it->second.rating;
}

void RatingStore::compact() {
  std::string data;
  for (const auto& [_, r] : latest_) data += rating_to_log_line(r) + '\n';
  write_file_atomically(path_, data);
  skipped_ = 0;
}

std::string RatingStore::export_csv() const {
  const auto all = ratings();
  return write_ratings_csv(all);
}

AnnotationService::AnnotationService(const EvaluationSet& set, std::filesystem::path data_dir)
    : set_(set), data_dir_(std::move(data_dir)), store_(prepare_log(data_dir_)) {
  const auto service_file = data_dir_ / "service.json";
  bool have_seed = false;
  if (std::ifstream in(service_file); in) {
    try {
      nlohmann::json j;
      in >> j;
      seed_ = j.at("seed").get<std::uint64_t>();
      have_seed = true;
    } catch (const std::exception&) {
      fail(ErrorKind::io, "corrupt service file: " + service_file.string());
    }
  }
  if (!have_seed) {
    std::random_device rd;
    seed_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    write_file_atomically(service_file, nlohmann::json{{"seed", seed_}}.dump() + "\n");
  }

  nlohmann::json unblinding = nlohmann::json::object();
  for (const auto& doc : set_.documents()) {
    for (std::size_t i = 0; i < set_.segment_count(doc); ++i) {
      Task t;
      t.id = doc + ":" + std::to_string(i + 1);
      t.document = doc;
      t.index = i;
      std::vector<std::string> systems = set_.systems();
      std::mt19937_64 rng(seed_ ^ fnv1a(t.id));
      for (std::size_t k = systems.size(); k > 1; --k) std::swap(systems[k - 1], systems[rng() % k]);
      for (std::size_t k = 0; k < systems.size(); ++k) t.labels.emplace_back(blind_label(k), systems[k]);
      nlohmann::json m = nlohmann::json::object();
      for (const auto& [label, sys] : t.labels) m[label] = sys;
      unblinding[t.id] = m;
      task_index_[t.id] = tasks_.size();
      task_ids_.push_back(t.id);
      tasks_.push_back(std::move(t));
    }
  }
  write_file_atomically(data_dir_ / "blind_labels.json", unblinding.dump(2) + "\n");
}

const AnnotationService::Task* AnnotationService::find(const std::string& task_id) const {
  auto it = task_index_.find(task_id);
  return it == task_index_.end() ? nullptr : &tasks_[it->second];
}

bool AnnotationService::complete(const Task& task, const std::string& judge_id) const {
  const SegmentRef ref{task.document, task.index};
  for (const auto& [_, system] : task.labels) {
    for (int p = 1; p <= kParameterCount; ++p) {
      if (!store_.rating_of(judge_id, system, ref, p)) return false;
    }
  }
  return true;
}

nlohmann::json AnnotationService::labels() const {
  nlohmann::json parameters = nlohmann::json::array();
  for (int p = 1; p <= kParameterCount; ++p) parameters.push_back({{"id", p}, {"label", parameter_label(p)}});
  nlohmann::json scale = nlohmann::json::array();
  for (int r = kScaleMin; r <= kScaleMax; ++r) scale.push_back({{"rating", r}, {"label", scale_label(r)}});
  return {{"parameters", parameters}, {"scale", scale}};
}

nlohmann::json AnnotationService::render(const Task& task, const std::string& judge_id) const {
  const auto& source = set_.source(task.document);
  nlohmann::json candidates = nlohmann::json::array();
  nlohmann::json rated = nlohmann::json::array();
  const SegmentRef ref{task.document, task.index};
  for (const auto& [label, system] : task.labels) {
    candidates.push_back({{"label", label}, {"text", set_.candidates(system, task.document)[task.index].text}});
    if (judge_id.empty()) continue;
    for (int p = 1; p <= kParameterCount; ++p) {
      if (auto r = store_.rating_of(judge_id, system, ref, p)) {
        rated.push_back({{"label", label}, {"parameter", p}, {"rating", *r}});
      }
    }
  }
  nlohmann::json j = labels();
  j["task_id"] = task.id;
  j["segment_ref"] = {{"document", task.document}, {"segment_index", task.index}};
  j["source"] = task.index < source.size() ? source[task.index] : std::string();
  j["candidates"] = candidates;
  if (!judge_id.empty()) j["rated"] = rated;
  return j;
}

HttpResult AnnotationService::next_task(const std::string& judge_id) {
  if (judge_id.empty()) return {400, {{"error", "missing judge"}, {"fields", {{"judge", "required"}}}}};
  std::lock_guard lock(mutex_);
  if (tasks_.empty()) return {204, nullptr};
  const std::size_t start = fnv1a(judge_id) % tasks_.size();
  for (std::size_t k = 0; k < tasks_.size(); ++k) {
    const Task& t = tasks_[(start + k) % tasks_.size()];
    if (!complete(t, judge_id)) return {200, render(t, judge_id)};
  }
  return {204, nullptr};
}

HttpResult AnnotationService::task(const std::string& task_id, const std::string& judge_id) {
  std::lock_guard lock(mutex_);
  const Task* t = find(task_id);
  if (!t) return {404, {{"error", "unknown task: " + task_id}}};
  return {200, render(*t, judge_id)};
}

HttpResult AnnotationService::submit(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    return {400, {{"error", "request body is not valid JSON"}}};
  }
  if (!j.is_object()) return {400, {{"error", "request body must be a JSON object"}}};

  nlohmann::json fields = nlohmann::json::object();
  auto string_field = [&](const char* name) -> std::string {
    if (!j.contains(name)) {
      fields[name] = "required";
    } else if (!j[name].is_string() || j[name].get<std::string>().empty()) {
      fields[name] = "must be a non-empty string";
    } else {
      return j[name].get<std::string>();
    }
    return {};
  };
  auto int_field = [&](const char* name, int lo, int hi) -> int {
    if (!j.contains(name)) {
      fields[name] = "required";
    } else if (!j[name].is_number_integer() || j[name].get<long>() < lo || j[name].get<long>() > hi) {
      fields[name] = "must be an integer in " + std::to_string(lo) + ".." + std::to_string(hi);
    } else {
      return j[name].get<int>();
    }
    return 0;
  };
  const std::string task_id = string_field("task_id");
  const std::string judge_id = string_field("judge_id");
  const std::string label = string_field("label");
  const int parameter = int_field("parameter", 1, kParameterCount);
  const int rating = int_field("rating", kScaleMin, kScaleMax);
  if (!fields.empty()) return {400, {{"error", "invalid submission"}, {"fields", fields}}};

  std::lock_guard lock(mutex_);
  const Task* t = find(task_id);
  if (!t) return {404, {{"error", "unknown task: " + task_id}}};
  const auto system = std::find_if(t->labels.begin(), t->labels.end(), [&](const auto& l) { return l.first == label; });
  if (system == t->labels.end()) {
    return {400, {{"error", "invalid submission"}, {"fields", {{"label", "not a label of task " + task_id}}}}};
  }
  HumanRating r;
  r.judge_id = judge_id;
  r.system_id = system->second;
  r.segment = {t->document, t->index};
  r.parameter = parameter;
  r.rating = rating;
  try {
    store_.append(r);
  } catch (const Error& e) {
    return {500, {{"error", e.what()}}};
  }
  return {201, {{"task_id", task_id}, {"judge_id", judge_id}, {"label", label}, {"parameter", parameter}, {"rating", rating}}};
}

HttpResult AnnotationService::progress() {
  std::lock_guard lock(mutex_);
  std::set<std::string> judges;
  const auto all = store_.ratings();
  for (const auto& r : all) judges.insert(r.judge_id);
  nlohmann::json per_judge = nlohmann::json::object();
  std::size_t completed_total = 0;
  for (const auto& judge : judges) {
    std::size_t done = 0;
    for (const auto& t : tasks_) done += complete(t, judge) ? 1 : 0;
    completed_total += done;
    per_judge[judge] = {{"completed_tasks", done},
                        {"fraction", tasks_.empty() ? 1.0 : static_cast<double>(done) / static_cast<double>(tasks_.size())}};
  }
  const double overall = judges.empty() || tasks_.empty()
                             ? 0.0
                             : static_cast<double>(completed_total) / static_cast<double>(judges.size() * tasks_.size());
  return {200, {{"tasks", tasks_.size()}, {"ratings", all.size()}, {"judges", per_judge}, {"overall_fraction", overall}}};
}

std::string AnnotationService::export_csv() {
  std::lock_guard lock(mutex_);
  store_.compact();
  return store_.export_csv();
}

std::optional<std::string> AnnotationService::unblind(const std::string& task_id, const std::string& label) const {
  std::lock_guard lock(mutex_);
  const Task* t = find(task_id);
  if (!t) return std::nullopt;
  for (const auto& [l, system] : t->labels) {
    if (l == label) return system;
  }
  return std::nullopt;
}

}  // namespace mtqual
