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

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "corpus.hpp"
#include "human.hpp"
#include "json.hpp"

namespace mtqual {

/// Append-only newline-delimited JSON log of ratings. The latest line for a
/// (judge, system, document, segment, parameter) key wins. Lines that do
/// not parse (a write torn by a crash) are skipped on replay.
class RatingStore {
 public:
  explicit RatingStore(std::filesystem::path log_path);

  const std::filesystem::path& path() const { return path_; }
  std::size_t skipped_lines() const { return skipped_; }

  /// Durable once this returns: the line is flushed and fsync'ed.
  void append(const HumanRating& rating);
  std::vector<HumanRating> ratings() const;
  std::optional<int> rating_of(const std::string& judge, const std::string& system, const SegmentRef& segment,
                               int parameter) const;
  /// Rewrites the log with one line per key (write to temp, then rename).
  void compact();
  std::string export_csv() const;

  /// Reads a log without taking ownership of it.
  static std::vector<HumanRating> replay(const std::filesystem::path& log_path, std::size_t* skipped = nullptr);

 private:
  using Key = std::tuple<std::string, std::string, std::string, std::size_t, int>;
  static Key key_of(const HumanRating& r);

  std::filesystem::path path_;
  std::map<Key, HumanRating> latest_;
  std::size_t skipped_ = 0;
};

std::string rating_to_log_line(const HumanRating& r);

struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

/// Blind round-robin annotation over an evaluation set. One task per
/// (document, segment) showing every system's output under a per-task
/// random label permutation. Thread safe; all writes go through one lock.
class AnnotationService {
 public:
  /// The data directory holds ratings.ndjson, service.json (label seed) and
  /// blind_labels.json (label -> system for every task).
  AnnotationService(const EvaluationSet& set, std::filesystem::path data_dir);

  /// 200 with the next incomplete task for the judge, 204 when none is
  /// left, 400 without a judge id.
  HttpResult next_task(const std::string& judge_id);
  HttpResult task(const std::string& task_id, const std::string& judge_id = {});
  /// 201 on success, 400 with per-field messages, 404 for an unknown task.
  HttpResult submit(const std::string& body);
  HttpResult progress();
  /// Compacts the log, then returns the ratings CSV.
  std::string export_csv();
  nlohmann::json labels() const;

  /// system id behind a blind label, for unblinding.
  std::optional<std::string> unblind(const std::string& task_id, const std::string& label) const;
  const std::vector<std::string>& task_ids() const { return task_ids_; }
  std::uint64_t seed() const { return seed_; }

 private:
  struct Task {
    std::string id;
    std::string document;
    std::size_t index = 0;
    std::vector<std::pair<std::string, std::string>> labels;  // (label, system) in label order
  };

  nlohmann::json render(const Task& task, const std::string& judge_id) const;
  bool complete(const Task& task, const std::string& judge_id) const;
  const Task* find(const std::string& task_id) const;

  const EvaluationSet& set_;
  std::filesystem::path data_dir_;
  std::uint64_t seed_ = 0;
  std::vector<Task> tasks_;
  std::vector<std::string> task_ids_;
  std::map<std::string, std::size_t> task_index_;
  mutable std::mutex mutex_;
  RatingStore store_;
};

/// Directory used when none is given: $MTQUAL_DATA_DIR, else ./mtqual-data.
std::filesystem::path default_data_dir();

/// Stable 64-bit FNV-1a hash.
std::uint64_t fnv1a(std::string_view s);

}  // namespace mtqual
