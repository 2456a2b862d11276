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

#include <filesystem>
#include <memory>
#include <string>

#include "annotation.hpp"

namespace mtqual {

/// HTTP/JSON front end for AnnotationService:
///   GET  /api/tasks/next?judge=J   next incomplete task (204 when done)
///   GET  /api/tasks/<id>[?judge=J] one task
///   POST /api/ratings              {"task_id","judge_id","label","parameter","rating"}
///   GET  /api/progress             completion fractions
///   GET  /api/export               ratings CSV
///   GET  /api/labels               scale and parameter texts
/// Static files (the annotation UI) are served from `static_dir` when set.
class HttpService {
 public:
  HttpService(AnnotationService& service, std::filesystem::path static_dir = {});
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds without serving yet. Port 0 picks a free port; returns the bound
  /// port. Throws Error(io) on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(); requires bind().
  void run();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mtqual
