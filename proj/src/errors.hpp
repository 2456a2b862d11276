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

#include <stdexcept>
#include <string>

namespace mtqual {

/// Broad failure classes. The C API maps these onto status codes and the CLI
/// onto exit codes, so every thrown error must carry one.
enum class ErrorKind {
  invalid_argument,
  io,
  ingestion,
  alignment,
  scoring,
  undefined_precision,
  undefined_correlation,
  not_found,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::io: return "io";
    case ErrorKind::ingestion: return "ingestion";
    case ErrorKind::alignment: return "alignment";
    case ErrorKind::scoring: return "scoring";
    case ErrorKind::undefined_precision: return "undefined_precision";
    case ErrorKind::undefined_correlation: return "undefined_correlation";
    case ErrorKind::not_found: return "not_found";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace mtqual
