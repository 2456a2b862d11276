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

#include <cstdio>
#include <sstream>

#include "errors.hpp"
#include "pipeline.hpp"

namespace mtqual {

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string display_reference(const std::string& selector) {
  if (selector == "All") return "All refs";
  return "Ref " + selector.substr(3);
}

std::string display_metric(const std::string& metric) {
  std::string out = metric;
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::string render_csv(const ScoreMatrix& m) {
  std::string out = "metric,document,system,ref,value\n";
  for (const auto& c : m.cells) {
    out += csv_cell(c.key.metric) + ',' + csv_cell(c.key.document) + ',' + csv_cell(c.key.system) + ',' +
           c.key.reference + ',' + (c.score ? fixed2(c.score->value) : "NA") + '\n';
  }
  return out;
}

std::string render_sentences(const ScoreMatrix& m) {
  std::string out = "metric,document,system,ref,segment,value\n";
  for (const auto& c : m.cells) {
    for (std::size_t i = 0; i < c.sentences.size(); ++i) {
      out += csv_cell(c.key.metric) + ',' + csv_cell(c.key.document) + ',' + csv_cell(c.key.system) + ',' +
             c.key.reference + ',' + std::to_string(i + 1) + ',' + fixed2(c.sentences[i].value) + '\n';
    }
  }
  return out;
}

std::string render_json(const ScoreMatrix& m) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : m.cells) {
    nlohmann::json j = {{"metric", c.key.metric}, {"document", c.key.document}, {"system", c.key.system},
                        {"ref", c.key.reference}};
    if (c.score) {
      j["value"] = c.score->value;
      j["components"] = c.score->components;
      j["flags"] = c.score->flags;
    } else {
      j["value"] = nullptr;
      j["error"] = c.error;
    }
    if (!c.sentences.empty()) {
      nlohmann::json values = nlohmann::json::array();
      for (const auto& s : c.sentences) values.push_back(s.value);
      j["sentences"] = values;
    }
    cells.push_back(std::move(j));
  }
  nlohmann::json doc = {{"provenance", m.provenance}, {"cells", cells}};
  return doc.dump(2) + "\n";
}

// Metric blocks as rows, one column per (system, reference) pair.
std::string render_markdown(const ScoreMatrix& m) {
  std::ostringstream out;
  out << "| Metric | Doc No. |";
  for (const auto& sys : m.systems) {
    for (const auto& ref : m.references) out << ' ' << sys << ' ' << display_reference(ref) << " |";
  }
  out << "\n|---|---|";
  for (std::size_t i = 0; i < m.systems.size() * m.references.size(); ++i) out << "---:|";
  out << '\n';
  for (const auto& metric : m.metrics) {
    bool first = true;
    for (const auto& doc : m.documents) {
      out << "| " << (first ? display_metric(metric) : std::string()) << " | " << doc << " |";
      first = false;
      for (const auto& sys : m.systems) {
        for (const auto& ref : m.references) {
          const Cell* c = m.find({metric, doc, sys, ref});
          out << ' ' << (c && c->score ? fixed2(c->score->value) : std::string("NA")) << " |";
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  if (s == "md" || s == "markdown") return ReportFormat::markdown;
  if (s == "sentences" || s == "sentences-csv") return ReportFormat::sentences_csv;
  fail(ErrorKind::invalid_argument, "unknown report format '" + s + "' (expected csv, json, md, sentences)");
}

ReportFormat report_format_for_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) fail(ErrorKind::invalid_argument, "cannot infer report format from '" + path + "'");
  return report_format_from_string(path.substr(dot + 1));
}

std::string render_report(const ScoreMatrix& matrix, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: return render_csv(matrix);
    case ReportFormat::json: return render_json(matrix);
    case ReportFormat::markdown: return render_markdown(matrix);
    case ReportFormat::sentences_csv: return render_sentences(matrix);
  }
  return {};
}

}  // namespace mtqual
