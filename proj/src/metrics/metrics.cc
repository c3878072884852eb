// Copyright 2026 The Lexseq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexseq/metrics/metrics.h"

#include <numeric>

#include "json.hpp"
#include "lexseq/common/error.h"

namespace lexseq {
namespace {

double Ratio(uint64_t numerator, uint64_t denominator) {
  return denominator == 0 ? 0.0
                          : static_cast<double>(numerator) /
                                static_cast<double>(denominator);
}

nlohmann::json ToJson(const ClassMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

std::string CsvField(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(size_t classes)
    : classes_(classes), counts_(classes * classes, 0) {
  if (classes == 0) throw Error("confusion matrix needs at least one class");
}

void ConfusionMatrix::Add(size_t truth, size_t predicted) {
  if (truth >= classes_ || predicted >= classes_) {
    throw Error("class index out of range: (" + std::to_string(truth) + ", " +
                std::to_string(predicted) + ") with " +
                std::to_string(classes_) + " classes");
  }
  counts_[truth * classes_ + predicted] += 1;
}

uint64_t ConfusionMatrix::RowSum(size_t truth) const {
  uint64_t total = 0;
  for (size_t p = 0; p < classes_; ++p) total += (*this)(truth, p);
  return total;
}

uint64_t ConfusionMatrix::ColumnSum(size_t predicted) const {
  uint64_t total = 0;
  for (size_t t = 0; t < classes_; ++t) total += (*this)(t, predicted);
  return total;
}

uint64_t ConfusionMatrix::Total() const {
  return std::accumulate(counts_.begin(), counts_.end(), uint64_t{0});
}

uint64_t ConfusionMatrix::Trace() const {
  uint64_t total = 0;
  for (size_t c = 0; c < classes_; ++c) total += (*this)(c, c);
  return total;
}

ConfusionMatrix Confusion(const std::vector<std::pair<size_t, size_t>>& pairs,
                          size_t classes) {
  ConfusionMatrix matrix(classes);
  for (const auto& [truth, predicted] : pairs) matrix.Add(truth, predicted);
  return matrix;
}

double F1Score(double precision, double recall) {
  double denominator = precision + recall;
  return denominator == 0 ? 0.0 : 2 * precision * recall / denominator;
}

std::vector<ClassMetrics> PerClassMetrics(const ConfusionMatrix& matrix) {
  std::vector<ClassMetrics> out(matrix.classes());
  for (size_t c = 0; c < matrix.classes(); ++c) {
    out[c].precision = Ratio(matrix(c, c), matrix.ColumnSum(c));
    out[c].recall = Ratio(matrix(c, c), matrix.RowSum(c));
    out[c].f1 = F1Score(out[c].precision, out[c].recall);
  }
  return out;
}

std::vector<uint64_t> Supports(const ConfusionMatrix& matrix) {
  std::vector<uint64_t> out(matrix.classes());
  for (size_t c = 0; c < matrix.classes(); ++c) out[c] = matrix.RowSum(c);
  return out;
}

ClassMetrics Aggregate(const std::vector<ClassMetrics>& per_class,
                       const std::vector<uint64_t>& supports,
                       AverageMode mode) {
  if (supports.size() != per_class.size()) {
    throw Error("aggregate: " + std::to_string(supports.size()) +
                " supports for " + std::to_string(per_class.size()) +
                " classes");
  }
  ClassMetrics out;
  if (per_class.empty()) return out;
  double total_weight = 0;
  for (size_t c = 0; c < per_class.size(); ++c) {
    double w = mode == AverageMode::kMacro ? 1.0
                                           : static_cast<double>(supports[c]);
    out.precision += w * per_class[c].precision;
    out.recall += w * per_class[c].recall;
    out.f1 += w * per_class[c].f1;
    total_weight += w;
  }
  if (total_weight == 0) {
    throw Error("weighted average requires positive total support");
  }
  out.precision /= total_weight;
  out.recall /= total_weight;
  out.f1 /= total_weight;
  return out;
}

double Accuracy(const ConfusionMatrix& matrix) {
  return Ratio(matrix.Trace(), matrix.Total());
}

EvaluationReport BuildReport(const ConfusionMatrix& matrix,
                             std::vector<std::string> labels) {
  if (labels.size() != matrix.classes()) {
    throw Error("report: label count does not match the matrix");
  }
  EvaluationReport report;
  report.labels = std::move(labels);
  report.matrix = matrix;
  report.per_class = PerClassMetrics(matrix);
  report.supports = Supports(matrix);
  report.macro = Aggregate(report.per_class, report.supports, AverageMode::kMacro);
  report.weighted =
      Aggregate(report.per_class, report.supports, AverageMode::kWeighted);
  report.accuracy = Accuracy(matrix);
  return report;
}

std::string ReportToJson(const EvaluationReport& report) {
  const size_t C = report.matrix.classes();
  nlohmann::json matrix = nlohmann::json::array();
  nlohmann::json per_class = nlohmann::json::array();
  for (size_t t = 0; t < C; ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t p = 0; p < C; ++p) row.push_back(report.matrix(t, p));
    matrix.push_back(std::move(row));
    auto entry = ToJson(report.per_class[t]);
    entry["label"] = report.labels[t];
    entry["support"] = report.supports[t];
    per_class.push_back(std::move(entry));
  }
  nlohmann::json out = {
      {"labels", report.labels},
      {"matrix", std::move(matrix)},
      {"per_class", std::move(per_class)},
      {"macro", ToJson(report.macro)},
      {"weighted", ToJson(report.weighted)},
      {"supports", report.supports},
      {"total", report.matrix.Total()},
      {"accuracy", report.accuracy},
  };
  return out.dump(2) + "\n";
}

std::string ConfusionToCsv(const ConfusionMatrix& matrix,
                           const std::vector<std::string>& labels) {
  if (labels.size() != matrix.classes()) {
    throw Error("csv: label count does not match the matrix");
  }
  std::string out = "true\\predicted";
  for (const auto& label : labels) out += "," + CsvField(label);
  out += "\n";
  for (size_t t = 0; t < matrix.classes(); ++t) {
    out += CsvField(labels[t]);
    for (size_t p = 0; p < matrix.classes(); ++p) {
      out += "," + std::to_string(matrix(t, p));
    }
    out += "\n";
  }
  return out;
}

}  // namespace lexseq
