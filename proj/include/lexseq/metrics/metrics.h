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

#ifndef LEXSEQ_METRICS_METRICS_H_
#define LEXSEQ_METRICS_METRICS_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lexseq {

// counts(t, p): documents of true class t predicted as class p.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(size_t classes);

  size_t classes() const { return classes_; }
  uint64_t operator()(size_t truth, size_t predicted) const {
    return counts_[truth * classes_ + predicted];
  }
  void Add(size_t truth, size_t predicted);

  uint64_t RowSum(size_t truth) const;
  uint64_t ColumnSum(size_t predicted) const;
  uint64_t Total() const;
  uint64_t Trace() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  size_t classes_;
  std::vector<uint64_t> counts_;
};

ConfusionMatrix Confusion(const std::vector<std::pair<size_t, size_t>>& pairs,
                          size_t classes);

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// 2PR/(P+R), with 0/0 defined as 0.
double F1Score(double precision, double recall);

// Per class: P = m[c][c]/colsum, R = m[c][c]/rowsum, F1 from both; 0/0 = 0.
std::vector<ClassMetrics> PerClassMetrics(const ConfusionMatrix& matrix);

std::vector<uint64_t> Supports(const ConfusionMatrix& matrix);

enum class AverageMode { kMacro, kWeighted };

// Macro: unweighted mean of each column. Weighted: support-weighted mean;
// requires positive total support.
ClassMetrics Aggregate(const std::vector<ClassMetrics>& per_class,
                       const std::vector<uint64_t>& supports, AverageMode mode);

// trace / total; 0 for an empty matrix.
double Accuracy(const ConfusionMatrix& matrix);

struct EvaluationReport {
  std::vector<std::string> labels;
  ConfusionMatrix matrix{2};
  std::vector<ClassMetrics> per_class;
  std::vector<uint64_t> supports;
  ClassMetrics macro;
  ClassMetrics weighted;
  double accuracy = 0;
};

EvaluationReport BuildReport(const ConfusionMatrix& matrix,
                             std::vector<std::string> labels);

// JSON: labels, matrix, per_class, macro, weighted, supports, total, accuracy.
std::string ReportToJson(const EvaluationReport& report);
// Header row of predicted labels, then one row per true label.
std::string ConfusionToCsv(const ConfusionMatrix& matrix,
                           const std::vector<std::string>& labels);

}  // namespace lexseq

#endif  // LEXSEQ_METRICS_METRICS_H_
