//
// Copyright 2026 The SCG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#ifndef SCG_CALIBRATE_H_
#define SCG_CALIBRATE_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scg/entailment.h"

namespace scg {

struct CalibrationRecord {
  std::string problem_id;
  std::string candidate_id;
  double score = 0.0;
  EntailmentLabel label;
};

// Threshold meaning "never answer".
inline constexpr double kAbstainAll = std::numeric_limits<double>::infinity();

struct SelectiveGeneratorModel {
  double tau = kAbstainAll;
  std::optional<double> u_hat;    // empty for methods without a bound
  std::optional<bool> feasible;   // empty when not applicable
  double eps_s = 0.0;
  double delta_s = 0.0;
  double alpha = 0.0;
  double epsilon_e = 0.0;
  std::string scoring_fn = "norm";
  std::string method = "scg";
  std::size_t n = 0;
};

struct FdrBound {
  double u_hat = 0.0;    // epsilon_e + u_binom
  double u_binom = 1.0;  // Clopper-Pearson upper bound on the false rate
  std::size_t selected = 0;
  std::size_t false_discoveries = 0;
};

// Bound on the FDR at threshold tau: records with score >= tau are selected,
// non-entailed ones among them are false discoveries. With nothing selected
// the binomial part is 1.
FdrBound FdrBoundAt(std::span<const CalibrationRecord> records, double tau,
                    double delta_per_step, double epsilon_e);

// ceil(log2 n) for n >= 2.
std::size_t BisectionSteps(std::size_t n);

struct BisectionStep {
  std::size_t index = 0;  // 1-based position in the sorted records
  double tau = 0.0;
  FdrBound bound;
  bool kept = false;
};

struct LearnResult {
  SelectiveGeneratorModel model;
  std::vector<BisectionStep> steps;
};

// Sorted ascending by score, ties by (problem_id, candidate_id).
std::vector<CalibrationRecord> SortForCalibration(
    std::span<const CalibrationRecord> records);

// Bisection over the sorted scores with ceil(log2 n) steps at per-step
// budget delta_s / ceil(log2 n). Returns the last threshold whose bound met
// eps_s, or the minimum-bound threshold with feasible = false when none did.
LearnResult LearnScgWithTrace(std::span<const CalibrationRecord> records,
                              double eps_s, double delta_s, double epsilon_e);

SelectiveGeneratorModel LearnScg(std::span<const CalibrationRecord> records,
                                 double eps_s, double delta_s, double epsilon_e);

enum class Decision { kAccept, kAbstain };

// Accept iff score >= tau.
Decision Select(const SelectiveGeneratorModel& model, double score);

}  // namespace scg

#endif  // SCG_CALIBRATE_H_
