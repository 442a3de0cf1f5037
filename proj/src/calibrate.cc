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
#include "scg/calibrate.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "scg/bounds.h"
#include "scg/errors.h"

namespace scg {

namespace {

void CheckProbability(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InputError(std::string(name) + " must lie in (0, 1)");
  }
}

void CheckRecords(std::span<const CalibrationRecord> records) {
  for (const CalibrationRecord& r : records) {
    if (!std::isfinite(r.score)) {
      throw CalibrationError("non-finite score for " + r.problem_id + "/" +
                             r.candidate_id);
    }
  }
}

}  // namespace

FdrBound FdrBoundAt(std::span<const CalibrationRecord> records, double tau,
                    double delta_per_step, double epsilon_e) {
  if (records.empty()) throw InputError("fdr bound needs at least one record");
  if (!(epsilon_e >= 0.0 && epsilon_e < 1.0)) {
    throw InputError("epsilon_e must lie in [0, 1)");
  }
  const ConfidenceBudget budget(delta_per_step);
  FdrBound bound;
  for (const CalibrationRecord& r : records) {
    if (r.score >= tau) {
      ++bound.selected;
      if (!r.label.entailed) ++bound.false_discoveries;
    }
  }
  bound.u_binom =
      bound.selected == 0
          ? 1.0
          : ClopperPearsonUpper(
                BinomialObservation(bound.false_discoveries, bound.selected),
                budget);
  bound.u_hat = epsilon_e + bound.u_binom;
  return bound;
}

std::size_t BisectionSteps(std::size_t n) {
  if (n < 2) throw CalibrationError("calibration needs at least 2 records");
  std::size_t steps = 0;
  std::size_t reach = 1;
  while (reach < n) {
    reach <<= 1;
    ++steps;
  }
  return steps;
}

std::vector<CalibrationRecord> SortForCalibration(
    std::span<const CalibrationRecord> records) {
  std::vector<CalibrationRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const CalibrationRecord& a, const CalibrationRecord& b) {
              return std::tie(a.score, a.problem_id, a.candidate_id) <
                     std::tie(b.score, b.problem_id, b.candidate_id);
            });
  return sorted;
}

LearnResult LearnScgWithTrace(std::span<const CalibrationRecord> records,
                              double eps_s, double delta_s, double epsilon_e) {
  CheckProbability(eps_s, "eps_s");
  CheckProbability(delta_s, "delta_s");
  if (records.size() < 2) {
    throw CalibrationError("calibration needs at least 2 records, got " +
                           std::to_string(records.size()));
  }
  CheckRecords(records);
  const std::vector<CalibrationRecord> sorted = SortForCalibration(records);
  const std::size_t n = sorted.size();
  const std::size_t steps = BisectionSteps(n);
  const double delta_per_step = delta_s / static_cast<double>(steps);

  LearnResult result;
  std::size_t lo = 1;
  std::size_t hi = n;
  std::optional<std::size_t> kept;
  for (std::size_t i = 0; i < steps; ++i) {
    const std::size_t mid = (lo + hi + 1) / 2;
    BisectionStep step;
    step.index = mid;
    step.tau = sorted[mid - 1].score;
    step.bound = FdrBoundAt(sorted, step.tau, delta_per_step, epsilon_e);
    step.kept = step.bound.u_hat <= eps_s;
    if (step.kept) {
      hi = mid;
      kept = result.steps.size();
    } else {
      lo = mid;
    }
    result.steps.push_back(step);
  }

  std::size_t chosen = 0;
  if (kept) {
    chosen = *kept;
  } else {
    for (std::size_t i = 1; i < result.steps.size(); ++i) {
      if (result.steps[i].bound.u_hat < result.steps[chosen].bound.u_hat) chosen = i;
    }
  }
  SelectiveGeneratorModel& model = result.model;
  model.tau = result.steps[chosen].tau;
  model.u_hat = result.steps[chosen].bound.u_hat;
  model.feasible = kept.has_value();
  model.eps_s = eps_s;
  model.delta_s = delta_s;
  model.epsilon_e = epsilon_e;
  model.n = n;
  return result;
}

SelectiveGeneratorModel LearnScg(std::span<const CalibrationRecord> records,
                                 double eps_s, double delta_s, double epsilon_e) {
  CheckProbability(epsilon_e, "epsilon_e");
  return LearnScgWithTrace(records, eps_s, delta_s, epsilon_e).model;
}

Decision Select(const SelectiveGeneratorModel& model, double score) {
  return score >= model.tau ? Decision::kAccept : Decision::kAbstain;
}

}  // namespace scg
