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
#ifndef SCG_EVALUATE_H_
#define SCG_EVALUATE_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scg/calibrate.h"
#include "scg/entailment.h"
#include "scg/fuzzgen.h"
#include "scg/parallel.h"

namespace scg {

// Fraction of selected items that are not entailed; nullopt when nothing is
// selected. Throws InputError when the lists are misaligned.
std::optional<double> EmpiricalFdrCe(std::span<const EntailmentLabel> labels,
                                     const std::vector<bool>& selections);

// Selected over total; throws InputError on an empty list.
double EmpiricalEfficiency(const std::vector<bool>& selections);

// Fraction of problems that passed all their executed tests, optionally
// restricted to the selected ones (nullopt when none is selected).
std::optional<double> PassAt1(const std::vector<bool>& passed,
                              const std::vector<bool>* selections = nullptr);

// A candidate "passed all executed tests" under its evaluation label.
inline bool PassedAll(const EntailmentLabel& label) {
  return label.n_y > 0 && label.k_hat == label.n_y;
}

// One calibrated-and-evaluated item: its score, the label it is calibrated
// with, and the stricter label it is evaluated against.
struct BundleEntry {
  std::string problem_id;
  std::string candidate_id;
  double score = 0.0;
  EntailmentLabel calibration_label;
  EntailmentLabel evaluation_label;
};

struct EvalCounts {
  std::size_t selected = 0;
  std::size_t selected_false = 0;
  std::size_t total = 0;
};

struct EvalReport {
  std::size_t trial = 0;
  std::optional<double> fdr_ce;
  double efficiency = 0.0;
  std::optional<double> one_minus_pass1;  // among selected
  EvalCounts counts;
  SelectiveGeneratorModel model;
  // fdr_ce > u_hat; empty when either side is undefined.
  std::optional<bool> violation;
};

EvalReport EvaluateModel(const SelectiveGeneratorModel& model,
                         std::span<const BundleEntry> test);

std::vector<CalibrationRecord> CalibrationRecords(std::span<const BundleEntry> entries);

using Learner =
    std::function<SelectiveGeneratorModel(std::span<const CalibrationRecord>)>;

struct SplitConfig {
  std::size_t trials = 50;
  double ratio = 0.8;  // calibration share of problems
  Seed split_seed{0};
  double delta_s = 0.1;  // whisker quantiles at delta_s and 1 - delta_s
  ExecutionPolicy policy = ExecutionPolicy::kSerial;
};

struct Whiskers {
  double low = 0.0;
  double median = 0.0;
  double high = 0.0;
  std::size_t count = 0;
};

// Linear-interpolated quantiles at q, 0.5 and 1 - q; nullopt when empty.
std::optional<Whiskers> QuantileWhiskers(std::vector<double> values, double q);

struct SplitSummary {
  std::optional<Whiskers> fdr_ce;
  std::optional<Whiskers> efficiency;
  std::optional<double> mean_fdr_ce;
  double mean_efficiency = 0.0;
  double violation_rate = 0.0;  // over all trials
  std::size_t undefined_fdr_trials = 0;
  std::size_t infeasible_trials = 0;
};

struct SplitRun {
  std::vector<EvalReport> trials;
  SplitSummary summary;
};

// Per trial: shuffle the distinct problem ids with seed
// MutateSeed(split_seed, trial), calibrate on the first round(ratio * P)
// problems and evaluate on the rest.
SplitRun RunRandomSplits(std::span<const BundleEntry> bundle, const Learner& learner,
                         const SplitConfig& config);

SplitSummary Summarize(std::span<const EvalReport> trials, double delta_s);

// Baselines.

// Top-fraction threshold; tau is the lower-closest (1 - top_fraction) order
// statistic of the scores. Carries no bound.
SelectiveGeneratorModel BaselineScgManual(std::span<const CalibrationRecord> records,
                                          double top_fraction);

// The calibration search with the false-entailment term dropped.
SelectiveGeneratorModel BaselineScgH(std::span<const CalibrationRecord> records,
                                     double eps_s, double delta_s);

// Exact-match labels in place of entailment labels.
EntailmentLabel ExactMatchAsLabel(bool matched);

inline constexpr std::size_t kSmallBankCap = 21;

struct SmallBaselineResult {
  std::vector<LabeledPair> labels;
  SelectiveGeneratorModel model;
};

// Labels with each bank truncated to bank_cap tests (exhaustion is an
// exhausted label), then calibrates as usual. scores align with jobs.
SmallBaselineResult BaselineScgSmall(std::span<const LabelJob> jobs,
                                     std::span<const double> scores,
                                     Executor& executor,
                                     const EntailmentConfig& config,
                                     LabelingOptions options, double eps_s,
                                     double delta_s,
                                     std::size_t bank_cap = kSmallBankCap);

}  // namespace scg

#endif  // SCG_EVALUATE_H_
