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
#include "scg/evaluate.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "scg/errors.h"

namespace scg {

std::optional<double> EmpiricalFdrCe(std::span<const EntailmentLabel> labels,
                                     const std::vector<bool>& selections) {
  if (labels.size() != selections.size()) {
    throw InputError("labels and selections are misaligned");
  }
  std::size_t selected = 0;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!selections[i]) continue;
    ++selected;
    if (!labels[i].entailed) ++bad;
  }
  if (selected == 0) return std::nullopt;
  return static_cast<double>(bad) / static_cast<double>(selected);
}

double EmpiricalEfficiency(const std::vector<bool>& selections) {
  if (selections.empty()) throw InputError("efficiency of an empty selection list");
  const auto selected = std::count(selections.begin(), selections.end(), true);
  return static_cast<double>(selected) / static_cast<double>(selections.size());
}

std::optional<double> PassAt1(const std::vector<bool>& passed,
                              const std::vector<bool>* selections) {
  if (selections != nullptr && selections->size() != passed.size()) {
    throw InputError("pass flags and selections are misaligned");
  }
  std::size_t considered = 0;
  std::size_t passing = 0;
  for (std::size_t i = 0; i < passed.size(); ++i) {
    if (selections != nullptr && !(*selections)[i]) continue;
    ++considered;
    if (passed[i]) ++passing;
  }
  if (considered == 0) return std::nullopt;
  return static_cast<double>(passing) / static_cast<double>(considered);
}

EvalReport EvaluateModel(const SelectiveGeneratorModel& model,
                         std::span<const BundleEntry> test) {
  if (test.empty()) throw InputError("evaluation set is empty");
  std::vector<EntailmentLabel> labels;
  std::vector<bool> selections;
  std::vector<bool> passed;
  labels.reserve(test.size());
  // An infeasible model is not deployed: it abstains on everything.
  const bool abstain_all = model.feasible.has_value() && !*model.feasible;
  for (const BundleEntry& e : test) {
    labels.push_back(e.evaluation_label);
    selections.push_back(!abstain_all && Select(model, e.score) == Decision::kAccept);
    passed.push_back(PassedAll(e.evaluation_label));
  }
  EvalReport report;
  report.model = model;
  report.fdr_ce = EmpiricalFdrCe(labels, selections);
  report.efficiency = EmpiricalEfficiency(selections);
  if (auto pass = PassAt1(passed, &selections)) report.one_minus_pass1 = 1.0 - *pass;
  report.counts.total = test.size();
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (!selections[i]) continue;
    ++report.counts.selected;
    if (!labels[i].entailed) ++report.counts.selected_false;
  }
  if (report.fdr_ce && model.u_hat) report.violation = *report.fdr_ce > *model.u_hat;
  return report;
}

std::vector<CalibrationRecord> CalibrationRecords(std::span<const BundleEntry> entries) {
  std::vector<CalibrationRecord> records;
  records.reserve(entries.size());
  for (const BundleEntry& e : entries) {
    records.push_back({e.problem_id, e.candidate_id, e.score, e.calibration_label});
  }
  return records;
}

std::optional<Whiskers> QuantileWhiskers(std::vector<double> values, double q) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  const double low_q = std::min(q, 1.0 - q);
  return Whiskers{at(low_q), at(0.5), at(1.0 - low_q), values.size()};
}

SplitSummary Summarize(std::span<const EvalReport> trials, double delta_s) {
  SplitSummary summary;
  std::vector<double> fdrs;
  std::vector<double> effs;
  std::size_t violations = 0;
  for (const EvalReport& r : trials) {
    if (r.fdr_ce) {
      fdrs.push_back(*r.fdr_ce);
    } else {
      ++summary.undefined_fdr_trials;
    }
    effs.push_back(r.efficiency);
    if (r.violation.value_or(false)) ++violations;
    if (r.model.feasible.has_value() && !*r.model.feasible) ++summary.infeasible_trials;
  }
  if (!fdrs.empty()) {
    summary.mean_fdr_ce =
        std::accumulate(fdrs.begin(), fdrs.end(), 0.0) / static_cast<double>(fdrs.size());
  }
  if (!effs.empty()) {
    summary.mean_efficiency =
        std::accumulate(effs.begin(), effs.end(), 0.0) / static_cast<double>(effs.size());
  }
  summary.fdr_ce = QuantileWhiskers(std::move(fdrs), delta_s);
  summary.efficiency = QuantileWhiskers(std::move(effs), delta_s);
  summary.violation_rate =
      trials.empty() ? 0.0
                     : static_cast<double>(violations) / static_cast<double>(trials.size());
  return summary;
}

SplitRun RunRandomSplits(std::span<const BundleEntry> bundle, const Learner& learner,
                         const SplitConfig& config) {
  if (config.trials < 1) throw InputError("trials must be >= 1");
  if (!(config.ratio > 0.0 && config.ratio < 1.0)) {
    throw InputError("split ratio must lie in (0, 1)");
  }
  std::set<std::string> id_set;
  for (const BundleEntry& e : bundle) id_set.insert(e.problem_id);
  const std::vector<std::string> ids(id_set.begin(), id_set.end());
  const auto n_cal = static_cast<std::size_t>(
      std::llround(config.ratio * static_cast<double>(ids.size())));
  if (n_cal == 0 || n_cal >= ids.size()) {
    throw InputError("degenerate split: " + std::to_string(n_cal) + " of " +
                     std::to_string(ids.size()) + " problems for calibration");
  }

  std::map<std::string, std::vector<std::size_t>> by_problem;
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    by_problem[bundle[i].problem_id].push_back(i);
  }

  SplitRun run;
  run.trials.resize(config.trials);
  ParallelFor(config.trials, config.policy, [&](std::size_t trial) {
    std::vector<std::string> order = ids;
    RandomStream stream(MutateSeed(config.split_seed, trial));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[stream.Below(i)]);
    }
    std::vector<BundleEntry> cal;
    std::vector<BundleEntry> test;
    for (std::size_t p = 0; p < order.size(); ++p) {
      auto& side = p < n_cal ? cal : test;
      for (std::size_t idx : by_problem.at(order[p])) side.push_back(bundle[idx]);
    }
    const std::vector<CalibrationRecord> records = CalibrationRecords(cal);
    EvalReport report = EvaluateModel(learner(records), test);
    report.trial = trial;
    run.trials[trial] = std::move(report);
  });
  run.summary = Summarize(run.trials, config.delta_s);
  return run;
}

SelectiveGeneratorModel BaselineScgManual(std::span<const CalibrationRecord> records,
                                          double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw InputError("top_fraction must lie in (0, 1]");
  }
  if (records.empty()) throw CalibrationError("manual threshold needs records");
  std::vector<double> scores;
  scores.reserve(records.size());
  for (const CalibrationRecord& r : records) scores.push_back(r.score);
  std::sort(scores.begin(), scores.end());
  const std::size_t n = scores.size();
  auto keep = static_cast<std::size_t>(
      std::ceil(top_fraction * static_cast<double>(n) - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, n);
  SelectiveGeneratorModel model;
  model.tau = scores[n - keep];
  model.method = "scg-manual";
  model.n = n;
  return model;
}

SelectiveGeneratorModel BaselineScgH(std::span<const CalibrationRecord> records,
                                     double eps_s, double delta_s) {
  SelectiveGeneratorModel model =
      LearnScgWithTrace(records, eps_s, delta_s, 0.0).model;
  model.method = "scg-h";
  return model;
}

EntailmentLabel ExactMatchAsLabel(bool matched) {
  EntailmentLabel label;
  label.entailed = matched;
  label.lower_bound = matched ? 1.0 : 0.0;
  return label;
}

SmallBaselineResult BaselineScgSmall(std::span<const LabelJob> jobs,
                                     std::span<const double> scores,
                                     Executor& executor,
                                     const EntailmentConfig& config,
                                     LabelingOptions options, double eps_s,
                                     double delta_s, std::size_t bank_cap) {
  if (scores.size() != jobs.size()) throw InputError("scores and jobs are misaligned");
  if (bank_cap < 1) throw InputError("bank_cap must be >= 1");
  options.bank_cap = bank_cap;
  SmallBaselineResult result;
  result.labels = LabelAll(jobs, executor, config, options);
  std::vector<CalibrationRecord> records;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    records.push_back({result.labels[i].problem_id, result.labels[i].candidate_id,
                       scores[i], result.labels[i].label});
  }
  result.model = LearnScg(records, eps_s, delta_s, config.epsilon_e);
  result.model.method = "scg-small";
  result.model.alpha = config.alpha;
  return result;
}

}  // namespace scg
