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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.h"
#include "scg/errors.h"
#include "test_support.h"

namespace scg {
namespace {

EntailmentLabel L(bool entailed, std::size_t n_y = 10, std::size_t k_hat = 10) {
  EntailmentLabel l;
  l.entailed = entailed;
  l.n_y = n_y;
  l.k_hat = k_hat;
  return l;
}

std::vector<BundleEntry> RandomBundle(std::size_t problems, Seed seed) {
  RandomStream stream(seed);
  std::vector<BundleEntry> out;
  for (std::size_t p = 0; p < problems; ++p) {
    for (int c = 0; c < 2; ++c) {
      BundleEntry e;
      e.problem_id = "p" + std::to_string(p);
      e.candidate_id = "c" + std::to_string(c);
      e.score = stream.Uniform();
      const bool good = stream.Uniform() < e.score;
      e.calibration_label = L(good, 7, good ? 7 : 3);
      e.evaluation_label = L(good, good ? 11 : 600, good ? 11 : 590);
      out.push_back(e);
    }
  }
  return out;
}

TEST(EmpiricalFdrCe, Examples) {
  std::vector<EntailmentLabel> labels;
  for (int i = 0; i < 10; ++i) labels.push_back(L(i >= 3));
  EXPECT_DOUBLE_EQ(*EmpiricalFdrCe(labels, std::vector<bool>(10, true)), 0.3);
  EXPECT_FALSE(EmpiricalFdrCe(labels, std::vector<bool>(10, false)).has_value());
  std::vector<EntailmentLabel> good(5, L(true));
  EXPECT_EQ(*EmpiricalFdrCe(good, std::vector<bool>(5, true)), 0.0);
  EXPECT_THROW(EmpiricalFdrCe(good, std::vector<bool>(4, true)), InputError);
}

TEST(EmpiricalEfficiency, Examples) {
  std::vector<bool> half(20, false);
  std::fill(half.begin(), half.begin() + 10, true);
  EXPECT_EQ(EmpiricalEfficiency(half), 0.5);
  EXPECT_EQ(EmpiricalEfficiency(std::vector<bool>(7, false)), 0.0);
  EXPECT_EQ(EmpiricalEfficiency(std::vector<bool>(7, true)), 1.0);
  EXPECT_THROW(EmpiricalEfficiency({}), InputError);
}

TEST(PassAt1, Examples) {
  std::vector<bool> passed(10, false);
  std::fill(passed.begin(), passed.begin() + 7, true);
  EXPECT_DOUBLE_EQ(*PassAt1(passed), 0.7);
  EXPECT_EQ(*PassAt1(std::vector<bool>(4, false)), 0.0);
  const std::vector<bool> p = {true, false, true, true, false, true};
  const std::vector<bool> s = {true, true, false, true, false, false};
  // Selected items 0, 1, 3; items 0 and 3 passed.
  EXPECT_DOUBLE_EQ(*PassAt1(p, &s), 2.0 / 3.0);
  const std::vector<bool> none(6, false);
  EXPECT_FALSE(PassAt1(p, &none).has_value());
}

TEST(EvaluateModel, AgreesWithDirectCounting) {
  const auto bundle = RandomBundle(200, Seed{3});
  for (double tau : {-1.0, 0.2, 0.5, 0.9, 2.0}) {
    SelectiveGeneratorModel m;
    m.tau = tau;
    m.u_hat = 0.2;
    m.feasible = true;
    const EvalReport r = EvaluateModel(m, bundle);
    std::size_t sel = 0, bad = 0, failed = 0;
    for (const BundleEntry& e : bundle) {
      if (e.score < tau) continue;
      ++sel;
      bad += !e.evaluation_label.entailed;
      failed += e.evaluation_label.k_hat != e.evaluation_label.n_y;
    }
    EXPECT_EQ(r.counts.selected, sel);
    EXPECT_EQ(r.counts.selected_false, bad);
    EXPECT_EQ(r.counts.total, bundle.size());
    EXPECT_DOUBLE_EQ(r.efficiency, static_cast<double>(sel) / bundle.size());
    if (sel == 0) {
      EXPECT_FALSE(r.fdr_ce.has_value());
      EXPECT_FALSE(r.one_minus_pass1.has_value());
      EXPECT_FALSE(r.violation.has_value());
    } else {
      EXPECT_DOUBLE_EQ(*r.fdr_ce, static_cast<double>(bad) / sel);
      EXPECT_NEAR(*r.one_minus_pass1, static_cast<double>(failed) / sel, 1e-15);
      EXPECT_EQ(*r.violation, *r.fdr_ce > 0.2);
    }
  }
}

TEST(EvaluateModel, InfeasibleModelAbstains) {
  const auto bundle = RandomBundle(20, Seed{4});
  SelectiveGeneratorModel m;
  m.tau = -1.0;  // would select everything if deployed
  m.u_hat = 0.7;
  m.feasible = false;
  const EvalReport r = EvaluateModel(m, bundle);
  EXPECT_EQ(r.efficiency, 0.0);
  EXPECT_FALSE(r.fdr_ce.has_value());
  EXPECT_FALSE(r.violation.has_value());
  EXPECT_EQ(r.counts.selected, 0u);
  // Methods without a feasibility notion are applied as they are.
  m.feasible.reset();
  m.u_hat.reset();
  EXPECT_EQ(EvaluateModel(m, bundle).efficiency, 1.0);
  EXPECT_THROW(EvaluateModel(m, {}), InputError);
}

TEST(QuantileWhiskers, ValuesAndBracketing) {
  std::vector<double> v;
  for (int i = 1; i <= 11; ++i) v.push_back(i);
  const Whiskers w = *QuantileWhiskers(v, 0.1);
  EXPECT_DOUBLE_EQ(w.low, 2.0);
  EXPECT_DOUBLE_EQ(w.median, 6.0);
  EXPECT_DOUBLE_EQ(w.high, 10.0);
  EXPECT_EQ(w.count, 11u);
  EXPECT_DOUBLE_EQ(QuantileWhiskers({1.0, 2.0}, 0.1)->median, 1.5);
  EXPECT_FALSE(QuantileWhiskers({}, 0.1).has_value());
  RandomStream stream(Seed{8});
  for (int t = 0; t < 200; ++t) {
    std::vector<double> xs(1 + stream.Below(60));
    for (double& x : xs) x = stream.Uniform();
    const Whiskers q = *QuantileWhiskers(xs, 0.01 + 0.48 * stream.Uniform());
    EXPECT_LE(q.low, q.median);
    EXPECT_LE(q.median, q.high);
    EXPECT_GE(q.low, *std::min_element(xs.begin(), xs.end()));
    EXPECT_LE(q.high, *std::max_element(xs.begin(), xs.end()));
  }
}

Learner ScgLearner() {
  return [](std::span<const CalibrationRecord> r) { return LearnScg(r, 0.3, 0.1, 0.05); };
}

void ExpectSameReports(const SplitRun& a, const SplitRun& b) {
  ASSERT_EQ(a.trials.size(), b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    EXPECT_EQ(a.trials[i].model.tau, b.trials[i].model.tau);
    EXPECT_EQ(a.trials[i].fdr_ce, b.trials[i].fdr_ce);
    EXPECT_EQ(a.trials[i].efficiency, b.trials[i].efficiency);
    EXPECT_EQ(a.trials[i].counts.selected, b.trials[i].counts.selected);
  }
  EXPECT_EQ(a.summary.violation_rate, b.summary.violation_rate);
}

TEST(RunRandomSplits, DeterministicAndPolicyIndependent) {
  const auto bundle = RandomBundle(150, Seed{5});
  SplitConfig cfg;
  cfg.trials = 30;
  cfg.split_seed = Seed{99};
  const SplitRun a = RunRandomSplits(bundle, ScgLearner(), cfg);
  const SplitRun b = RunRandomSplits(bundle, ScgLearner(), cfg);
  ExpectSameReports(a, b);
  cfg.policy = ExecutionPolicy::kParallel;
  ExpectSameReports(a, RunRandomSplits(bundle, ScgLearner(), cfg));
  for (std::size_t i = 0; i < a.trials.size(); ++i) EXPECT_EQ(a.trials[i].trial, i);
}

TEST(RunRandomSplits, SplitsByProblem) {
  const auto bundle = RandomBundle(50, Seed{6});
  SplitConfig cfg;
  cfg.trials = 10;
  std::vector<std::set<std::string>> seen(cfg.trials);
  std::mutex mu;
  std::size_t calls = 0;
  const Learner spy = [&](std::span<const CalibrationRecord> r) {
    std::set<std::string> ids;
    for (const auto& rec : r) ids.insert(rec.problem_id);
    std::lock_guard<std::mutex> lock(mu);
    EXPECT_EQ(ids.size(), 40u);
    EXPECT_EQ(r.size(), 80u);  // both candidates of each problem
    ++calls;
    return LearnScg(r, 0.3, 0.1, 0.05);
  };
  const SplitRun run = RunRandomSplits(bundle, spy, cfg);
  EXPECT_EQ(calls, 10u);
  for (const EvalReport& r : run.trials) EXPECT_EQ(r.counts.total, 20u);
}

TEST(RunRandomSplits, InfeasibleCalibrationReportsAbstention) {
  auto bundle = RandomBundle(10, Seed{7});
  for (BundleEntry& e : bundle) e.calibration_label.entailed = false;
  SplitConfig cfg;
  cfg.trials = 1;
  const SplitRun run = RunRandomSplits(bundle, ScgLearner(), cfg);
  ASSERT_EQ(run.trials.size(), 1u);
  const EvalReport& r = run.trials[0];
  EXPECT_FALSE(*r.model.feasible);
  EXPECT_EQ(r.efficiency, 0.0);
  EXPECT_FALSE(r.fdr_ce.has_value());
  EXPECT_FALSE(r.one_minus_pass1.has_value());
  EXPECT_EQ(run.summary.infeasible_trials, 1u);
  EXPECT_EQ(run.summary.undefined_fdr_trials, 1u);
  EXPECT_FALSE(run.summary.mean_fdr_ce.has_value());
  EXPECT_FALSE(run.summary.fdr_ce.has_value());
  EXPECT_EQ(run.summary.violation_rate, 0.0);
}

TEST(RunRandomSplits, RejectsDegenerateSplits) {
  const auto bundle = RandomBundle(2, Seed{1});
  SplitConfig cfg;
  EXPECT_THROW(RunRandomSplits(bundle, ScgLearner(), cfg), InputError);  // 2 of 2
  cfg.ratio = 1.0;
  EXPECT_THROW(RunRandomSplits(RandomBundle(10, Seed{1}), ScgLearner(), cfg), InputError);
  cfg.ratio = 0.8;
  cfg.trials = 0;
  EXPECT_THROW(RunRandomSplits(RandomBundle(10, Seed{1}), ScgLearner(), cfg), InputError);
}

std::vector<CalibrationRecord> Scores(std::vector<double> scores) {
  std::vector<CalibrationRecord> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.push_back({"p" + std::to_string(i), "c", scores[i], {}});
  }
  return out;
}

TEST(BaselineScgManual, OrderStatistics) {
  const auto records = Scores({0.8, 0.1, 0.5, 0.3, 0.9, 0.2, 0.7, 0.4});
  EXPECT_EQ(BaselineScgManual(records, 1.0).tau, 0.1);
  // Sorted: .1 .2 .3 .4 .5 .7 .8 .9; the top half starts at the 5th smallest.
  EXPECT_EQ(BaselineScgManual(records, 0.5).tau, 0.5);
  EXPECT_EQ(BaselineScgManual(records, 0.125).tau, 0.9);
  const SelectiveGeneratorModel m = BaselineScgManual(records, 0.5);
  EXPECT_FALSE(m.u_hat.has_value());
  EXPECT_FALSE(m.feasible.has_value());
  double prev = kAbstainAll;
  for (double f = 0.01; f <= 1.0; f += 0.01) {
    const double tau = BaselineScgManual(records, f).tau;
    EXPECT_LE(tau, prev);
    prev = tau;
  }
  EXPECT_THROW(BaselineScgManual(records, 0.0), InputError);
  EXPECT_THROW(BaselineScgManual(records, 1.5), InputError);
}

class SmallBaselineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (int p = 0; p < 6; ++p) {
      Problem prob;
      prob.id = "p" + std::to_string(p);
      prob.reference = "ref";
      prob.entry.function_name = "f";
      prob.schema.params = {ValueSpec::Integer(0, 100000)};
      problems_.push_back(prob);
    }
    exec_.RegisterPure("ref", [](const Value& in) { return in[0]; });
    exec_.RegisterPure("half", [](const Value& in) {
      const int x = in[0].get<int>();
      return Value(x % 2 == 0 ? x : -x);
    });
    for (const Problem& p : problems_) {
      banks_.push_back(BuildTestBank(p, 200, Seed{Fnv1a64(p.id)}, exec_, ExecLimits{}));
    }
    for (std::size_t i = 0; i < problems_.size(); ++i) {
      jobs_.push_back({&problems_[i], &banks_[i], "good", "ref"});
      jobs_.push_back({&problems_[i], &banks_[i], "half", "half"});
      scores_.push_back(0.9);
      scores_.push_back(0.1);
    }
  }

  std::vector<Problem> problems_;
  std::vector<TestBank> banks_;
  std::vector<LabelJob> jobs_;
  std::vector<double> scores_;
  testing::FunctionExecutor exec_;
  const EntailmentConfig cfg_{0.35, 0.05, 150};
};

TEST_F(SmallBaselineTest, LargeCapMatchesFullLabels) {
  const auto full = LabelAll(jobs_, exec_, cfg_, LabelingOptions{});
  const auto small = BaselineScgSmall(jobs_, scores_, exec_, cfg_, {}, 0.3, 0.1, 200);
  for (std::size_t i = 0; i < full.size(); ++i) {
    EXPECT_EQ(small.labels[i].label.n_y, full[i].label.n_y);
    EXPECT_EQ(small.labels[i].label.entailed, full[i].label.entailed);
  }
  EXPECT_EQ(small.model.method, "scg-small");
}

TEST_F(SmallBaselineTest, SingleTestNeverEntails) {
  const auto small = BaselineScgSmall(jobs_, scores_, exec_, cfg_, {}, 0.3, 0.1, 1);
  ASSERT_LT(oracle::CpLower(1, 1, 0.05), 0.65);
  for (const LabeledPair& l : small.labels) {
    EXPECT_EQ(l.label.n_y, 1u);
    EXPECT_FALSE(l.label.entailed);
    EXPECT_TRUE(l.label.exhausted);
  }
}

TEST_F(SmallBaselineTest, CapsReplayBankPrefixes) {
  for (std::size_t cap : {1u, 3u, 7u, 21u, 60u}) {
    const auto small = BaselineScgSmall(jobs_, scores_, exec_, cfg_, {}, 0.3, 0.1, cap);
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
      std::vector<bool> outcomes;
      for (std::size_t t = 0; t < cap; ++t) {
        const UnitTest& test = jobs_[i].bank->tests[t];
        outcomes.push_back(exec_.RunOnce(jobs_[i].code, jobs_[i].problem->entry, test.input,
                                         ExecLimits{})
                               .output == test.expected_output);
      }
      const EntailmentLabel want = LabelSequence(outcomes, cfg_);
      EXPECT_EQ(small.labels[i].label.n_y, want.n_y);
      EXPECT_EQ(small.labels[i].label.k_hat, want.k_hat);
      EXPECT_EQ(small.labels[i].label.entailed, want.entailed);
    }
  }
  EXPECT_THROW(BaselineScgSmall(jobs_, scores_, exec_, cfg_, {}, 0.3, 0.1, 0), InputError);
}

TEST_F(SmallBaselineTest, FullPassAndEntailmentCoincideAtFullBank) {
  // 1 - alpha sits just below delta^(1/N): only N passes out of N entail.
  const std::size_t n = 40;
  const double floor = oracle::CpLower(n, n, 0.05);
  const EntailmentConfig strict{1.0 - floor + 1e-9, 0.05, n};
  exec_.RegisterPure("rare", [](const Value& in) {
    const int x = in[0].get<int>();
    return Value(x % 97 == 0 ? x + 1 : x);
  });
  std::vector<LabelJob> jobs = jobs_;
  for (std::size_t i = 0; i < problems_.size(); ++i) {
    jobs.push_back({&problems_[i], &banks_[i], "rare", "rare"});
  }
  LabelingOptions opts;
  opts.bank_cap = n;
  const auto labels = LabelAll(jobs, exec_, strict, opts);
  for (const LabeledPair& l : labels) {
    ASSERT_EQ(l.label.n_y, n);
    EXPECT_EQ(PassedAll(l.label), l.label.entailed) << l.problem_id << "/" << l.candidate_id;
  }
}

TEST(ExactMatchAsLabel, Values) {
  EXPECT_TRUE(ExactMatchAsLabel(true).entailed);
  EXPECT_FALSE(ExactMatchAsLabel(false).entailed);
}

}  // namespace
}  // namespace scg
