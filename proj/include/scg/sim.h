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
#ifndef SCG_SIM_H_
#define SCG_SIM_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scg/calibrate.h"
#include "scg/entailment.h"
#include "scg/fuzzgen.h"
#include "scg/parallel.h"
#include "scg/value.h"

namespace scg {

struct MixtureAtom {
  double weight = 0.0;
  double p = 0.0;
};

// Beta(a, b) pass probabilities; a, b >= 1 keeps the density bounded.
struct BetaFamily {
  double a = 1.0;
  double b = 1.0;
};

// A synthetic generator: each problem's candidate passes a random test with
// probability p drawn from the mixture, and is scored slope * p + noise * Z.
struct SyntheticWorldConfig {
  std::string name = "world";
  std::size_t n = 400;  // calibration set size per draw
  std::vector<MixtureAtom> atoms;
  std::optional<BetaFamily> beta;  // used instead of atoms when set
  double slope = 1.0;
  double noise = 0.15;
  double alpha = 0.35;
  double epsilon_e = 0.05;
  double eps_s = 0.3;
  double delta_s = 0.1;
  std::size_t n_max = 150;
  Seed seed{20260101};

  void Validate() const;
  EntailmentConfig entailment() const { return {alpha, epsilon_e, n_max}; }
};

SyntheticWorldConfig DefaultMixedWorld();
// Scores carry no information about p.
SyntheticWorldConfig UninformativeWorld();
// Continuous pass probabilities, Beta(4, 1.5).
SyntheticWorldConfig BetaWorld();

// Accepts {"name", "n", "atoms": [[w, p], ...] | "beta": {"a", "b"}, "slope",
// "noise", "alpha", "epsilon_e", "eps_s", "delta_s", "n_max", "seed"}; absent
// keys keep the defaults of DefaultMixedWorld().
SyntheticWorldConfig ParseWorldConfig(const Value& json);
Value WorldConfigToJson(const SyntheticWorldConfig& config);

struct SyntheticProblem {
  double p = 0.0;
  double score = 0.0;
  bool entailed = false;  // hidden truth: p >= 1 - alpha
  Seed trial_seed;        // drives its Bernoulli test outcomes
};

struct SyntheticWorld {
  std::vector<SyntheticProblem> problems;
};

// Draws cfg.n problems.
SyntheticWorld SynthWorld(const SyntheticWorldConfig& config, Seed draw_seed);

// Draws one problem from the world distribution.
SyntheticProblem DrawProblem(const SyntheticWorldConfig& config, RandomStream& stream);

// Stub executor: test j passes iff a counter-based uniform draw is below p.
class BernoulliTrialSource : public TrialSource {
 public:
  BernoulliTrialSource(double p, Seed seed) : p_(p), seed_(seed) {}

  std::optional<std::size_t> capacity() const override { return std::nullopt; }
  TrialResult Run(std::size_t index) override;

 private:
  double p_;
  Seed seed_;
};

EntailmentLabel LabelSynthetic(const SyntheticProblem& problem,
                               const EntailmentConfig& config,
                               const StoppingRule& rule);

std::vector<CalibrationRecord> LabelWorld(const SyntheticWorld& world,
                                          const StoppingRule& rule);

// Probability that a fresh problem is selected at tau, and the true FDR
// among selected problems; both from the hidden p distribution in closed
// form (quadrature for the Beta family). TrueFdr is nullopt when the
// selection probability is zero.
double SelectionProbability(const SyntheticWorldConfig& config, double tau);
std::optional<double> TrueFdr(const SyntheticWorldConfig& config, double tau);

// Score quantile of the world (Monte-Carlo over a fixed-seed sample).
double ScoreQuantile(const SyntheticWorldConfig& config, double q);

struct Lemma2Result {
  double tau = 0.0;
  double lhs = 0.0;  // true FDR among selected
  double rhs = 0.0;  // epsilon_e + estimated-label FDR among selected
  double standard_error = 0.0;
  std::size_t selected = 0;
  bool degenerate = false;
  bool holds = false;  // lhs <= rhs + 3 se
};

Lemma2Result CheckLemma2(const SyntheticWorldConfig& config, double tau,
                         std::size_t trials,
                         ExecutionPolicy policy = ExecutionPolicy::kParallel);

struct ControllabilityResult {
  std::size_t draws = 0;
  std::size_t violations = 0;
  std::size_t infeasible = 0;
  double violation_rate = 0.0;
  double standard_error = 0.0;  // sqrt(delta_s (1 - delta_s) / draws)
  double mean_u_hat = 0.0;
  double mean_efficiency = 0.0;  // true selection probability, 0 if infeasible
  bool passes = false;           // violation_rate <= delta_s + 3 se
  std::vector<SelectiveGeneratorModel> models;
};

ControllabilityResult CheckControllability(
    const SyntheticWorldConfig& config, std::size_t calibration_draws,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

struct CoverageResult {
  double theta = 0.0;
  std::size_t n = 0;
  double delta = 0.0;
  std::size_t draws = 0;
  double coverage = 0.0;        // fraction of draws with lower <= theta
  double standard_error = 0.0;  // sqrt(delta (1 - delta) / draws)
  bool passes = false;          // coverage >= 1 - delta - 3 se
};

// Draws k ~ Bin(n, theta) and checks ClopperPearsonLower(k, n, delta) <= theta.
CoverageResult CheckCoverage(double theta, std::size_t n, double delta,
                             std::size_t draws, Seed seed,
                             ExecutionPolicy policy = ExecutionPolicy::kParallel);

struct TrendPoint {
  std::size_t eval_n_max = 0;
  std::optional<double> fdr_ce;
  double standard_error = 0.0;
};

struct EvaluationTrend {
  double tau = 0.0;
  std::optional<double> true_fdr;
  std::size_t selected = 0;
  std::vector<TrendPoint> points;
};

// Empirical FDR-CE of the threshold tau on test_size fresh problems, labeled
// at epsilon_e_test with each evaluation budget. All budgets see the same
// Bernoulli outcome streams.
EvaluationTrend FuzzEvalTrend(const SyntheticWorldConfig& config, double tau,
                              std::span<const std::size_t> eval_n_max,
                              double epsilon_e_test, std::size_t test_size,
                              Seed seed,
                              ExecutionPolicy policy = ExecutionPolicy::kParallel);

}  // namespace scg

#endif  // SCG_SIM_H_
