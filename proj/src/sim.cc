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
#include "scg/sim.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "scg/bounds.h"
#include "scg/errors.h"

namespace scg {

namespace {

// Stream tags so that world sampling, decomposition draws and trend draws never
// share a seed sequence.
constexpr std::uint64_t kLemmaTag = 0x4c454d4d41320000ULL;
constexpr std::uint64_t kQuantileTag = 0x5155414e54000000ULL;

constexpr int kQuadraturePoints = 20000;

double UpperNormalTail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double SelectGivenP(const SyntheticWorldConfig& c, double p, double tau) {
  if (std::isinf(tau)) return tau < 0 ? 1.0 : 0.0;
  const double mean = c.slope * p;
  if (c.noise == 0.0) return mean >= tau ? 1.0 : 0.0;
  return UpperNormalTail((tau - mean) / c.noise);
}

double BetaLogNorm(const BetaFamily& b) {
  return std::lgamma(b.a + b.b) - std::lgamma(b.a) - std::lgamma(b.b);
}

// Integral of density(p) * f(p) over [lo, hi] by the midpoint rule.
template <typename F>
double IntegrateBeta(const BetaFamily& b, double lo, double hi, F&& f) {
  if (hi <= lo) return 0.0;
  const double log_norm = BetaLogNorm(b);
  const double h = (hi - lo) / kQuadraturePoints;
  double sum = 0.0;
  for (int i = 0; i < kQuadraturePoints; ++i) {
    const double p = lo + (i + 0.5) * h;
    const double density = std::exp(log_norm + (b.a - 1.0) * std::log(p) +
                                    (b.b - 1.0) * std::log1p(-p));
    sum += density * f(p);
  }
  return sum * h;
}

double SampleP(const SyntheticWorldConfig& c, RandomStream& stream) {
  if (c.beta) {
    std::gamma_distribution<double> ga(c.beta->a, 1.0);
    std::gamma_distribution<double> gb(c.beta->b, 1.0);
    const double x = ga(stream);
    const double y = gb(stream);
    return x / (x + y);
  }
  const double u = stream.Uniform();
  double acc = 0.0;
  for (const MixtureAtom& atom : c.atoms) {
    acc += atom.weight;
    if (u < acc) return atom.p;
  }
  return c.atoms.back().p;
}

double StandardNormal(RandomStream& stream) {
  // Box-Muller; u1 in (0, 1].
  const double u1 = 1.0 - stream.Uniform();
  const double u2 = stream.Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

void SyntheticWorldConfig::Validate() const {
  if (n < 2) throw InputError("world needs n >= 2");
  if (beta) {
    if (!(beta->a >= 1.0 && beta->b >= 1.0)) {
      throw InputError("beta family needs a, b >= 1");
    }
  } else {
    if (atoms.empty()) throw InputError("mixture has no atoms");
    double total = 0.0;
    for (const MixtureAtom& atom : atoms) {
      if (!(atom.weight >= 0.0) || !(atom.p >= 0.0 && atom.p <= 1.0)) {
        throw InputError("mixture atoms need weight >= 0 and p in [0, 1]");
      }
      total += atom.weight;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw InputError("mixture weights must sum to 1");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise) || !std::isfinite(slope)) {
    throw InputError("score model needs finite slope and noise >= 0");
  }
  entailment().Validate();
  if (!(eps_s > 0.0 && eps_s < 1.0) || !(delta_s > 0.0 && delta_s < 1.0)) {
    throw InputError("eps_s and delta_s must lie in (0, 1)");
  }
}

SyntheticWorldConfig DefaultMixedWorld() {
  SyntheticWorldConfig c;
  c.name = "default-mixed";
  c.atoms = {{0.40, 1.0}, {0.15, 0.9}, {0.10, 0.7},
             {0.10, 0.6}, {0.10, 0.3}, {0.15, 0.0}};
  c.slope = 1.0;
  c.noise = 0.15;
  return c;
}

SyntheticWorldConfig UninformativeWorld() {
  SyntheticWorldConfig c = DefaultMixedWorld();
  c.name = "uninformative";
  c.slope = 0.0;
  c.noise = 1000.0;
  return c;
}

SyntheticWorldConfig BetaWorld() {
  SyntheticWorldConfig c = DefaultMixedWorld();
  c.name = "beta";
  c.atoms.clear();
  c.beta = BetaFamily{4.0, 1.5};
  return c;
}

SyntheticWorldConfig ParseWorldConfig(const Value& json) {
  SyntheticWorldConfig c = DefaultMixedWorld();
  try {
    c.name = json.value("name", c.name);
    c.n = json.value("n", c.n);
    if (json.contains("atoms")) {
      c.atoms.clear();
      for (const Value& atom : json.at("atoms")) {
        c.atoms.push_back({atom.at(0).get<double>(), atom.at(1).get<double>()});
      }
      c.beta.reset();
    }
    if (json.contains("beta")) {
      c.beta = BetaFamily{json.at("beta").at("a").get<double>(),
                          json.at("beta").at("b").get<double>()};
      c.atoms.clear();
    }
    c.slope = json.value("slope", c.slope);
    c.noise = json.value("noise", c.noise);
    c.alpha = json.value("alpha", c.alpha);
    c.epsilon_e = json.value("epsilon_e", c.epsilon_e);
    c.eps_s = json.value("eps_s", c.eps_s);
    c.delta_s = json.value("delta_s", c.delta_s);
    c.n_max = json.value("n_max", c.n_max);
    c.seed = Seed{json.value("seed", c.seed.value)};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed world config: ") + e.what());
  }
  c.Validate();
  return c;
}

Value WorldConfigToJson(const SyntheticWorldConfig& c) {
  Value json;
  json["name"] = c.name;
  json["n"] = c.n;
  if (c.beta) {
    json["beta"] = {{"a", c.beta->a}, {"b", c.beta->b}};
  } else {
    json["atoms"] = Value::array();
    for (const MixtureAtom& atom : c.atoms) json["atoms"].push_back({atom.weight, atom.p});
  }
  json["slope"] = c.slope;
  json["noise"] = c.noise;
  json["alpha"] = c.alpha;
  json["epsilon_e"] = c.epsilon_e;
  json["eps_s"] = c.eps_s;
  json["delta_s"] = c.delta_s;
  json["n_max"] = c.n_max;
  json["seed"] = c.seed.value;
  return json;
}

SyntheticProblem DrawProblem(const SyntheticWorldConfig& config, RandomStream& stream) {
  SyntheticProblem problem;
  problem.p = SampleP(config, stream);
  problem.score = config.slope * problem.p;
  if (config.noise > 0.0) problem.score += config.noise * StandardNormal(stream);
  problem.entailed = problem.p >= 1.0 - config.alpha;
  problem.trial_seed = Seed{stream.Next()};
  return problem;
}

SyntheticWorld SynthWorld(const SyntheticWorldConfig& config, Seed draw_seed) {
  config.Validate();
  SyntheticWorld world;
  world.problems.reserve(config.n);
  RandomStream stream(draw_seed);
  for (std::size_t i = 0; i < config.n; ++i) {
    world.problems.push_back(DrawProblem(config, stream));
  }
  return world;
}

TrialResult BernoulliTrialSource::Run(std::size_t index) {
  const std::uint64_t word = Mix64(seed_.value + (index + 1) * 0x9e3779b97f4a7c15ULL);
  const double u = static_cast<double>(word >> 11) * 0x1.0p-53;
  return u < p_ ? TrialResult::kPass : TrialResult::kFail;
}

EntailmentLabel LabelSynthetic(const SyntheticProblem& problem,
                               const EntailmentConfig& config,
                               const StoppingRule& rule) {
  BernoulliTrialSource source(problem.p, problem.trial_seed);
  return LabelCandidate(source, config, ShortSourcePolicy::kError, &rule);
}

std::vector<CalibrationRecord> LabelWorld(const SyntheticWorld& world,
                                          const StoppingRule& rule) {
  std::vector<CalibrationRecord> records;
  records.reserve(world.problems.size());
  for (std::size_t i = 0; i < world.problems.size(); ++i) {
    const SyntheticProblem& problem = world.problems[i];
    records.push_back({"p" + std::to_string(i), "c0", problem.score,
                       LabelSynthetic(problem, rule.config(), rule)});
  }
  return records;
}

double SelectionProbability(const SyntheticWorldConfig& config, double tau) {
  if (config.beta) {
    return IntegrateBeta(*config.beta, 0.0, 1.0,
                         [&](double p) { return SelectGivenP(config, p, tau); });
  }
  double total = 0.0;
  for (const MixtureAtom& atom : config.atoms) {
    total += atom.weight * SelectGivenP(config, atom.p, tau);
  }
  return total;
}

std::optional<double> TrueFdr(const SyntheticWorldConfig& config, double tau) {
  const double boundary = 1.0 - config.alpha;
  double bad = 0.0;
  double all = 0.0;
  if (config.beta) {
    const auto select = [&](double p) { return SelectGivenP(config, p, tau); };
    bad = IntegrateBeta(*config.beta, 0.0, boundary, select);
    all = bad + IntegrateBeta(*config.beta, boundary, 1.0, select);
  } else {
    for (const MixtureAtom& atom : config.atoms) {
      const double mass = atom.weight * SelectGivenP(config, atom.p, tau);
      all += mass;
      if (atom.p < boundary) bad += mass;
    }
  }
  if (all <= 0.0) return std::nullopt;
  return bad / all;
}

double ScoreQuantile(const SyntheticWorldConfig& config, double q) {
  constexpr std::size_t kSample = 20001;
  RandomStream stream(Seed{config.seed.value ^ kQuantileTag});
  std::vector<double> scores(kSample);
  for (double& s : scores) s = DrawProblem(config, stream).score;
  std::sort(scores.begin(), scores.end());
  const auto idx = static_cast<std::size_t>(
      std::clamp(q, 0.0, 1.0) * static_cast<double>(kSample - 1));
  return scores[idx];
}

Lemma2Result CheckLemma2(const SyntheticWorldConfig& config, double tau,
                         std::size_t trials, ExecutionPolicy policy) {
  config.Validate();
  if (trials < 1000) throw InputError("lemma check needs at least 1000 trials");
  const EntailmentConfig entail = config.entailment();
  const StoppingRule rule(entail);

  // Per trial: 0 = not selected, else bit 1 = e false, bit 2 = e-hat false.
  std::vector<int> outcome(trials, 0);
  ParallelFor(trials, policy, [&](std::size_t i) {
    RandomStream stream(MutateSeed(Seed{config.seed.value ^ kLemmaTag}, i));
    const SyntheticProblem problem = DrawProblem(config, stream);
    if (problem.score < tau) return;
    const EntailmentLabel label = LabelSynthetic(problem, entail, rule);
    outcome[i] = 1 | (problem.entailed ? 0 : 2) | (label.entailed ? 0 : 4);
  });

  Lemma2Result result;
  result.tau = tau;
  double sum_d = 0.0;
  double sum_d2 = 0.0;
  std::size_t true_bad = 0;
  std::size_t est_bad = 0;
  for (int o : outcome) {
    if (o == 0) continue;
    ++result.selected;
    const int e_bad = (o & 2) ? 1 : 0;
    const int ehat_bad = (o & 4) ? 1 : 0;
    true_bad += e_bad;
    est_bad += ehat_bad;
    const double d = e_bad - ehat_bad;
    sum_d += d;
    sum_d2 += d * d;
  }
  if (result.selected == 0) {
    result.degenerate = true;
    result.holds = true;
    result.rhs = config.epsilon_e;
    return result;
  }
  const auto m = static_cast<double>(result.selected);
  result.lhs = static_cast<double>(true_bad) / m;
  result.rhs = config.epsilon_e + static_cast<double>(est_bad) / m;
  const double mean_d = sum_d / m;
  const double var_d = m > 1 ? std::max(0.0, (sum_d2 - m * mean_d * mean_d) / (m - 1)) : 0.0;
  result.standard_error = std::sqrt(var_d / m);
  result.holds = result.lhs <= result.rhs + 3.0 * result.standard_error;
  return result;
}

ControllabilityResult CheckControllability(const SyntheticWorldConfig& config,
                                           std::size_t calibration_draws,
                                           ExecutionPolicy policy) {
  config.Validate();
  if (calibration_draws < 1) throw InputError("need at least one calibration draw");
  const StoppingRule rule(config.entailment());

  ControllabilityResult result;
  result.draws = calibration_draws;
  result.models.resize(calibration_draws);
  std::vector<char> violated(calibration_draws, 0);
  std::vector<double> efficiency(calibration_draws, 0.0);
  ParallelFor(calibration_draws, policy, [&](std::size_t d) {
    const SyntheticWorld world = SynthWorld(config, MutateSeed(config.seed, d));
    const std::vector<CalibrationRecord> records = LabelWorld(world, rule);
    SelectiveGeneratorModel model =
        LearnScg(records, config.eps_s, config.delta_s, config.epsilon_e);
    model.alpha = config.alpha;
    const std::optional<double> fdr = TrueFdr(config, model.tau);
    violated[d] = fdr && *fdr > *model.u_hat ? 1 : 0;
    efficiency[d] = *model.feasible ? SelectionProbability(config, model.tau) : 0.0;
    result.models[d] = std::move(model);
  });

  double u_sum = 0.0;
  for (std::size_t d = 0; d < calibration_draws; ++d) {
    result.violations += violated[d];
    if (!*result.models[d].feasible) ++result.infeasible;
    u_sum += *result.models[d].u_hat;
  }
  const auto draws = static_cast<double>(calibration_draws);
  result.violation_rate = static_cast<double>(result.violations) / draws;
  result.standard_error = std::sqrt(config.delta_s * (1.0 - config.delta_s) / draws);
  result.mean_u_hat = u_sum / draws;
  result.mean_efficiency =
      std::accumulate(efficiency.begin(), efficiency.end(), 0.0) / draws;
  result.passes = result.violation_rate <= config.delta_s + 3.0 * result.standard_error;
  return result;
}

CoverageResult CheckCoverage(double theta, std::size_t n, double delta,
                             std::size_t draws, Seed seed, ExecutionPolicy policy) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InputError("theta must lie in [0, 1]");
  if (n < 1 || draws < 1) throw InputError("coverage check needs n >= 1 and draws >= 1");
  const ConfidenceBudget budget(delta);
  // Only n + 1 distinct bounds exist; tabulate them once.
  std::vector<char> covered(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    covered[k] = ClopperPearsonLower(BinomialObservation(k, n), budget) <= theta;
  }
  std::vector<char> hit(draws, 0);
  ParallelFor(draws, policy, [&](std::size_t d) {
    RandomStream stream(MutateSeed(seed, d));
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) k += stream.Uniform() < theta;
    hit[d] = covered[k];
  });
  CoverageResult result{theta, n, delta, draws};
  const auto m = static_cast<double>(draws);
  result.coverage = static_cast<double>(std::accumulate(hit.begin(), hit.end(), 0)) / m;
  result.standard_error = std::sqrt(delta * (1.0 - delta) / m);
  result.passes = result.coverage >= 1.0 - delta - 3.0 * result.standard_error;
  return result;
}

EvaluationTrend FuzzEvalTrend(const SyntheticWorldConfig& config, double tau,
                              std::span<const std::size_t> eval_n_max,
                              double epsilon_e_test, std::size_t test_size,
                              Seed seed, ExecutionPolicy policy) {
  config.Validate();
  EvaluationTrend trend;
  trend.tau = tau;
  trend.true_fdr = TrueFdr(config, tau);

  std::vector<SyntheticProblem> selected;
  RandomStream stream(seed);
  for (std::size_t i = 0; i < test_size; ++i) {
    SyntheticProblem problem = DrawProblem(config, stream);
    if (problem.score >= tau) selected.push_back(problem);
  }
  trend.selected = selected.size();

  for (std::size_t budget : eval_n_max) {
    const EntailmentConfig entail{config.alpha, epsilon_e_test, budget};
    const StoppingRule rule(entail);
    std::vector<char> bad(selected.size(), 0);
    ParallelFor(selected.size(), policy, [&](std::size_t i) {
      bad[i] = LabelSynthetic(selected[i], entail, rule).entailed ? 0 : 1;
    });
    TrendPoint point;
    point.eval_n_max = budget;
    if (!selected.empty()) {
      const double m = static_cast<double>(selected.size());
      const double fdr = static_cast<double>(std::accumulate(bad.begin(), bad.end(), 0)) / m;
      point.fdr_ce = fdr;
      point.standard_error = std::sqrt(fdr * (1.0 - fdr) / m);
    }
    trend.points.push_back(point);
  }
  return trend;
}

}  // namespace scg
