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
#include "scg/entailment.h"

#include <algorithm>
#include <utility>

#include "scg/bounds.h"
#include "scg/errors.h"

namespace scg {

namespace {

TrialResult FromOutcome(OutcomeStatus status) {
  switch (status) {
    case OutcomeStatus::kPass: return TrialResult::kPass;
    case OutcomeStatus::kInfraError: return TrialResult::kInfraError;
    default: return TrialResult::kFail;
  }
}

class SequenceTrialSource : public TrialSource {
 public:
  explicit SequenceTrialSource(const std::vector<bool>& passes) : passes_(passes) {}

  std::optional<std::size_t> capacity() const override { return passes_.size(); }
  TrialResult Run(std::size_t index) override {
    return passes_[index] ? TrialResult::kPass : TrialResult::kFail;
  }

 private:
  const std::vector<bool>& passes_;
};

std::string TrimBoth(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
  };
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && is_space(s[begin])) ++begin;
  while (end > begin && is_space(s[end - 1])) --end;
  return std::string(s.substr(begin, end - begin));
}

std::vector<std::string> TrimmedLines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(TrimBoth(text.substr(start)));
      return lines;
    }
    lines.push_back(TrimBoth(text.substr(start, end - start)));
    start = end + 1;
  }
}

}  // namespace

void EntailmentConfig::Validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (!(epsilon_e > 0.0 && epsilon_e < 1.0)) {
    throw InputError("epsilon_e must lie in (0, 1)");
  }
  if (n_max < 1) throw InputError("n_max must be >= 1");
}

double FunctionalCorrectnessLower(std::size_t k_hat, std::size_t n_y,
                                  double epsilon_e) {
  if (k_hat > n_y) throw InputError("k_hat exceeds n_y");
  if (n_y == 0) {
    ConfidenceBudget{epsilon_e};  // validates
    return 0.0;
  }
  return ClopperPearsonLower(BinomialObservation(k_hat, n_y),
                             ConfidenceBudget(epsilon_e));
}

BankTrialSource::BankTrialSource(Executor& executor, std::string candidate,
                                 EntryPoint entry, std::span<const UnitTest> tests,
                                 ExecLimits limits, JudgeMode judge)
    : executor_(executor),
      candidate_(std::move(candidate)),
      entry_(std::move(entry)),
      tests_(tests),
      limits_(limits),
      judge_(judge) {}

TrialResult BankTrialSource::Run(std::size_t index) {
  const UnitTest& test = tests_[index];
  const RunResult run = executor_.RunOnce(candidate_, entry_, test.input, limits_);
  return FromOutcome(JudgeRun(run, test.expected_output, judge_).status);
}

OnTheFlyTrialSource::OnTheFlyTrialSource(Executor& executor,
                                         const Problem& problem,
                                         std::string candidate, Seed base_seed,
                                         ExecLimits limits, JudgeMode judge)
    : executor_(executor),
      problem_(problem),
      candidate_(std::move(candidate)),
      base_seed_(base_seed),
      limits_(limits),
      judge_(judge) {}

const UnitTest& OnTheFlyTrialSource::TestAt(std::size_t index) {
  while (generated_.size() <= index) {
    if (next_round_ >= kRoundsPerTest * (index + 1)) {
      throw LabelingError("problem " + problem_.id +
                          ": reference failed on every generated input");
    }
    const std::uint64_t round = next_round_++;
    GenerationResult result =
        GenerateUnitTest(problem_.reference, problem_.entry, problem_.schema,
                         MutateSeed(base_seed_, round), executor_, limits_);
    if (auto* test = std::get_if<UnitTest>(&result)) {
      test->seed_round = round;
      generated_.push_back(std::move(*test));
    }
  }
  return generated_[index];
}

TrialResult OnTheFlyTrialSource::Run(std::size_t index) {
  try {
    const UnitTest& test = TestAt(index);
    const RunResult run =
        executor_.RunOnce(candidate_, problem_.entry, test.input, limits_);
    return FromOutcome(JudgeRun(run, test.expected_output, judge_).status);
  } catch (const InfraError&) {
    return TrialResult::kInfraError;
  }
}

StoppingRule::StoppingRule(const EntailmentConfig& config) : config_(config) {
  config_.Validate();
  const double target = 1.0 - config_.alpha;
  min_passes_.resize(config_.n_max + 1);
  min_passes_[0] = 1;
  std::size_t k = 0;
  for (std::size_t n = 1; n <= config_.n_max; ++n) {
    k = std::min(k, n);
    while (k <= n && FunctionalCorrectnessLower(k, n, config_.epsilon_e) < target) {
      ++k;
    }
    min_passes_[n] = k;  // n + 1 when no k qualifies
  }
}

EntailmentLabel LabelCandidate(TrialSource& source, const EntailmentConfig& config,
                               ShortSourcePolicy policy, const StoppingRule* rule) {
  config.Validate();
  if (rule != nullptr &&
      (rule->config().alpha != config.alpha ||
       rule->config().epsilon_e != config.epsilon_e ||
       rule->config().n_max < config.n_max)) {
    throw InputError("stopping rule was built for a different configuration");
  }
  const double target = 1.0 - config.alpha;
  const auto satisfied = [&](std::size_t k, std::size_t n) {
    if (rule != nullptr) return rule->Satisfied(k, n);
    return FunctionalCorrectnessLower(k, n, config.epsilon_e) >= target;
  };

  const std::optional<std::size_t> capacity = source.capacity();
  EntailmentLabel label;
  bool stopped = false;
  while (label.n_y < config.n_max) {
    if (capacity && label.n_y >= *capacity) {
      if (policy == ShortSourcePolicy::kError) {
        throw LabelingError("test bank holds " + std::to_string(*capacity) +
                            " tests but labeling may need up to n_max=" +
                            std::to_string(config.n_max));
      }
      break;
    }
    TrialResult result = source.Run(label.n_y);
    if (result == TrialResult::kInfraError) result = source.Run(label.n_y);
    if (result == TrialResult::kInfraError) {
      throw LabelingError("repeated infra-error on test " +
                          std::to_string(label.n_y));
    }
    ++label.n_y;
    if (result == TrialResult::kPass) ++label.k_hat;
    if (satisfied(label.k_hat, label.n_y)) {
      stopped = label.n_y < config.n_max;
      break;
    }
  }
  label.lower_bound =
      FunctionalCorrectnessLower(label.k_hat, label.n_y, config.epsilon_e);
  label.entailed = label.lower_bound >= target;
  label.exhausted = !stopped;
  return label;
}

EntailmentLabel LabelSequence(const std::vector<bool>& passes,
                              const EntailmentConfig& config) {
  SequenceTrialSource source(passes);
  return LabelCandidate(source, config, ShortSourcePolicy::kExhaust);
}

std::vector<LabeledPair> LabelAll(std::span<const LabelJob> jobs,
                                  Executor& executor,
                                  const EntailmentConfig& config,
                                  const LabelingOptions& options) {
  config.Validate();
  const StoppingRule rule(config);
  std::vector<LabeledPair> out(jobs.size());
  ParallelFor(
      jobs.size(), options.policy,
      [&](std::size_t i) {
        const LabelJob& job = jobs[i];
        if (job.problem == nullptr) throw InputError("label job without a problem");
        const JudgeMode judge = DefaultJudge(job.problem->entry);
        EntailmentLabel label;
        if (job.bank != nullptr) {
          std::span<const UnitTest> tests(job.bank->tests);
          ShortSourcePolicy policy = ShortSourcePolicy::kError;
          if (options.bank_cap) {
            tests = tests.first(std::min(*options.bank_cap, tests.size()));
            policy = ShortSourcePolicy::kExhaust;
          }
          BankTrialSource source(executor, job.code, job.problem->entry, tests,
                                 options.limits, judge);
          try {
            label = LabelCandidate(source, config, policy, &rule);
          } catch (const LabelingError& e) {
            throw LabelingError(job.problem->id + "/" + job.candidate_id + ": " +
                                e.what());
          }
        } else {
          OnTheFlyTrialSource source(executor, *job.problem, job.code,
                                     options.on_the_fly_seed, options.limits, judge);
          label = LabelCandidate(source, config, ShortSourcePolicy::kError, &rule);
        }
        out[i] = LabeledPair{job.problem->id, job.candidate_id, label};
      },
      options.num_threads);
  return out;
}

bool ExactMatchLabel(std::string_view reference, std::string_view candidate) {
  return TrimmedLines(reference) == TrimmedLines(candidate);
}

}  // namespace scg
