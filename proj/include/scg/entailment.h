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
#ifndef SCG_ENTAILMENT_H_
#define SCG_ENTAILMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scg/executor.h"
#include "scg/fuzzgen.h"
#include "scg/parallel.h"

namespace scg {

struct EntailmentConfig {
  double alpha = 0.35;
  double epsilon_e = 0.05;
  std::size_t n_max = 150;

  void Validate() const;
};

struct EntailmentLabel {
  std::size_t n_y = 0;
  std::size_t k_hat = 0;
  double lower_bound = 0.0;
  bool entailed = false;
  bool exhausted = false;
};

// Clopper-Pearson lower bound on the pass probability; 0 with no evidence.
double FunctionalCorrectnessLower(std::size_t k_hat, std::size_t n_y,
                                  double epsilon_e);

enum class TrialResult { kPass, kFail, kInfraError };

// Supplies judged test executions of one candidate, addressed by index so a
// failed harness call can be retried on the same test.
class TrialSource {
 public:
  virtual ~TrialSource() = default;

  // Number of tests available; nullopt when unbounded.
  virtual std::optional<std::size_t> capacity() const = 0;

  virtual TrialResult Run(std::size_t index) = 0;
};

// Candidate against a banked test list, in bank order.
class BankTrialSource : public TrialSource {
 public:
  BankTrialSource(Executor& executor, std::string candidate, EntryPoint entry,
                  std::span<const UnitTest> tests, ExecLimits limits,
                  JudgeMode judge);

  std::optional<std::size_t> capacity() const override { return tests_.size(); }
  TrialResult Run(std::size_t index) override;

 private:
  Executor& executor_;
  std::string candidate_;
  EntryPoint entry_;
  std::span<const UnitTest> tests_;
  ExecLimits limits_;
  JudgeMode judge_;
};

// Candidate against freshly generated tests: test i comes from seed round i
// of the base seed, executed on the reference first. Rounds whose reference
// run fails are skipped, as during bank construction.
class OnTheFlyTrialSource : public TrialSource {
 public:
  OnTheFlyTrialSource(Executor& executor, const Problem& problem,
                      std::string candidate, Seed base_seed, ExecLimits limits,
                      JudgeMode judge);

  std::optional<std::size_t> capacity() const override { return std::nullopt; }
  TrialResult Run(std::size_t index) override;

 private:
  const UnitTest& TestAt(std::size_t index);

  Executor& executor_;
  const Problem& problem_;
  std::string candidate_;
  Seed base_seed_;
  ExecLimits limits_;
  JudgeMode judge_;
  std::vector<UnitTest> generated_;
  std::uint64_t next_round_ = 0;
};

// Precomputed stopping thresholds: min_passes(n) is the smallest k with
// FunctionalCorrectnessLower(k, n) >= 1 - alpha (n + 1 when none exists).
// Equivalent to evaluating the bound at every step because the bound is
// non-decreasing in k and non-increasing in n. Built in O(n_max) bound
// evaluations; share one across many labels.
class StoppingRule {
 public:
  explicit StoppingRule(const EntailmentConfig& config);

  bool Satisfied(std::size_t k_hat, std::size_t n_y) const {
    return n_y >= 1 && n_y < min_passes_.size() && k_hat >= min_passes_[n_y];
  }
  std::size_t min_passes(std::size_t n_y) const { return min_passes_.at(n_y); }
  const EntailmentConfig& config() const { return config_; }

 private:
  EntailmentConfig config_;
  std::vector<std::size_t> min_passes_;
};

enum class ShortSourcePolicy {
  kError,    // a bounded source smaller than n_max is a LabelingError
  kExhaust,  // stop at the source's end and report an exhausted label
};

// Draws tests one at a time until the lower bound reaches 1 - alpha or n_max
// tests have run. An infra-error is retried once on the same test; a second
// one raises LabelingError. When a rule is given it must match the config.
EntailmentLabel LabelCandidate(TrialSource& source, const EntailmentConfig& config,
                               ShortSourcePolicy policy = ShortSourcePolicy::kError,
                               const StoppingRule* rule = nullptr);

// Labels an outcome sequence directly (pass = true) with the same stopping
// rule; used for replays and by stub sources.
EntailmentLabel LabelSequence(const std::vector<bool>& passes,
                              const EntailmentConfig& config);

// One (problem, candidate) pair to label. bank may be null for on-the-fly
// labeling.
struct LabelJob {
  const Problem* problem = nullptr;
  const TestBank* bank = nullptr;
  std::string candidate_id;
  std::string code;
};

struct LabeledPair {
  std::string problem_id;
  std::string candidate_id;
  EntailmentLabel label;
};

struct LabelingOptions {
  ExecLimits limits;
  // Only the first bank_cap tests of each bank are used; exhaustion of a
  // capped bank yields an exhausted label rather than an error.
  std::optional<std::size_t> bank_cap;
  Seed on_the_fly_seed{0};
  ExecutionPolicy policy = ExecutionPolicy::kSerial;
  std::size_t num_threads = 0;
};

// Labels every job, sharing one stopping rule. Output order follows jobs.
std::vector<LabeledPair> LabelAll(std::span<const LabelJob> jobs,
                                  Executor& executor,
                                  const EntailmentConfig& config,
                                  const LabelingOptions& options);

// Textual identity after trimming each line; the SCG-EM baseline's label.
bool ExactMatchLabel(std::string_view reference, std::string_view candidate);

}  // namespace scg

#endif  // SCG_ENTAILMENT_H_
