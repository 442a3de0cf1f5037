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
#ifndef SCG_EXECUTOR_H_
#define SCG_EXECUTOR_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scg/value.h"

namespace scg {

struct UnitTest;

enum class EntryKind { kFunctionCall, kStdioProgram };

struct EntryPoint {
  EntryKind kind = EntryKind::kFunctionCall;
  std::string function_name;  // required for kFunctionCall
  std::string language = "python";

  void Validate() const;
};

struct ExecLimits {
  std::chrono::milliseconds wall_timeout{2000};
  std::size_t output_cap = 1 << 20;
  std::size_t memory_hint = std::size_t{256} << 20;  // forwarded, not enforced

  void Validate() const;
};

enum class JudgeMode { kStdioText, kStructural };

// What a worker reported for one request, before any judging.
enum class RunStatus { kCompleted, kRuntimeError, kTimeout, kInfraError };

struct RunResult {
  RunStatus status = RunStatus::kInfraError;
  std::optional<Value> output;  // set iff kCompleted
  std::string message;
  std::chrono::milliseconds duration{0};
};

enum class OutcomeStatus { kPass, kWrongOutput, kRuntimeError, kTimeout, kInfraError };

const char* OutcomeStatusName(OutcomeStatus status);

struct TestOutcome {
  OutcomeStatus status = OutcomeStatus::kInfraError;
  std::optional<Value> actual_output;  // set iff kPass or kWrongOutput
  std::chrono::milliseconds duration{0};
  std::string message;
};

// Runs one snippet on one input. Implementations must be safe to call from
// several threads at once.
class Executor {
 public:
  virtual ~Executor() = default;

  virtual RunResult RunOnce(std::string_view code, const EntryPoint& entry,
                            const Value& input, const ExecLimits& limits) = 0;
};

// Extra wall time a call may take beyond its timeout (kill + reap).
inline constexpr std::chrono::milliseconds kTimeoutGrace{200};

// Spawns the snippet-language worker named by SCG_RUNNER (or the explicit
// path) and speaks the line-delimited runner protocol with it:
//   request: {"code": str, "entry": {"kind", "name", "language"}, "input": v}
//   reply:   {"status": "ok", "output": v} | {"status": "error", "message": s}
// Each worker runs in its own process group and is killed with SIGKILL on a
// timeout. By default every call gets a fresh worker; with reuse_workers an
// idle worker is handed the next request and is discarded after any failure.
class ProcessExecutor : public Executor {
 public:
  struct Options {
    std::string runner_path;  // empty: read SCG_RUNNER
    std::vector<std::string> runner_args;
    std::size_t pool_width = 1;
    bool reuse_workers = false;
  };

  explicit ProcessExecutor(Options options);
  ~ProcessExecutor() override;

  ProcessExecutor(const ProcessExecutor&) = delete;
  ProcessExecutor& operator=(const ProcessExecutor&) = delete;

  RunResult RunOnce(std::string_view code, const EntryPoint& entry,
                    const Value& input, const ExecLimits& limits) override;

  const std::string& runner_path() const { return options_.runner_path; }

  struct Worker;

 private:
  std::unique_ptr<Worker> Acquire(const ExecLimits& limits, std::string* error);
  void Release(std::unique_ptr<Worker> worker);

  Options options_;
  std::counting_semaphore<1024> slots_;
  std::mutex idle_mu_;
  std::vector<std::unique_ptr<Worker>> idle_;
};

// Request line for the runner protocol (no trailing newline).
std::string EncodeRunnerRequest(std::string_view code, const EntryPoint& entry,
                                const Value& input);

// Maps one reply line to a RunResult; malformed replies are kInfraError.
RunResult DecodeRunnerReply(std::string_view line);

// stdio-text: trailing whitespace per line and trailing blank lines ignored.
// structural: recursive equality, floats within 1e-6 * max(1, |a|, |b|).
bool CompareOutputs(const Value& expected, const Value& actual, JudgeMode mode);

// Judges a run against the expected output.
TestOutcome JudgeRun(const RunResult& run, const Value& expected, JudgeMode mode);

struct SuiteResult {
  std::vector<TestOutcome> outcomes;
  std::size_t passes = 0;
};

// Runs the tests in order. An infra-error aborts with InfraError; wrong
// output, runtime errors and timeouts count as failures.
SuiteResult RunSuite(Executor& executor, std::string_view code,
                     const EntryPoint& entry, std::span<const UnitTest> tests,
                     const ExecLimits& limits, JudgeMode mode);

JudgeMode DefaultJudge(const EntryPoint& entry);

}  // namespace scg

#endif  // SCG_EXECUTOR_H_
