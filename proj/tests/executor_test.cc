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
#include "scg/executor.h"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <thread>

#include "scg/errors.h"
#include "scg/fuzzgen.h"
#include "test_support.h"

namespace scg {
namespace {

using Clock = std::chrono::steady_clock;

EntryPoint Fn(const std::string& name) {
  EntryPoint e;
  e.function_name = name;
  return e;
}

EntryPoint Stdio() {
  EntryPoint e;
  e.kind = EntryKind::kStdioProgram;
  return e;
}

ProcessExecutor::Options RunnerOptions(bool reuse = false, std::size_t width = 1) {
  ProcessExecutor::Options o;
  o.runner_path = testing::FakeRunner();
  o.reuse_workers = reuse;
  o.pool_width = width;
  return o;
}

const char* kIdentity = "def f(x):\n    return x\n";

TEST(CompareOutputs, DocumentedCases) {
  EXPECT_TRUE(CompareOutputs("3\n", "3 \n\n", JudgeMode::kStdioText));
  EXPECT_TRUE(CompareOutputs(Value::parse("[1.0000000]"), Value::parse("[1.0000005]"),
                             JudgeMode::kStructural));
  EXPECT_FALSE(CompareOutputs(Value::parse("[1,2]"), Value::parse("[2,1]"),
                              JudgeMode::kStructural));
}

TEST(CompareOutputs, StdioKeepsLeadingAndInteriorSpace) {
  EXPECT_FALSE(CompareOutputs(" 3\n", "3\n", JudgeMode::kStdioText));
  EXPECT_FALSE(CompareOutputs("1 2\n", "1  2\n", JudgeMode::kStdioText));
  EXPECT_TRUE(CompareOutputs("a\r\nb", "a\nb\n\n\n", JudgeMode::kStdioText));
  EXPECT_FALSE(CompareOutputs("a\n\nb", "a\nb", JudgeMode::kStdioText));
}

TEST(CompareOutputs, StructuralTypes) {
  const auto eq = [](const char* a, const char* b) {
    return CompareOutputs(Value::parse(a), Value::parse(b), JudgeMode::kStructural);
  };
  EXPECT_TRUE(eq("1000000.0", "1000000.9"));  // relative slack
  EXPECT_FALSE(eq("0.0", "0.00001"));
  EXPECT_TRUE(eq("2", "2.0000001"));
  EXPECT_FALSE(eq("2", "3"));
  EXPECT_FALSE(eq("true", "1"));
  EXPECT_FALSE(eq("\"1\"", "1"));
  EXPECT_FALSE(eq("[1,[2,3]]", "[1,[2]]"));
  EXPECT_TRUE(eq("[1,[2,3]]", "[1,[2,3]]"));
  EXPECT_TRUE(eq("-3", "-3"));
  EXPECT_FALSE(eq("18446744073709551615", "-1"));
}

TEST(RunnerProtocol, RequestShape) {
  const Value r = Value::parse(EncodeRunnerRequest("code", Fn("g"), Value::array({1})));
  EXPECT_EQ(r["code"], "code");
  EXPECT_EQ(r["entry"]["kind"], "function");
  EXPECT_EQ(r["entry"]["name"], "g");
  EXPECT_EQ(r["entry"]["language"], "python");
  EXPECT_EQ(r["input"], Value::array({1}));
  EXPECT_EQ(Value::parse(EncodeRunnerRequest("c", Stdio(), "x\n"))["entry"]["kind"], "stdio");
}

TEST(RunnerProtocol, ReplyDecoding) {
  EXPECT_EQ(DecodeRunnerReply(R"({"status":"ok","output":[1,2]})").status, RunStatus::kCompleted);
  EXPECT_EQ(*DecodeRunnerReply(R"({"status":"ok","output":null})").output, Value(nullptr));
  const RunResult err = DecodeRunnerReply(R"({"status":"error","message":"boom"})");
  EXPECT_EQ(err.status, RunStatus::kRuntimeError);
  EXPECT_EQ(err.message, "boom");
  EXPECT_EQ(DecodeRunnerReply("not json").status, RunStatus::kInfraError);
  EXPECT_EQ(DecodeRunnerReply(R"({"output":1})").status, RunStatus::kInfraError);
  EXPECT_EQ(DecodeRunnerReply(R"({"status":"ok"})").status, RunStatus::kInfraError);
  EXPECT_EQ(DecodeRunnerReply(R"({"status":"maybe"})").status, RunStatus::kInfraError);
  EXPECT_EQ(DecodeRunnerReply("[1]").status, RunStatus::kInfraError);
}

TEST(JudgeRun, OutputPresentOnlyForJudgedRuns) {
  const TestOutcome pass = JudgeRun(testing::Completed(5), 5, JudgeMode::kStructural);
  EXPECT_EQ(pass.status, OutcomeStatus::kPass);
  ASSERT_TRUE(pass.actual_output.has_value());
  const TestOutcome wrong = JudgeRun(testing::Completed(4), 5, JudgeMode::kStructural);
  EXPECT_EQ(wrong.status, OutcomeStatus::kWrongOutput);
  EXPECT_TRUE(wrong.actual_output.has_value());
  for (RunStatus s : {RunStatus::kRuntimeError, RunStatus::kTimeout, RunStatus::kInfraError}) {
    EXPECT_FALSE(JudgeRun(testing::Failed(s), 5, JudgeMode::kStructural).actual_output);
  }
}

TEST(ExecLimits, Validation) {
  ExecLimits l;
  l.wall_timeout = std::chrono::milliseconds(0);
  EXPECT_THROW(l.Validate(), InputError);
  l.wall_timeout = std::chrono::milliseconds(1);
  l.output_cap = 0;
  EXPECT_THROW(l.Validate(), InputError);
  EXPECT_THROW(Fn("").Validate(), InputError);
}

class ProcessExecutorTest : public ::testing::TestWithParam<bool> {
 protected:
  ProcessExecutor exec_{RunnerOptions(GetParam())};
  ExecLimits limits_;
};

TEST_P(ProcessExecutorTest, Identity) {
  const RunResult r = exec_.RunOnce(kIdentity, Fn("f"), Value::array({5}), limits_);
  ASSERT_EQ(r.status, RunStatus::kCompleted) << r.message;
  EXPECT_EQ(*r.output, 5);
}

TEST_P(ProcessExecutorTest, RaisingSnippet) {
  const RunResult r = exec_.RunOnce("def f(x):\n    raise ValueError('no')\n", Fn("f"),
                                    Value::array({5}), limits_);
  EXPECT_EQ(r.status, RunStatus::kRuntimeError);
  EXPECT_NE(r.message.find("ValueError"), std::string::npos);
}

TEST_P(ProcessExecutorTest, MissingEntryIsRuntimeError) {
  const RunResult r = exec_.RunOnce(kIdentity, Fn("g"), Value::array({5}), limits_);
  EXPECT_EQ(r.status, RunStatus::kRuntimeError);
}

TEST_P(ProcessExecutorTest, StdioProgramEchoesFirstLine) {
  const RunResult r = exec_.RunOnce("print(input())\n", Stdio(), "first\nsecond\n", limits_);
  ASSERT_EQ(r.status, RunStatus::kCompleted) << r.message;
  EXPECT_EQ(*r.output, "first\n");
}

TEST_P(ProcessExecutorTest, TimeoutIsEnforced) {
  ExecLimits l;
  l.wall_timeout = std::chrono::milliseconds(500);
  const auto start = Clock::now();
  const RunResult r = exec_.RunOnce("def f(x):\n    while True:\n        pass\n", Fn("f"),
                                    Value::array({1}), l);
  const auto elapsed = Clock::now() - start;
  EXPECT_EQ(r.status, RunStatus::kTimeout);
  EXPECT_LE(elapsed, l.wall_timeout + kTimeoutGrace);
  // The pool recovers.
  EXPECT_EQ(exec_.RunOnce(kIdentity, Fn("f"), Value::array({2}), limits_).status,
            RunStatus::kCompleted);
}

TEST_P(ProcessExecutorTest, CrashIsRuntimeErrorAndIsolated) {
  const RunResult r = exec_.RunOnce(
      "import os, signal\n\ndef f(x):\n    os.kill(os.getpid(), signal.SIGKILL)\n", Fn("f"),
      Value::array({1}), limits_);
  EXPECT_EQ(r.status, RunStatus::kRuntimeError) << r.message;
  const RunResult next = exec_.RunOnce(kIdentity, Fn("f"), Value::array({3}), limits_);
  ASSERT_EQ(next.status, RunStatus::kCompleted);
  EXPECT_EQ(*next.output, 3);
}

TEST_P(ProcessExecutorTest, OversizedOutputIsRuntimeError) {
  ExecLimits l;
  l.output_cap = 1000;
  const RunResult r = exec_.RunOnce("def f(x):\n    return 'x' * 100000\n", Fn("f"),
                                    Value::array({1}), l);
  EXPECT_EQ(r.status, RunStatus::kRuntimeError);
}

TEST_P(ProcessExecutorTest, NamespaceIsFreshPerRequest) {
  const char* code =
      "try:\n    COUNT\nexcept NameError:\n    COUNT = 0\n\n"
      "def f(x):\n    global COUNT\n    COUNT += 1\n    return COUNT\n";
  for (int i = 0; i < 3; ++i) {
    const RunResult r = exec_.RunOnce(code, Fn("f"), Value::array({0}), limits_);
    ASSERT_EQ(r.status, RunStatus::kCompleted);
    EXPECT_EQ(*r.output, 1);
  }
}

TEST_P(ProcessExecutorTest, SuiteCounts) {
  std::vector<UnitTest> tests;
  for (int i = 0; i < 10; ++i) {
    UnitTest t;
    t.input = Value::array({i});
    t.expected_output = i % 2 == 0 ? i : -1;  // only even inputs match identity
    tests.push_back(t);
  }
  const SuiteResult even = RunSuite(exec_, kIdentity, Fn("f"), tests, limits_,
                                    JudgeMode::kStructural);
  EXPECT_EQ(even.passes, 5u);
  for (std::size_t i = 0; i < tests.size(); ++i) {
    EXPECT_EQ(even.outcomes[i].status,
              i % 2 == 0 ? OutcomeStatus::kPass : OutcomeStatus::kWrongOutput);
  }
  const SuiteResult raising = RunSuite(exec_, "def f(x):\n    raise KeyError(x)\n", Fn("f"),
                                       tests, limits_, JudgeMode::kStructural);
  EXPECT_EQ(raising.passes, 0u);
  // Determinism.
  EXPECT_EQ(RunSuite(exec_, kIdentity, Fn("f"), tests, limits_, JudgeMode::kStructural).passes,
            even.passes);
}

TEST_P(ProcessExecutorTest, ConcurrentCalls) {
  ProcessExecutor exec(RunnerOptions(GetParam(), 4));
  std::vector<std::thread> threads;
  std::vector<int> got(16, -1);
  for (int i = 0; i < 16; ++i) {
    threads.emplace_back([&, i] {
      const RunResult r = exec.RunOnce(kIdentity, Fn("f"), Value::array({i}), limits_);
      if (r.status == RunStatus::kCompleted) got[i] = r.output->get<int>();
    });
  }
  for (std::thread& t : threads) t.join();
  for (int i = 0; i < 16; ++i) EXPECT_EQ(got[i], i);
}

INSTANTIATE_TEST_SUITE_P(FreshAndReused, ProcessExecutorTest, ::testing::Bool(),
                         [](const auto& info) { return info.param ? "Reused" : "Fresh"; });

RunResult RunWith(const std::string& runner) {
  ProcessExecutor::Options o;
  o.runner_path = runner;
  ProcessExecutor exec(o);
  return exec.RunOnce(kIdentity, Fn("f"), Value::array({1}), ExecLimits{});
}

TEST(ProcessExecutorFailures, MissingRunnerIsInfraError) {
  EXPECT_EQ(RunWith("/nonexistent/runner").status, RunStatus::kInfraError);
}

TEST(ProcessExecutorFailures, MalformedReplyIsInfraError) {
  EXPECT_EQ(RunWith((testing::FixtureDir() / "garbage_runner.sh").string()).status,
            RunStatus::kInfraError);
}

TEST(ProcessExecutorFailures, SilentExitIsInfraError) {
  EXPECT_EQ(RunWith((testing::FixtureDir() / "silent_runner.sh").string()).status,
            RunStatus::kInfraError);
}

TEST(ProcessExecutorFailures, InfraErrorAbortsSuite) {
  ProcessExecutor::Options o;
  o.runner_path = "/nonexistent/runner";
  ProcessExecutor exec(o);
  std::vector<UnitTest> tests(3);
  for (UnitTest& t : tests) t.input = Value::array({1});
  EXPECT_THROW(RunSuite(exec, kIdentity, Fn("f"), tests, ExecLimits{}, JudgeMode::kStructural),
               InfraError);
}

TEST(ProcessExecutorEnvironment, LimitsArePassedToTheRunner) {
  ProcessExecutor::Options o;
  o.runner_path = (testing::FixtureDir() / "env_runner.sh").string();
  ProcessExecutor exec(o);
  ExecLimits l;
  l.output_cap = 4321;
  l.memory_hint = 8765;
  const RunResult r = exec.RunOnce("", Fn("f"), Value::array({}), l);
  ASSERT_EQ(r.status, RunStatus::kCompleted) << r.message;
  EXPECT_EQ(*r.output, Value::parse(R"(["4321","8765"])"));
}

TEST(ProcessExecutorEnvironment, RunnerFromEnvironment) {
  ::setenv("SCG_RUNNER", testing::FakeRunner().c_str(), 1);
  ProcessExecutor exec(ProcessExecutor::Options{});
  EXPECT_EQ(exec.runner_path(), testing::FakeRunner());
  EXPECT_EQ(exec.RunOnce(kIdentity, Fn("f"), Value::array({1}), ExecLimits{}).status,
            RunStatus::kCompleted);
  ::unsetenv("SCG_RUNNER");
  ProcessExecutor none(ProcessExecutor::Options{});
  EXPECT_EQ(none.RunOnce(kIdentity, Fn("f"), Value::array({1}), ExecLimits{}).status,
            RunStatus::kInfraError);
}

}  // namespace
}  // namespace scg
