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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <utility>

#include "scg/errors.h"
#include "scg/fuzzgen.h"

extern char** environ;

namespace scg {

namespace {

using Clock = std::chrono::steady_clock;

// Reply envelope allowance on top of the output cap.
constexpr std::size_t kEnvelopeSlack = 4096;

std::chrono::milliseconds Since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start);
}

int RemainingMs(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - Clock::now());
  return left.count() < 0 ? 0 : static_cast<int>(left.count());
}

std::string TrimRight(std::string_view s) {
  std::size_t end = s.size();
  while (end > 0 && (s[end - 1] == ' ' || s[end - 1] == '\t' ||
                     s[end - 1] == '\r' || s[end - 1] == '\v' ||
                     s[end - 1] == '\f')) {
    --end;
  }
  return std::string(s.substr(0, end));
}

std::vector<std::string> NormalizeStdio(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(TrimRight(text.substr(start)));
      break;
    }
    lines.push_back(TrimRight(text.substr(start, end - start)));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

bool StructuralEqual(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (a.is_number_integer() && b.is_number_integer()) {
      if (a.is_number_unsigned() != b.is_number_unsigned()) {
        // One side exceeds int64 or is negative.
        if (a.is_number_unsigned() && a.get<std::uint64_t>() > INT64_MAX) return false;
        if (b.is_number_unsigned() && b.get<std::uint64_t>() > INT64_MAX) return false;
        return a.get<std::int64_t>() == b.get<std::int64_t>();
      }
      return a == b;
    }
    const double x = a.get<double>();
    const double y = b.get<double>();
    const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
    return std::fabs(x - y) <= 1e-6 * scale;
  }
  if (a.type() != b.type()) return false;
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!StructuralEqual(a[i], b[i])) return false;
    }
    return true;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto it = a.begin(); it != a.end(); ++it) {
      auto other = b.find(it.key());
      if (other == b.end() || !StructuralEqual(it.value(), *other)) return false;
    }
    return true;
  }
  return a == b;
}

void IgnoreSigpipeOnce() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

struct ProcessExecutor::Worker {
  pid_t pid = -1;
  int to_worker = -1;
  int from_worker = -1;
  std::string pending;  // bytes read past the last reply

  ~Worker() { Kill(); }

  void CloseInput() {
    if (to_worker >= 0) ::close(to_worker);
    to_worker = -1;
  }

  void Kill() {
    CloseInput();
    if (from_worker >= 0) ::close(from_worker);
    from_worker = -1;
    if (pid > 0) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      int status = 0;
      while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
      }
      pid = -1;
    }
  }

  // Waits for the process to exit on its own until the deadline, then kills.
  // Returns the wait status, or -1 when it had to be killed.
  int Reap(Clock::time_point deadline) {
    int status = 0;
    while (true) {
      const pid_t r = ::waitpid(pid, &status, WNOHANG);
      if (r == pid) {
        ::kill(-pid, SIGKILL);
        pid = -1;
        return status;
      }
      if (r < 0 && errno != EINTR) {
        pid = -1;
        return -1;
      }
      if (Clock::now() >= deadline) {
        Kill();
        return -1;
      }
      ::usleep(1000);
    }
  }
};

void EntryPoint::Validate() const {
  if (kind == EntryKind::kFunctionCall && function_name.empty()) {
    throw InputError("function-call entry point needs a function name");
  }
  if (language.empty()) throw InputError("entry point needs a language tag");
}

void ExecLimits::Validate() const {
  if (wall_timeout.count() < 1) throw InputError("wall_timeout must be >= 1 ms");
  if (output_cap < 1) throw InputError("output_cap must be >= 1 byte");
}

const char* OutcomeStatusName(OutcomeStatus status) {
  switch (status) {
    case OutcomeStatus::kPass: return "pass";
    case OutcomeStatus::kWrongOutput: return "wrong-output";
    case OutcomeStatus::kRuntimeError: return "runtime-error";
    case OutcomeStatus::kTimeout: return "timeout";
    case OutcomeStatus::kInfraError: return "infra-error";
  }
  return "?";
}

std::string EncodeRunnerRequest(std::string_view code, const EntryPoint& entry,
                                const Value& input) {
  Value request;
  request["code"] = std::string(code);
  request["entry"] = {
      {"kind", entry.kind == EntryKind::kFunctionCall ? "function" : "stdio"},
      {"name", entry.function_name},
      {"language", entry.language}};
  request["input"] = input;
  return EncodeValue(request);
}

RunResult DecodeRunnerReply(std::string_view line) {
  RunResult result;
  Value reply;
  try {
    reply = Value::parse(line.begin(), line.end());
  } catch (const nlohmann::json::parse_error&) {
    result.status = RunStatus::kInfraError;
    result.message = "malformed runner reply";
    return result;
  }
  if (!reply.is_object() || !reply.contains("status") ||
      !reply["status"].is_string()) {
    result.status = RunStatus::kInfraError;
    result.message = "runner reply without status";
    return result;
  }
  const std::string status = reply["status"].get<std::string>();
  if (status == "ok" && reply.contains("output")) {
    result.status = RunStatus::kCompleted;
    result.output = reply["output"];
  } else if (status == "error") {
    result.status = RunStatus::kRuntimeError;
    if (reply.contains("message") && reply["message"].is_string()) {
      result.message = reply["message"].get<std::string>();
    }
  } else {
    result.status = RunStatus::kInfraError;
    result.message = "unrecognized runner reply status \"" + status + "\"";
  }
  return result;
}

bool CompareOutputs(const Value& expected, const Value& actual, JudgeMode mode) {
  if (mode == JudgeMode::kStdioText) {
    if (!expected.is_string() || !actual.is_string()) return false;
    return NormalizeStdio(expected.get_ref<const std::string&>()) ==
           NormalizeStdio(actual.get_ref<const std::string&>());
  }
  return StructuralEqual(expected, actual);
}

TestOutcome JudgeRun(const RunResult& run, const Value& expected, JudgeMode mode) {
  TestOutcome outcome;
  outcome.duration = run.duration;
  outcome.message = run.message;
  switch (run.status) {
    case RunStatus::kCompleted:
      outcome.actual_output = run.output;
      outcome.status = CompareOutputs(expected, *run.output, mode)
                           ? OutcomeStatus::kPass
                           : OutcomeStatus::kWrongOutput;
      break;
    case RunStatus::kRuntimeError:
      outcome.status = OutcomeStatus::kRuntimeError;
      break;
    case RunStatus::kTimeout:
      outcome.status = OutcomeStatus::kTimeout;
      break;
    case RunStatus::kInfraError:
      outcome.status = OutcomeStatus::kInfraError;
      break;
  }
  return outcome;
}

SuiteResult RunSuite(Executor& executor, std::string_view code,
                     const EntryPoint& entry, std::span<const UnitTest> tests,
                     const ExecLimits& limits, JudgeMode mode) {
  if (tests.empty()) throw InputError("run_suite needs at least one test");
  SuiteResult result;
  result.outcomes.reserve(tests.size());
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const RunResult run = executor.RunOnce(code, entry, tests[i].input, limits);
    TestOutcome outcome = JudgeRun(run, tests[i].expected_output, mode);
    if (outcome.status == OutcomeStatus::kInfraError) {
      throw InfraError("infra-error on test " + std::to_string(i) + ": " +
                       outcome.message);
    }
    if (outcome.status == OutcomeStatus::kPass) ++result.passes;
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

JudgeMode DefaultJudge(const EntryPoint& entry) {
  return entry.kind == EntryKind::kStdioProgram ? JudgeMode::kStdioText
                                                : JudgeMode::kStructural;
}

ProcessExecutor::ProcessExecutor(Options options)
    : options_(std::move(options)),
      slots_(static_cast<std::ptrdiff_t>(
          std::clamp<std::size_t>(options_.pool_width, 1, 1024))) {
  if (options_.runner_path.empty()) {
    const char* env = std::getenv("SCG_RUNNER");
    if (env != nullptr) options_.runner_path = env;
  }
  IgnoreSigpipeOnce();
}

ProcessExecutor::~ProcessExecutor() = default;

std::unique_ptr<ProcessExecutor::Worker> ProcessExecutor::Acquire(
    const ExecLimits& limits, std::string* error) {
  if (options_.reuse_workers) {
    std::lock_guard<std::mutex> lock(idle_mu_);
    if (!idle_.empty()) {
      std::unique_ptr<Worker> worker = std::move(idle_.back());
      idle_.pop_back();
      return worker;
    }
  }
  if (options_.runner_path.empty()) {
    *error = "no runner configured (set SCG_RUNNER)";
    return nullptr;
  }

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    *error = std::string("pipe: ") + std::strerror(errno);
    return nullptr;
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    *error = std::string("pipe: ") + std::strerror(errno);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    return nullptr;
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null",
                                   O_WRONLY, 0);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGMASK |
                                      POSIX_SPAWN_SETSIGDEF);
  posix_spawnattr_setpgroup(&attr, 0);
  sigset_t empty_mask;
  sigemptyset(&empty_mask);
  posix_spawnattr_setsigmask(&attr, &empty_mask);
  sigset_t default_signals;
  sigemptyset(&default_signals);
  sigaddset(&default_signals, SIGPIPE);
  posix_spawnattr_setsigdefault(&attr, &default_signals);

  std::vector<std::string> env_storage;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    if (std::strncmp(*e, "SCG_OUTPUT_CAP=", 15) == 0 ||
        std::strncmp(*e, "SCG_MEMORY_HINT=", 16) == 0) {
      continue;
    }
    env_storage.emplace_back(*e);
  }
  env_storage.push_back("SCG_OUTPUT_CAP=" + std::to_string(limits.output_cap));
  env_storage.push_back("SCG_MEMORY_HINT=" + std::to_string(limits.memory_hint));
  std::vector<char*> envp;
  for (std::string& s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);

  std::vector<std::string> arg_storage;
  arg_storage.push_back(options_.runner_path);
  for (const std::string& a : options_.runner_args) arg_storage.push_back(a);
  std::vector<char*> argv;
  for (std::string& s : arg_storage) argv.push_back(s.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, options_.runner_path.c_str(), &actions,
                               &attr, argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    *error = "cannot start runner " + options_.runner_path + ": " +
             std::strerror(rc);
    return nullptr;
  }
  auto worker = std::make_unique<Worker>();
  worker->pid = pid;
  worker->to_worker = in_pipe[1];
  worker->from_worker = out_pipe[0];
  ::fcntl(worker->to_worker, F_SETFL, O_NONBLOCK);
  ::fcntl(worker->from_worker, F_SETFL, O_NONBLOCK);
  return worker;
}

void ProcessExecutor::Release(std::unique_ptr<Worker> worker) {
  std::lock_guard<std::mutex> lock(idle_mu_);
  if (idle_.size() < options_.pool_width) {
    idle_.push_back(std::move(worker));
  }
}

RunResult ProcessExecutor::RunOnce(std::string_view code, const EntryPoint& entry,
                                   const Value& input, const ExecLimits& limits) {
  limits.Validate();
  slots_.acquire();
  struct SlotGuard {
    std::counting_semaphore<1024>& s;
    ~SlotGuard() { s.release(); }
  } guard{slots_};

  const Clock::time_point start = Clock::now();
  const Clock::time_point deadline = start + limits.wall_timeout;
  RunResult result;

  std::string error;
  std::unique_ptr<Worker> worker = Acquire(limits, &error);
  if (!worker) {
    result.status = RunStatus::kInfraError;
    result.message = error;
    result.duration = Since(start);
    return result;
  }

  const std::string request = EncodeRunnerRequest(code, entry, input) + "\n";
  std::size_t written = 0;
  while (written < request.size()) {
    pollfd pfd{worker->to_worker, POLLOUT, 0};
    const int ready = ::poll(&pfd, 1, RemainingMs(deadline));
    if (ready == 0) {
      worker->Kill();
      result.status = RunStatus::kTimeout;
      result.message = "timed out while sending the request";
      result.duration = Since(start);
      return result;
    }
    if (ready < 0 && errno == EINTR) continue;
    const ssize_t n = ::write(worker->to_worker, request.data() + written,
                              request.size() - written);
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      worker->Kill();
      result.status = RunStatus::kInfraError;
      result.message = std::string("runner closed its input: ") + std::strerror(errno);
      result.duration = Since(start);
      return result;
    }
    written += static_cast<std::size_t>(n);
  }
  if (!options_.reuse_workers) worker->CloseInput();

  std::string& buffer = worker->pending;
  const std::size_t reply_cap = limits.output_cap + kEnvelopeSlack;
  std::size_t newline = buffer.find('\n');
  char chunk[65536];
  while (newline == std::string::npos) {
    pollfd pfd{worker->from_worker, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, RemainingMs(deadline));
    if (ready == 0) {
      worker->Kill();
      result.status = RunStatus::kTimeout;
      result.message = "wall timeout of " +
                       std::to_string(limits.wall_timeout.count()) + " ms";
      result.duration = Since(start);
      return result;
    }
    if (ready < 0) {
      if (errno == EINTR) continue;
      worker->Kill();
      result.status = RunStatus::kInfraError;
      result.message = std::string("poll: ") + std::strerror(errno);
      result.duration = Since(start);
      return result;
    }
    const ssize_t n = ::read(worker->from_worker, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      worker->Kill();
      result.status = RunStatus::kInfraError;
      result.message = std::string("read: ") + std::strerror(errno);
      result.duration = Since(start);
      return result;
    }
    if (n == 0) {
      // The worker went away without answering.
      const int status = worker->Reap(deadline);
      if (status >= 0 && WIFSIGNALED(status)) {
        result.status = RunStatus::kRuntimeError;
        result.message = "worker terminated by signal " +
                         std::to_string(WTERMSIG(status));
      } else {
        result.status = RunStatus::kInfraError;
        result.message = "runner exited without a reply";
        if (status >= 0 && WIFEXITED(status)) {
          result.message += " (exit code " + std::to_string(WEXITSTATUS(status)) + ")";
        }
      }
      result.duration = Since(start);
      return result;
    }
    const std::size_t scanned = buffer.size();
    buffer.append(chunk, static_cast<std::size_t>(n));
    newline = buffer.find('\n', scanned);
    if (newline == std::string::npos && buffer.size() > reply_cap) {
      worker->Kill();
      result.status = RunStatus::kRuntimeError;
      result.message = "output exceeds the cap of " +
                       std::to_string(limits.output_cap) + " bytes";
      result.duration = Since(start);
      return result;
    }
  }

  const std::string line = buffer.substr(0, newline);
  buffer.erase(0, newline + 1);
  result = DecodeRunnerReply(line);
  result.duration = Since(start);
  if (result.status == RunStatus::kCompleted && line.size() > reply_cap) {
    result.status = RunStatus::kRuntimeError;
    result.output.reset();
    result.message = "output exceeds the cap of " +
                     std::to_string(limits.output_cap) + " bytes";
  }

  if (options_.reuse_workers && result.status != RunStatus::kInfraError &&
      buffer.empty()) {
    Release(std::move(worker));
  } else if (options_.reuse_workers || result.status == RunStatus::kInfraError) {
    worker->Kill();
  } else {
    worker->Reap(Clock::now() + kTimeoutGrace / 2);
  }
  return result;
}

}  // namespace scg
