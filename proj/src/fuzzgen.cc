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
#include "scg/fuzzgen.h"

#include <algorithm>
#include <unordered_set>

#include "scg/errors.h"

namespace scg {

std::uint64_t RandomStream::Below(std::uint64_t bound) {
  // Lemire-style rejection on the top of the 64-bit range.
  const std::uint64_t limit = max() - max() % bound;
  while (true) {
    const std::uint64_t x = Next();
    if (x < limit) return x % bound;
  }
}

std::int64_t RandomStream::Between(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == max()) return static_cast<std::int64_t>(Next());
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) +
                                   Below(span + 1));
}

namespace {

using Kind = ValueSpec::Kind;

Value DecodeSpec(const ValueSpec& spec, RandomStream& stream) {
  switch (spec.kind) {
    case Kind::kInteger:
      return Value(stream.Between(spec.int_lo, spec.int_hi));
    case Kind::kFloat: {
      const double v =
          spec.float_lo + stream.Uniform() * (spec.float_hi - spec.float_lo);
      return Value(std::clamp(v, spec.float_lo, spec.float_hi));
    }
    case Kind::kString: {
      const std::size_t len = static_cast<std::size_t>(
          stream.Between(static_cast<std::int64_t>(spec.min_len),
                         static_cast<std::int64_t>(spec.max_len)));
      std::string s(len, ' ');
      for (char& c : s) c = spec.alphabet[stream.Below(spec.alphabet.size())];
      return Value(std::move(s));
    }
    case Kind::kBoolean:
      return Value((stream.Next() >> 63) != 0);
    case Kind::kList: {
      const std::size_t len = static_cast<std::size_t>(
          stream.Between(static_cast<std::int64_t>(spec.min_len),
                         static_cast<std::int64_t>(spec.max_len)));
      Value list = Value::array();
      for (std::size_t i = 0; i < len; ++i) {
        list.push_back(DecodeSpec(spec.children[0], stream));
      }
      return list;
    }
    case Kind::kTuple: {
      Value tuple = Value::array();
      for (const ValueSpec& item : spec.children) {
        tuple.push_back(DecodeSpec(item, stream));
      }
      return tuple;
    }
  }
  return Value();
}

}  // namespace

Value DecodeInput(const InputSchema& schema, Seed seed) {
  ValidateSchema(schema);
  RandomStream stream(seed);
  if (schema.kind == InputSchema::Kind::kTypedArguments) {
    Value args = Value::array();
    for (const ValueSpec& param : schema.params) {
      args.push_back(DecodeSpec(param, stream));
    }
    return args;
  }
  std::string text;
  for (const LineTemplate& line : schema.lines) {
    std::string rendered;
    bool first = true;
    for (const ValueSpec& item : line.items) {
      const std::string piece =
          RenderStdioItem(DecodeSpec(item, stream), line.separator);
      if (piece.empty()) continue;  // empty list
      if (!first) rendered += line.separator;
      rendered += piece;
      first = false;
    }
    text += rendered;
    text += '\n';
  }
  return Value(std::move(text));
}

GenerationResult GenerateUnitTest(std::string_view reference,
                                  const EntryPoint& entry,
                                  const InputSchema& schema, Seed seed,
                                  Executor& executor, const ExecLimits& limits) {
  Value input = DecodeInput(schema, seed);
  const RunResult run = executor.RunOnce(reference, entry, input, limits);
  switch (run.status) {
    case RunStatus::kCompleted: {
      UnitTest test;
      test.input = std::move(input);
      test.expected_output = *run.output;
      test.from_reference = true;
      return test;
    }
    case RunStatus::kInfraError:
      throw InfraError("reference execution failed in the harness: " +
                       run.message);
    case RunStatus::kTimeout:
      return GenerationFailure{std::move(input), OutcomeStatus::kTimeout,
                               run.message};
    case RunStatus::kRuntimeError:
      break;
  }
  return GenerationFailure{std::move(input), OutcomeStatus::kRuntimeError,
                           run.message};
}

TestBank BuildTestBank(const Problem& problem, std::size_t count,
                       Seed base_seed, Executor& executor,
                       const ExecLimits& limits) {
  if (count < 1) throw InputError("test bank count must be >= 1");
  ValidateSchema(problem.schema);
  problem.entry.Validate();

  TestBank bank;
  bank.problem_id = problem.id;
  bank.base_seed = base_seed.value;
  bank.schema_hash = SchemaHash(problem.schema);

  std::unordered_set<std::string> seen;
  const std::size_t budget = kRoundsPerTest * count;
  for (std::size_t round = 0; round < budget && bank.tests.size() < count;
       ++round) {
    const Seed seed = MutateSeed(base_seed, round);
    // Dedup before executing; the decode is cheap and deterministic.
    const std::string key = EncodeValue(DecodeInput(problem.schema, seed));
    if (seen.contains(key)) continue;
    GenerationResult result = GenerateUnitTest(
        problem.reference, problem.entry, problem.schema, seed, executor, limits);
    seen.insert(key);
    if (auto* test = std::get_if<UnitTest>(&result)) {
      test->seed_round = round;
      bank.tests.push_back(std::move(*test));
    }
  }
  if (bank.tests.size() < count) {
    const std::string what = "problem " + problem.id + ": banked " +
                             std::to_string(bank.tests.size()) + " of " +
                             std::to_string(count) + " tests within " +
                             std::to_string(budget) + " rounds";
    throw PartialBankError(what, std::move(bank));
  }
  return bank;
}

}  // namespace scg
