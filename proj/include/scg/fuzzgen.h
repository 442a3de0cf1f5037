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
#ifndef SCG_FUZZGEN_H_
#define SCG_FUZZGEN_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "scg/executor.h"
#include "scg/schema.h"
#include "scg/value.h"

namespace scg {

inline constexpr const char* kGeneratorVersion = "scg-fuzzgen/1";

struct Seed {
  std::uint64_t value = 0;

  friend bool operator==(Seed, Seed) = default;
};

// Bijective 64-bit finalizer (splitmix64).
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Injective in round for a fixed seed: seed + (round + 1) * odd constant is
// injective modulo 2^64 and Mix64 is a bijection.
constexpr Seed MutateSeed(Seed seed, std::uint64_t round) {
  return Seed{Mix64(seed.value + (round + 1) * 0x9e3779b97f4a7c15ULL)};
}

// Counter-based stream: word i is Mix64(seed + (i + 1) * gamma). Satisfies
// UniformRandomBitGenerator so it can drive <random> distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(Seed seed) : seed_(seed.value) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return Next(); }

  std::uint64_t Next() {
    ++counter_;
    return Mix64(seed_ + counter_ * 0xd1b54a32d192ed03ULL);
  }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound) without modulo bias; bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);

  // Uniform in [lo, hi].
  std::int64_t Between(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Decodes the seed's stream into a value satisfying the schema. Throws
// InputError for a schema that fails validation.
Value DecodeInput(const InputSchema& schema, Seed seed);

struct UnitTest {
  Value input;
  Value expected_output;
  std::uint64_t seed_round = 0;
  bool from_reference = false;  // expected_output came from the reference
};

struct TestBank {
  std::string problem_id;
  std::vector<UnitTest> tests;
  std::uint64_t base_seed = 0;
  std::uint64_t schema_hash = 0;
  std::string generator_version = kGeneratorVersion;
};

// A coding task: prompt, reference solution, entry point and input schema.
struct Problem {
  std::string id;
  std::string prompt;
  std::string reference;
  EntryPoint entry;
  InputSchema schema;
};

struct GenerationFailure {
  Value input;  // kept for diagnostics
  OutcomeStatus status = OutcomeStatus::kRuntimeError;
  std::string reason;
};

using GenerationResult = std::variant<UnitTest, GenerationFailure>;

// Decodes an input from the seed and runs the reference on it.
GenerationResult GenerateUnitTest(std::string_view reference,
                                  const EntryPoint& entry,
                                  const InputSchema& schema, Seed seed,
                                  Executor& executor, const ExecLimits& limits);

// Round budget per requested test.
inline constexpr std::size_t kRoundsPerTest = 50;

class PartialBankError : public std::runtime_error {
 public:
  PartialBankError(const std::string& what, TestBank partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const TestBank& partial() const { return partial_; }

 private:
  TestBank partial_;
};

// Rounds r = 0, 1, ... use MutateSeed(base_seed, r); failures and duplicate
// inputs are skipped. Throws PartialBankError when 50 * count rounds run out
// first, and InfraError when the harness itself fails.
TestBank BuildTestBank(const Problem& problem, std::size_t count,
                       Seed base_seed, Executor& executor,
                       const ExecLimits& limits);

}  // namespace scg

#endif  // SCG_FUZZGEN_H_
