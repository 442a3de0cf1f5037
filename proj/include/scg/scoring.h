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
#ifndef SCG_SCORING_H_
#define SCG_SCORING_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scg {

struct GenerationRecord {
  std::string problem_id;
  std::string candidate_id;
  std::string code;
  std::vector<double> token_logprobs;  // each <= 0
  std::optional<double> external_score;
};

enum class ScoringFunction { kNorm, kMin, kSeq, kExternal };

// Mean token log-probability (the default score).
double ScoreNorm(const GenerationRecord& record);
// Lowest token log-probability.
double ScoreMin(const GenerationRecord& record);
// Log-probability of the whole sequence.
double ScoreSeq(const GenerationRecord& record);
// Externally supplied score, e.g. a verbalized confidence.
double ScoreExternal(const GenerationRecord& record);

double Score(const GenerationRecord& record, ScoringFunction fn);

const char* ScoringFunctionName(ScoringFunction fn);
// Accepts norm, min, seq, external; throws InputError otherwise.
ScoringFunction ParseScoringFunction(std::string_view name);

}  // namespace scg

#endif  // SCG_SCORING_H_
