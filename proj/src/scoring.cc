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
#include "scg/scoring.h"

#include <algorithm>
#include <numeric>

#include "scg/errors.h"

namespace scg {

namespace {

const std::vector<double>& CheckedLogprobs(const GenerationRecord& record) {
  if (record.token_logprobs.empty()) {
    throw ScoringError("record " + record.problem_id + "/" + record.candidate_id +
                       " has no token log-probabilities");
  }
  for (double lp : record.token_logprobs) {
    if (!(lp <= 0.0)) {
      throw ScoringError("token log-probability must be <= 0 in record " +
                         record.problem_id + "/" + record.candidate_id);
    }
  }
  return record.token_logprobs;
}

}  // namespace

double ScoreNorm(const GenerationRecord& record) {
  const std::vector<double>& lps = CheckedLogprobs(record);
  return ScoreSeq(record) / static_cast<double>(lps.size());
}

double ScoreMin(const GenerationRecord& record) {
  const std::vector<double>& lps = CheckedLogprobs(record);
  return *std::min_element(lps.begin(), lps.end());
}

double ScoreSeq(const GenerationRecord& record) {
  const std::vector<double>& lps = CheckedLogprobs(record);
  return std::accumulate(lps.begin(), lps.end(), 0.0);
}

double ScoreExternal(const GenerationRecord& record) {
  if (!record.external_score) {
    throw ScoringError("record " + record.problem_id + "/" + record.candidate_id +
                       " has no external score");
  }
  return *record.external_score;
}

double Score(const GenerationRecord& record, ScoringFunction fn) {
  switch (fn) {
    case ScoringFunction::kNorm: return ScoreNorm(record);
    case ScoringFunction::kMin: return ScoreMin(record);
    case ScoringFunction::kSeq: return ScoreSeq(record);
    case ScoringFunction::kExternal: return ScoreExternal(record);
  }
  throw ScoringError("unknown scoring function");
}

const char* ScoringFunctionName(ScoringFunction fn) {
  switch (fn) {
    case ScoringFunction::kNorm: return "norm";
    case ScoringFunction::kMin: return "min";
    case ScoringFunction::kSeq: return "seq";
    case ScoringFunction::kExternal: return "external";
  }
  return "?";
}

ScoringFunction ParseScoringFunction(std::string_view name) {
  if (name == "norm") return ScoringFunction::kNorm;
  if (name == "min") return ScoringFunction::kMin;
  if (name == "seq") return ScoringFunction::kSeq;
  if (name == "external") return ScoringFunction::kExternal;
  throw InputError("unknown scoring function \"" + std::string(name) + "\"");
}

}  // namespace scg
