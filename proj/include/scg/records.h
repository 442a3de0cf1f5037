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
#ifndef SCG_RECORDS_H_
#define SCG_RECORDS_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scg/calibrate.h"
#include "scg/entailment.h"
#include "scg/evaluate.h"
#include "scg/fuzzgen.h"
#include "scg/scoring.h"
#include "scg/value.h"

namespace scg {

// Line-delimited record files: one JSON object per LF-terminated line. Blank
// lines are skipped on read. Errors carry the path and 1-based line number.
std::vector<Value> ReadRecords(const std::filesystem::path& path);
void WriteRecords(const std::filesystem::path& path, const std::vector<Value>& records);
// Canonical single-line form (sorted keys, no whitespace).
std::string RecordLine(const Value& record);

// Dataset rows: {problem_id, prompt, reference, entry: {kind, name,
// language}, schema}.
Problem ProblemFromRecord(const Value& record);
Value ProblemToRecord(const Problem& problem);

// Bank rows, one per test: {problem_id, index, input, expected_output,
// seed_round, base_seed, schema_hash, generator_version}.
std::vector<Value> BankToRecords(const TestBank& bank);
std::map<std::string, TestBank> BanksFromRecords(const std::vector<Value>& records);

// Generation rows: {problem_id, candidate_id, code, token_logprobs,
// external_score?}.
GenerationRecord GenerationFromRecord(const Value& record);
Value GenerationToRecord(const GenerationRecord& record);

// Label rows: {problem_id, candidate_id, n_y, k_hat, lower_bound, entailed,
// exhausted, alpha, epsilon_e}.
Value LabelToRecord(const LabeledPair& pair, const EntailmentConfig& config);
LabeledPair LabelFromRecord(const Value& record);

// tau is the string "+inf" for the abstain-everything model; u_hat and
// feasible are null when not applicable.
Value ModelToRecord(const SelectiveGeneratorModel& model);
SelectiveGeneratorModel ModelFromRecord(const Value& record);

Value ReportToRecord(const EvalReport& report);
Value SummaryToRecord(const SplitSummary& summary);
// Columns trial,fdr_ce,efficiency,one_minus_pass1,tau,u_hat,feasible; "NA"
// marks undefined cells.
std::string ReportsToCsv(const std::vector<EvalReport>& reports);

}  // namespace scg

#endif  // SCG_RECORDS_H_
