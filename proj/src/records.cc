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
#include "scg/records.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "scg/errors.h"
#include "scg/schema.h"

namespace scg {

namespace {

using Json = nlohmann::json;

template <typename T>
T Field(const Value& record, const char* key) {
  if (!record.is_object() || !record.contains(key)) {
    throw InputError(std::string("record is missing field '") + key + "'");
  }
  const Value& v = record.at(key);
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!v.is_number_unsigned()) {
      throw InputError(std::string("record field '") + key + "' must be a non-negative integer");
    }
  }
  try {
    return v.get<T>();
  } catch (const Json::exception&) {
    throw InputError(std::string("record field '") + key + "' has the wrong type");
  }
}

Value OptionalNumber(const std::optional<double>& v) {
  return v ? Value(*v) : Value(nullptr);
}

std::string CsvCell(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) {
    if (v && std::isinf(*v)) return *v > 0 ? "+inf" : "-inf";
    return "NA";
  }
  std::ostringstream out;
  out.precision(17);
  out << *v;
  return out.str();
}

}  // namespace

std::vector<Value> ReadRecords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<Value> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      records.push_back(Value::parse(line));
    } catch (const Json::parse_error& e) {
      throw InputError(path.string() + ":" + std::to_string(lineno) +
                       ": malformed record: " + e.what());
    }
    if (!records.back().is_object()) {
      throw InputError(path.string() + ":" + std::to_string(lineno) +
                       ": record is not an object");
    }
  }
  return records;
}

std::string RecordLine(const Value& record) {
  // nlohmann objects are std::map backed, so keys come out sorted.
  return record.dump(-1, ' ', false, Json::error_handler_t::strict);
}

void WriteRecords(const std::filesystem::path& path, const std::vector<Value>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  for (const Value& r : records) out << RecordLine(r) << '\n';
  if (!out) throw InputError("write failed for " + path.string());
}

Problem ProblemFromRecord(const Value& record) {
  Problem problem;
  problem.id = Field<std::string>(record, "problem_id");
  try {
    problem.prompt = record.value("prompt", std::string());
    problem.reference = Field<std::string>(record, "reference");
    const Value entry = Field<Value>(record, "entry");
    const std::string kind = Field<std::string>(entry, "kind");
    if (kind == "function") {
      problem.entry.kind = EntryKind::kFunctionCall;
      problem.entry.function_name = Field<std::string>(entry, "name");
    } else if (kind == "stdio") {
      problem.entry.kind = EntryKind::kStdioProgram;
    } else {
      throw InputError("entry kind must be 'function' or 'stdio', got '" + kind + "'");
    }
    problem.entry.language = entry.value("language", std::string("python"));
    problem.entry.Validate();
    problem.schema = ParseSchema(Field<Value>(record, "schema"));
  } catch (const InputError& e) {
    throw InputError("problem " + problem.id + ": " + e.what());
  }
  return problem;
}

Value ProblemToRecord(const Problem& problem) {
  Value entry;
  entry["kind"] = problem.entry.kind == EntryKind::kFunctionCall ? "function" : "stdio";
  if (problem.entry.kind == EntryKind::kFunctionCall) {
    entry["name"] = problem.entry.function_name;
  }
  entry["language"] = problem.entry.language;
  return {{"problem_id", problem.id},
          {"prompt", problem.prompt},
          {"reference", problem.reference},
          {"entry", entry},
          {"schema", SchemaToJson(problem.schema)}};
}

std::vector<Value> BankToRecords(const TestBank& bank) {
  std::vector<Value> rows;
  rows.reserve(bank.tests.size());
  for (std::size_t i = 0; i < bank.tests.size(); ++i) {
    const UnitTest& t = bank.tests[i];
    rows.push_back({{"problem_id", bank.problem_id},
                    {"index", i},
                    {"input", t.input},
                    {"expected_output", t.expected_output},
                    {"seed_round", t.seed_round},
                    {"base_seed", bank.base_seed},
                    {"schema_hash", bank.schema_hash},
                    {"generator_version", bank.generator_version}});
  }
  return rows;
}

std::map<std::string, TestBank> BanksFromRecords(const std::vector<Value>& records) {
  std::map<std::string, TestBank> banks;
  for (const Value& r : records) {
    const auto id = Field<std::string>(r, "problem_id");
    const auto index = Field<std::size_t>(r, "index");
    auto [it, fresh] = banks.try_emplace(id);
    TestBank& bank = it->second;
    if (fresh) {
      bank.problem_id = id;
      bank.base_seed = Field<std::uint64_t>(r, "base_seed");
      bank.schema_hash = Field<std::uint64_t>(r, "schema_hash");
      bank.generator_version = Field<std::string>(r, "generator_version");
    }
    if (index != bank.tests.size()) {
      throw InputError("bank " + id + ": test index " + std::to_string(index) +
                       " out of order");
    }
    UnitTest t;
    t.input = Field<Value>(r, "input");
    t.expected_output = Field<Value>(r, "expected_output");
    t.seed_round = Field<std::uint64_t>(r, "seed_round");
    t.from_reference = true;
    bank.tests.push_back(std::move(t));
  }
  return banks;
}

GenerationRecord GenerationFromRecord(const Value& record) {
  GenerationRecord g;
  g.problem_id = Field<std::string>(record, "problem_id");
  g.candidate_id = Field<std::string>(record, "candidate_id");
  g.code = Field<std::string>(record, "code");
  if (record.contains("token_logprobs")) {
    g.token_logprobs = Field<std::vector<double>>(record, "token_logprobs");
  }
  if (record.contains("external_score") && !record["external_score"].is_null()) {
    g.external_score = Field<double>(record, "external_score");
  }
  return g;
}

Value GenerationToRecord(const GenerationRecord& g) {
  Value r = {{"problem_id", g.problem_id},
             {"candidate_id", g.candidate_id},
             {"code", g.code},
             {"token_logprobs", g.token_logprobs}};
  if (g.external_score) r["external_score"] = *g.external_score;
  return r;
}

Value LabelToRecord(const LabeledPair& pair, const EntailmentConfig& config) {
  const EntailmentLabel& l = pair.label;
  return {{"problem_id", pair.problem_id},
          {"candidate_id", pair.candidate_id},
          {"n_y", l.n_y},
          {"k_hat", l.k_hat},
          {"lower_bound", l.lower_bound},
          {"entailed", l.entailed},
          {"exhausted", l.exhausted},
          {"alpha", config.alpha},
          {"epsilon_e", config.epsilon_e}};
}

LabeledPair LabelFromRecord(const Value& record) {
  LabeledPair pair;
  pair.problem_id = Field<std::string>(record, "problem_id");
  pair.candidate_id = Field<std::string>(record, "candidate_id");
  pair.label.n_y = Field<std::size_t>(record, "n_y");
  pair.label.k_hat = Field<std::size_t>(record, "k_hat");
  pair.label.lower_bound = Field<double>(record, "lower_bound");
  pair.label.entailed = Field<bool>(record, "entailed");
  pair.label.exhausted = Field<bool>(record, "exhausted");
  if (pair.label.k_hat > pair.label.n_y) {
    throw InputError("label " + pair.problem_id + "/" + pair.candidate_id +
                     ": k_hat exceeds n_y");
  }
  return pair;
}

Value ModelToRecord(const SelectiveGeneratorModel& m) {
  Value tau = std::isinf(m.tau) ? Value(m.tau > 0 ? "+inf" : "-inf") : Value(m.tau);
  return {{"tau", tau},
          {"u_hat", OptionalNumber(m.u_hat)},
          {"feasible", m.feasible ? Value(*m.feasible) : Value(nullptr)},
          {"eps_s", m.eps_s},
          {"delta_s", m.delta_s},
          {"alpha", m.alpha},
          {"epsilon_e", m.epsilon_e},
          {"scoring_fn", m.scoring_fn},
          {"method", m.method},
          {"n", m.n}};
}

SelectiveGeneratorModel ModelFromRecord(const Value& r) {
  SelectiveGeneratorModel m;
  const Value tau = Field<Value>(r, "tau");
  if (tau.is_string()) {
    const auto s = tau.get<std::string>();
    if (s == "+inf" || s == "inf") {
      m.tau = kAbstainAll;
    } else if (s == "-inf") {
      m.tau = -kAbstainAll;
    } else {
      throw InputError("model tau must be a number or \"+inf\"");
    }
  } else {
    m.tau = Field<double>(r, "tau");
  }
  if (r.contains("u_hat") && !r["u_hat"].is_null()) m.u_hat = Field<double>(r, "u_hat");
  if (r.contains("feasible") && !r["feasible"].is_null()) {
    m.feasible = Field<bool>(r, "feasible");
  }
  m.eps_s = Field<double>(r, "eps_s");
  m.delta_s = Field<double>(r, "delta_s");
  m.alpha = Field<double>(r, "alpha");
  m.epsilon_e = Field<double>(r, "epsilon_e");
  m.scoring_fn = Field<std::string>(r, "scoring_fn");
  m.method = r.value("method", std::string("scg"));
  m.n = Field<std::size_t>(r, "n");
  return m;
}

Value ReportToRecord(const EvalReport& report) {
  return {{"trial", report.trial},
          {"fdr_ce", OptionalNumber(report.fdr_ce)},
          {"efficiency", report.efficiency},
          {"one_minus_pass1", OptionalNumber(report.one_minus_pass1)},
          {"selected", report.counts.selected},
          {"selected_false", report.counts.selected_false},
          {"total", report.counts.total},
          {"violation", report.violation ? Value(*report.violation) : Value(nullptr)},
          {"model", ModelToRecord(report.model)}};
}

Value SummaryToRecord(const SplitSummary& s) {
  const auto whiskers = [](const std::optional<Whiskers>& w) -> Value {
    if (!w) return nullptr;
    return {{"low", w->low}, {"median", w->median}, {"high", w->high}, {"count", w->count}};
  };
  return {{"fdr_ce", whiskers(s.fdr_ce)},
          {"efficiency", whiskers(s.efficiency)},
          {"mean_fdr_ce", OptionalNumber(s.mean_fdr_ce)},
          {"mean_efficiency", s.mean_efficiency},
          {"violation_rate", s.violation_rate},
          {"undefined_fdr_trials", s.undefined_fdr_trials},
          {"infeasible_trials", s.infeasible_trials}};
}

std::string ReportsToCsv(const std::vector<EvalReport>& reports) {
  std::string csv = "trial,fdr_ce,efficiency,one_minus_pass1,tau,u_hat,feasible\n";
  for (const EvalReport& r : reports) {
    const SelectiveGeneratorModel& m = r.model;
    csv += std::to_string(r.trial) + ',' + CsvCell(r.fdr_ce) + ',' +
           CsvCell(r.efficiency) + ',' + CsvCell(r.one_minus_pass1) + ',' +
           CsvCell(m.tau) + ',' + CsvCell(m.u_hat) + ',' +
           (m.feasible ? (*m.feasible ? "true" : "false") : "NA") + '\n';
  }
  return csv;
}

}  // namespace scg
