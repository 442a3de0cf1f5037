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
#include "scg/cli.h"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "scg/calibrate.h"
#include "scg/entailment.h"
#include "scg/errors.h"
#include "scg/evaluate.h"
#include "scg/executor.h"
#include "scg/fuzzgen.h"
#include "scg/records.h"
#include "scg/scoring.h"
#include "scg/sim.h"

namespace scg {

namespace {

struct ExecFlags {
  std::size_t workers = 1;
  long timeout_ms = 2000;
  bool reuse_workers = false;
  std::string runner;

  void Attach(CLI::App* cmd) {
    cmd->add_option("--workers", workers, "Worker processes / threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--timeout-ms", timeout_ms, "Wall-clock limit per test run")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--reuse-workers", reuse_workers,
                  "Keep runner processes alive between requests");
    cmd->add_option("--runner", runner, "Runner executable (default: $SCG_RUNNER)");
  }

  ExecLimits limits() const {
    ExecLimits l;
    l.wall_timeout = std::chrono::milliseconds(timeout_ms);
    return l;
  }

  ProcessExecutor::Options options() const {
    ProcessExecutor::Options o;
    o.runner_path = runner;
    o.pool_width = workers;
    o.reuse_workers = reuse_workers;
    return o;
  }
};

// Seed of one problem's bank: independent of dataset order.
Seed ProblemSeed(std::uint64_t seed, const std::string& problem_id) {
  return Seed{Mix64(seed ^ Fnv1a64(problem_id))};
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

std::map<std::string, Problem> LoadDataset(const std::string& path,
                                           std::vector<std::string>* order,
                                           std::vector<std::string>* errors) {
  std::map<std::string, Problem> problems;
  std::size_t row = 0;
  for (const Value& r : ReadRecords(path)) {
    ++row;
    try {
      Problem p = ProblemFromRecord(r);
      if (problems.count(p.id)) throw InputError("problem " + p.id + ": duplicate id");
      if (order) order->push_back(p.id);
      problems.emplace(p.id, std::move(p));
    } catch (const InputError& e) {
      if (!errors) throw;
      errors->push_back(path + " record " + std::to_string(row) + ": " + e.what());
    }
  }
  return problems;
}

std::vector<GenerationRecord> LoadGenerations(const std::string& path) {
  std::vector<GenerationRecord> gens;
  std::set<std::pair<std::string, std::string>> seen;
  for (const Value& r : ReadRecords(path)) {
    GenerationRecord g = GenerationFromRecord(r);
    if (!seen.insert({g.problem_id, g.candidate_id}).second) {
      throw InputError("duplicate generation " + g.problem_id + "/" + g.candidate_id);
    }
    gens.push_back(std::move(g));
  }
  return gens;
}

struct LabelFile {
  std::map<std::pair<std::string, std::string>, EntailmentLabel> labels;
  std::optional<double> alpha;
  std::optional<double> epsilon_e;
};

LabelFile LoadLabels(const std::string& path) {
  LabelFile file;
  for (const Value& r : ReadRecords(path)) {
    LabeledPair pair = LabelFromRecord(r);
    const double alpha = r.value("alpha", std::nan(""));
    const double eps = r.value("epsilon_e", std::nan(""));
    if (!file.alpha) {
      file.alpha = alpha;
      file.epsilon_e = eps;
    } else if (!(alpha == *file.alpha && eps == *file.epsilon_e)) {
      throw InputError(path + ": labels mix different (alpha, epsilon_e) settings");
    }
    if (!file.labels.emplace(std::make_pair(pair.problem_id, pair.candidate_id),
                             pair.label)
             .second) {
      throw InputError(path + ": duplicate label " + pair.problem_id + "/" +
                       pair.candidate_id);
    }
  }
  return file;
}

const EntailmentLabel& LookupLabel(const LabelFile& file, const GenerationRecord& g,
                                   const std::string& what) {
  const auto it = file.labels.find({g.problem_id, g.candidate_id});
  if (it == file.labels.end()) {
    throw InputError(what + " has no label for " + g.problem_id + "/" + g.candidate_id);
  }
  return it->second;
}

// ---------------------------------------------------------------- fuzz

struct FuzzArgs {
  std::string dataset;
  std::string out;
  std::size_t count = 150;
  std::uint64_t seed = 0;
  bool allow_partial = false;
  ExecFlags exec;
};

int CmdFuzz(const FuzzArgs& a) {
  std::vector<std::string> order;
  std::vector<std::string> errors;
  const auto problems = LoadDataset(a.dataset, &order, &errors);
  if (!errors.empty()) {
    for (const std::string& e : errors) std::cerr << "error: " << e << "\n";
    return kExitInput;
  }
  ProcessExecutor executor(a.exec.options());
  const ExecLimits limits = a.exec.limits();
  std::vector<TestBank> banks(order.size());
  std::vector<std::string> shortfalls(order.size());
  ParallelFor(
      order.size(), ExecutionPolicy::kParallel,
      [&](std::size_t i) {
        const Problem& p = problems.at(order[i]);
        try {
          banks[i] = BuildTestBank(p, a.count, ProblemSeed(a.seed, p.id), executor, limits);
        } catch (const PartialBankError& e) {
          banks[i] = e.partial();
          shortfalls[i] = e.what();
        }
      },
      a.exec.workers);
  bool partial = false;
  for (const std::string& s : shortfalls) {
    if (s.empty()) continue;
    partial = true;
    std::cerr << (a.allow_partial ? "warning: " : "error: ") << s << "\n";
  }
  if (partial && !a.allow_partial) return kExitExecution;
  std::vector<Value> rows;
  for (const TestBank& bank : banks) {
    for (Value& r : BankToRecords(bank)) rows.push_back(std::move(r));
  }
  WriteRecords(a.out, rows);
  std::cerr << "wrote " << banks.size() << " banks (" << rows.size() << " tests) to "
            << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- label

struct LabelArgs {
  std::string dataset;
  std::string banks;
  std::string generations;
  std::string out;
  double alpha = 0.35;
  double eps_e = 0.05;
  std::optional<double> eps_e_test;
  std::size_t n_max = 150;
  std::optional<std::size_t> bank_cap;
  std::uint64_t seed = 0;
  ExecFlags exec;
};

int CmdLabel(const LabelArgs& a) {
  const auto problems = LoadDataset(a.dataset, nullptr, nullptr);
  std::map<std::string, TestBank> banks;
  if (!a.banks.empty()) banks = BanksFromRecords(ReadRecords(a.banks));
  const std::vector<GenerationRecord> gens = LoadGenerations(a.generations);

  EntailmentConfig cfg{a.alpha, a.eps_e_test.value_or(a.eps_e), a.n_max};
  cfg.Validate();

  std::vector<LabelJob> jobs;
  for (const GenerationRecord& g : gens) {
    const auto p = problems.find(g.problem_id);
    if (p == problems.end()) throw InputError("generation for unknown problem " + g.problem_id);
    LabelJob job{&p->second, nullptr, g.candidate_id, g.code};
    if (!a.banks.empty()) {
      const auto b = banks.find(g.problem_id);
      if (b == banks.end()) throw InputError("no test bank for problem " + g.problem_id);
      if (b->second.schema_hash != SchemaHash(p->second.schema)) {
        throw InputError("test bank for " + g.problem_id + " was built from a different schema");
      }
      job.bank = &b->second;
    }
    jobs.push_back(std::move(job));
  }

  ProcessExecutor executor(a.exec.options());
  LabelingOptions options;
  options.limits = a.exec.limits();
  options.bank_cap = a.bank_cap;
  options.on_the_fly_seed = Seed{a.seed};
  options.policy = ExecutionPolicy::kParallel;
  options.num_threads = a.exec.workers;
  const std::vector<LabeledPair> labels = LabelAll(jobs, executor, cfg, options);

  std::vector<Value> rows;
  std::size_t entailed = 0;
  for (const LabeledPair& l : labels) {
    rows.push_back(LabelToRecord(l, cfg));
    entailed += l.label.entailed;
  }
  WriteRecords(a.out, rows);
  std::cerr << "labeled " << labels.size() << " candidates, " << entailed
            << " entailed, to " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::string labels;
  std::string generations;
  std::string out;
  std::string trace;
  std::string scoring = "norm";
  double eps_s = 0.3;
  double delta_s = 0.1;
  std::optional<double> eps_e;
};

std::vector<CalibrationRecord> JoinForCalibration(const std::vector<GenerationRecord>& gens,
                                                  const LabelFile& labels,
                                                  ScoringFunction fn) {
  std::vector<CalibrationRecord> records;
  for (const GenerationRecord& g : gens) {
    records.push_back({g.problem_id, g.candidate_id, Score(g, fn), LookupLabel(labels, g, "calibration set")});
  }
  if (records.size() != labels.labels.size()) {
    throw InputError("label file has entries without a matching generation");
  }
  return records;
}

int CmdCalibrate(const CalibrateArgs& a) {
  const ScoringFunction fn = ParseScoringFunction(a.scoring);
  const LabelFile labels = LoadLabels(a.labels);
  if (labels.labels.empty()) throw CalibrationError("calibration set is empty");
  double eps_e = *labels.epsilon_e;
  if (a.eps_e && *a.eps_e != eps_e) {
    throw InputError("--eps-e disagrees with the epsilon_e the labels were made at");
  }
  const std::vector<CalibrationRecord> records =
      JoinForCalibration(LoadGenerations(a.generations), labels, fn);
  LearnResult result = LearnScgWithTrace(records, a.eps_s, a.delta_s, eps_e);
  result.model.alpha = *labels.alpha;
  result.model.scoring_fn = ScoringFunctionName(fn);
  WriteRecords(a.out, {ModelToRecord(result.model)});
  if (!a.trace.empty()) {
    std::vector<Value> rows;
    for (const BisectionStep& s : result.steps) {
      rows.push_back({{"index", s.index},
                      {"tau", s.tau},
                      {"u_hat", s.bound.u_hat},
                      {"u_binom", s.bound.u_binom},
                      {"selected", s.bound.selected},
                      {"false_discoveries", s.bound.false_discoveries},
                      {"kept", s.kept}});
    }
    WriteRecords(a.trace, rows);
  }
  std::cout << RecordLine(ModelToRecord(result.model)) << "\n";
  if (!result.model.feasible.value_or(false)) {
    std::cerr << "calibration infeasible: no threshold met eps_s=" << a.eps_s << "\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string eval_labels;
  std::string labels;
  std::string generations;
  std::string model;
  std::string out;
  std::string scoring = "norm";
  std::string baseline;
  std::string dataset;
  std::string banks;
  double eps_s = 0.3;
  double delta_s = 0.1;
  double eps_e_test = 0.01;
  double top_fraction = 0.5;
  std::size_t bank_cap = kSmallBankCap;
  std::optional<std::size_t> trials;
  double ratio = 0.8;
  std::uint64_t seed = 0;
  ExecFlags exec;
};

int CmdEvaluate(const EvaluateArgs& a) {
  const ScoringFunction fn = ParseScoringFunction(a.scoring);
  const std::vector<GenerationRecord> gens = LoadGenerations(a.generations);
  const LabelFile eval = LoadLabels(a.eval_labels);
  if (eval.epsilon_e && std::fabs(*eval.epsilon_e - a.eps_e_test) > 1e-12) {
    throw InputError("evaluation labels were made at epsilon_e=" +
                     std::to_string(*eval.epsilon_e) + ", expected --eps-e-test=" +
                     std::to_string(a.eps_e_test));
  }
  const bool learn = a.model.empty() || a.trials.has_value();
  if (learn && a.labels.empty()) {
    throw InputError("learning a threshold needs --labels (calibration labels)");
  }
  if (!learn && !a.baseline.empty()) {
    throw InputError("--baseline selects a learner; it cannot be combined with --model alone");
  }

  LabelFile cal;
  if (!a.labels.empty()) cal = LoadLabels(a.labels);
  const double eps_e = cal.epsilon_e.value_or(0.05);
  const double alpha = cal.alpha.value_or(eval.alpha.value_or(0.35));

  std::vector<BundleEntry> bundle;
  for (const GenerationRecord& g : gens) {
    BundleEntry e{g.problem_id, g.candidate_id, Score(g, fn), {},
                  LookupLabel(eval, g, "evaluation set")};
    if (!a.labels.empty()) e.calibration_label = LookupLabel(cal, g, "calibration set");
    bundle.push_back(std::move(e));
  }

  // Baselines that replace the calibration labels.
  if (a.baseline == "em" || a.baseline == "small") {
    if (a.dataset.empty()) throw InputError("--baseline " + a.baseline + " needs --dataset");
    const auto problems = LoadDataset(a.dataset, nullptr, nullptr);
    const auto problem_of = [&](const std::string& id) -> const Problem& {
      const auto it = problems.find(id);
      if (it == problems.end()) throw InputError("generation for unknown problem " + id);
      return it->second;
    };
    if (a.baseline == "em") {
      for (std::size_t i = 0; i < bundle.size(); ++i) {
        bundle[i].calibration_label = ExactMatchAsLabel(
            ExactMatchLabel(problem_of(gens[i].problem_id).reference, gens[i].code));
      }
    } else {
      if (a.banks.empty()) throw InputError("--baseline small needs --banks");
      const auto banks = BanksFromRecords(ReadRecords(a.banks));
      std::vector<LabelJob> jobs;
      for (const GenerationRecord& g : gens) {
        const auto b = banks.find(g.problem_id);
        if (b == banks.end()) throw InputError("no test bank for problem " + g.problem_id);
        jobs.push_back({&problem_of(g.problem_id), &b->second, g.candidate_id, g.code});
      }
      ProcessExecutor executor(a.exec.options());
      LabelingOptions options;
      options.limits = a.exec.limits();
      options.bank_cap = a.bank_cap;
      options.policy = ExecutionPolicy::kParallel;
      options.num_threads = a.exec.workers;
      const EntailmentConfig cfg{alpha, eps_e, 150};
      const auto labels = LabelAll(jobs, executor, cfg, options);
      for (std::size_t i = 0; i < bundle.size(); ++i) {
        bundle[i].calibration_label = labels[i].label;
      }
    }
  } else if (!a.baseline.empty() && a.baseline != "manual" && a.baseline != "h") {
    throw InputError("unknown baseline '" + a.baseline + "' (em, manual, small, h)");
  }

  const std::string scoring_name = ScoringFunctionName(fn);
  const Learner learner = [&](std::span<const CalibrationRecord> records) {
    SelectiveGeneratorModel m;
    if (a.baseline == "manual") {
      m = BaselineScgManual(records, a.top_fraction);
    } else if (a.baseline == "h") {
      m = BaselineScgH(records, a.eps_s, a.delta_s);
    } else {
      m = LearnScg(records, a.eps_s, a.delta_s, eps_e);
      if (!a.baseline.empty()) m.method = "scg-" + a.baseline;
    }
    m.eps_s = a.eps_s;
    m.delta_s = a.delta_s;
    m.alpha = alpha;
    if (a.baseline != "h") m.epsilon_e = a.baseline == "manual" ? 0.0 : eps_e;
    m.scoring_fn = scoring_name;
    return m;
  };

  std::vector<EvalReport> reports;
  std::optional<SplitSummary> summary;
  if (a.trials) {
    SplitConfig split;
    split.trials = *a.trials;
    split.ratio = a.ratio;
    split.split_seed = Seed{a.seed};
    split.delta_s = a.delta_s;
    split.policy = ExecutionPolicy::kParallel;
    SplitRun run = RunRandomSplits(bundle, learner, split);
    reports = std::move(run.trials);
    summary = run.summary;
  } else {
    SelectiveGeneratorModel model;
    if (!a.model.empty()) {
      const std::vector<Value> rows = ReadRecords(a.model);
      if (rows.size() != 1) throw InputError(a.model + ": expected exactly one model record");
      model = ModelFromRecord(rows.front());
    } else {
      model = learner(CalibrationRecords(bundle));
    }
    reports.push_back(EvaluateModel(model, bundle));
    summary = Summarize(reports, a.delta_s);
  }

  std::vector<Value> rows;
  for (const EvalReport& r : reports) rows.push_back(ReportToRecord(r));
  Value summary_record = SummaryToRecord(*summary);
  summary_record["trials"] = reports.size();
  summary_record["method"] = reports.empty() ? "" : reports.front().model.method;
  summary_record["eps_e_test"] = a.eps_e_test;
  if (!a.out.empty()) {
    WriteRecords(a.out + ".jsonl", rows);
    WriteText(a.out + ".csv", ReportsToCsv(reports));
    WriteRecords(a.out + ".summary.json", {summary_record});
  }
  std::cout << RecordLine(summary_record) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string world;
  std::string preset = "default";
  std::string out;
  std::size_t draws = 500;
  std::size_t lemma_trials = 20000;
  std::vector<double> lemma_quantiles = {0.25, 0.5, 0.75};
  std::vector<std::size_t> trend_n_max;
  double eps_e_test = 0.01;
  std::size_t trend_size = 20000;
  std::optional<double> alpha, eps_e, eps_s, delta_s;
  std::optional<std::size_t> n_max;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  bool serial = false;
};

Value OptionalJson(const std::optional<double>& v) { return v ? Value(*v) : Value(nullptr); }

int CmdSimulate(const SimulateArgs& a) {
  SyntheticWorldConfig cfg;
  if (!a.world.empty()) {
    std::ifstream in(a.world);
    if (!in) throw InputError("cannot open " + a.world);
    Value json;
    try {
      json = Value::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(a.world + ": " + e.what());
    }
    cfg = ParseWorldConfig(json);
  } else if (a.preset == "default") {
    cfg = DefaultMixedWorld();
  } else if (a.preset == "uninformative") {
    cfg = UninformativeWorld();
  } else if (a.preset == "beta") {
    cfg = BetaWorld();
  } else {
    throw InputError("unknown preset '" + a.preset + "' (default, uninformative, beta)");
  }
  if (a.alpha) cfg.alpha = *a.alpha;
  if (a.eps_e) cfg.epsilon_e = *a.eps_e;
  if (a.eps_s) cfg.eps_s = *a.eps_s;
  if (a.delta_s) cfg.delta_s = *a.delta_s;
  if (a.n_max) cfg.n_max = *a.n_max;
  if (a.seed) cfg.seed = Seed{*a.seed};
  cfg.Validate();
  if (a.draws < 500) throw InputError("--draws must be >= 500");
  if (a.workers > 0) omp_set_num_threads(static_cast<int>(a.workers));
  const ExecutionPolicy policy = a.serial ? ExecutionPolicy::kSerial : ExecutionPolicy::kParallel;

  const ControllabilityResult ctrl = CheckControllability(cfg, a.draws, policy);
  bool ok = ctrl.passes;

  Value lemma = Value::array();
  if (a.lemma_trials > 0) {
    for (double q : a.lemma_quantiles) {
      const double tau = ScoreQuantile(cfg, q);
      const Lemma2Result r = CheckLemma2(cfg, tau, a.lemma_trials, policy);
      ok = ok && r.holds;
      lemma.push_back({{"quantile", q},
                       {"tau", tau},
                       {"lhs", r.lhs},
                       {"rhs", r.rhs},
                       {"standard_error", r.standard_error},
                       {"selected", r.selected},
                       {"degenerate", r.degenerate},
                       {"holds", r.holds}});
    }
  }

  Value trend = nullptr;
  if (!a.trend_n_max.empty()) {
    const double tau = ScoreQuantile(cfg, 0.5);
    const EvaluationTrend t = FuzzEvalTrend(cfg, tau, a.trend_n_max, a.eps_e_test,
                                            a.trend_size, MutateSeed(cfg.seed, 0x7472656e64),
                                            policy);
    trend = {{"tau", tau}, {"true_fdr", OptionalJson(t.true_fdr)}, {"selected", t.selected}};
    trend["points"] = Value::array();
    for (const TrendPoint& p : t.points) {
      trend["points"].push_back({{"eval_n_max", p.eval_n_max},
                                 {"fdr_ce", OptionalJson(p.fdr_ce)},
                                 {"standard_error", p.standard_error}});
    }
  }

  // Per-draw reports, with FDR-CE and efficiency at their analytic values.
  std::vector<EvalReport> reports;
  for (std::size_t d = 0; d < ctrl.models.size(); ++d) {
    EvalReport r;
    r.trial = d;
    r.model = ctrl.models[d];
    if (r.model.feasible.value_or(false)) {
      r.fdr_ce = TrueFdr(cfg, r.model.tau);
      r.efficiency = SelectionProbability(cfg, r.model.tau);
    }
    r.counts.total = cfg.n;
    if (r.fdr_ce && r.model.u_hat) r.violation = *r.fdr_ce > *r.model.u_hat;
    reports.push_back(std::move(r));
  }

  Value report = {{"world", WorldConfigToJson(cfg)},
                  {"draws", ctrl.draws},
                  {"violations", ctrl.violations},
                  {"violation_rate", ctrl.violation_rate},
                  {"standard_error", ctrl.standard_error},
                  {"tolerance", cfg.delta_s + 3.0 * ctrl.standard_error},
                  {"infeasible", ctrl.infeasible},
                  {"mean_u_hat", ctrl.mean_u_hat},
                  {"mean_efficiency", ctrl.mean_efficiency},
                  {"controllability_passes", ctrl.passes},
                  {"lemma2", lemma},
                  {"trend", trend},
                  {"certified", ok}};
  if (!a.out.empty()) {
    std::vector<Value> rows;
    for (const EvalReport& r : reports) rows.push_back(ReportToRecord(r));
    WriteRecords(a.out + ".jsonl", rows);
    WriteText(a.out + ".csv", ReportsToCsv(reports));
    WriteRecords(a.out + ".summary.json", {report});
  }
  std::cout << RecordLine(report) << "\n";
  return ok ? kExitOk : kExitCertification;
}

void AttachEntailment(CLI::App* cmd, double& alpha, double& eps_e, std::size_t& n_max) {
  cmd->add_option("--alpha", alpha, "Entailment tolerance")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--eps-e", eps_e, "Entailment confidence budget")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--n-max", n_max, "Per-candidate test budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int RunCli(const std::vector<std::string>& args) {
  CLI::App app{"Selective code generation: fuzz, label, calibrate, evaluate, simulate"};
  app.require_subcommand(1);

  FuzzArgs fuzz;
  CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "Build unit-test banks from reference solutions");
  fuzz_cmd->add_option("--dataset", fuzz.dataset, "Dataset record file")->required();
  fuzz_cmd->add_option("--out", fuzz.out, "Bank record file to write")->required();
  fuzz_cmd->add_option("--count", fuzz.count, "Tests per problem")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fuzz_cmd->add_option("--seed", fuzz.seed, "Base seed")->capture_default_str();
  fuzz_cmd->add_flag("--allow-partial", fuzz.allow_partial,
                     "Write short banks instead of failing");
  fuzz.exec.Attach(fuzz_cmd);

  LabelArgs label;
  CLI::App* label_cmd = app.add_subcommand("label", "Label candidates by code entailment");
  label_cmd->add_option("--dataset", label.dataset, "Dataset record file")->required();
  label_cmd->add_option("--banks", label.banks, "Bank record file (omit to fuzz on the fly)");
  label_cmd->add_option("--generations", label.generations, "Generation record file")
      ->required();
  label_cmd->add_option("--out", label.out, "Label record file to write")->required();
  AttachEntailment(label_cmd, label.alpha, label.eps_e, label.n_max);
  label_cmd->add_option("--eps-e-test", label.eps_e_test,
                        "Label for evaluation at this budget (overrides --eps-e)")
      ->check(CLI::Range(0.0, 1.0));
  label_cmd->add_option("--bank-cap", label.bank_cap,
                        "Use only the first N tests; running out is an exhausted label")
      ->check(CLI::PositiveNumber);
  label_cmd->add_option("--seed", label.seed, "Seed for on-the-fly tests")->capture_default_str();
  label.exec.Attach(label_cmd);

  CalibrateArgs cal;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "Learn the abstention threshold");
  cal_cmd->add_option("--labels", cal.labels, "Calibration label file")->required();
  cal_cmd->add_option("--generations", cal.generations, "Generation record file")->required();
  cal_cmd->add_option("--out", cal.out, "Model file to write")->required();
  cal_cmd->add_option("--trace", cal.trace, "Write the bisection steps here");
  cal_cmd->add_option("--scoring", cal.scoring, "norm, min, seq or external")
      ->check(CLI::IsMember({"norm", "min", "seq", "external"}))
      ->capture_default_str();
  cal_cmd->add_option("--eps-s", cal.eps_s, "Target FDR-CE")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cal_cmd->add_option("--delta-s", cal.delta_s, "Calibration failure probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cal_cmd->add_option("--eps-e", cal.eps_e, "Must match the labels' epsilon_e");

  EvaluateArgs ev;
  CLI::App* ev_cmd = app.add_subcommand("evaluate", "Measure FDR-CE, efficiency and pass@1");
  ev_cmd->add_option("--eval-labels", ev.eval_labels, "Evaluation label file")->required();
  ev_cmd->add_option("--generations", ev.generations, "Generation record file")->required();
  ev_cmd->add_option("--labels", ev.labels, "Calibration label file");
  ev_cmd->add_option("--model", ev.model, "Model file to evaluate");
  ev_cmd->add_option("--out", ev.out, "Report prefix (.jsonl, .csv, .summary.json)");
  ev_cmd->add_option("--scoring", ev.scoring, "norm, min, seq or external")
      ->check(CLI::IsMember({"norm", "min", "seq", "external"}))
      ->capture_default_str();
  ev_cmd->add_option("--baseline", ev.baseline, "em, manual, small or h")
      ->check(CLI::IsMember({"em", "manual", "small", "h"}));
  ev_cmd->add_option("--dataset", ev.dataset, "Dataset (for em and small)");
  ev_cmd->add_option("--banks", ev.banks, "Banks (for small)");
  ev_cmd->add_option("--bank-cap", ev.bank_cap, "Bank size for small")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ev_cmd->add_option("--top-fraction", ev.top_fraction, "Share kept by manual")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ev_cmd->add_option("--eps-s", ev.eps_s, "Target FDR-CE")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ev_cmd->add_option("--delta-s", ev.delta_s, "Calibration failure probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ev_cmd->add_option("--eps-e-test", ev.eps_e_test, "Budget the evaluation labels used")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ev_cmd->add_option("--trials", ev.trials, "Random calibration/test splits")
      ->check(CLI::PositiveNumber);
  ev_cmd->add_option("--ratio", ev.ratio, "Calibration share of problems")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ev_cmd->add_option("--seed", ev.seed, "Split seed")->capture_default_str();
  ev.exec.Attach(ev_cmd);

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo certification on a synthetic world");
  sim_cmd->add_option("--world", sim.world, "World config (JSON)");
  sim_cmd->add_option("--preset", sim.preset, "default, uninformative or beta")
      ->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Report prefix (.jsonl, .csv, .summary.json)");
  sim_cmd->add_option("--draws", sim.draws, "Calibration draws")->capture_default_str();
  sim_cmd->add_option("--lemma-trials", sim.lemma_trials, "Fresh draws per label-error decomposition check (0 skips)")
      ->capture_default_str();
  sim_cmd->add_option("--lemma-quantiles", sim.lemma_quantiles, "Score quantiles at which that check is run")
      ->delimiter(',');
  sim_cmd->add_option("--trend", sim.trend_n_max, "Evaluation budgets for the FDR-CE trend")
      ->delimiter(',');
  sim_cmd->add_option("--trend-size", sim.trend_size, "Fresh problems for the trend")
      ->capture_default_str();
  sim_cmd->add_option("--eps-e-test", sim.eps_e_test, "Evaluation label budget")
      ->capture_default_str();
  sim_cmd->add_option("--alpha", sim.alpha, "Override alpha");
  sim_cmd->add_option("--eps-e", sim.eps_e, "Override epsilon_e");
  sim_cmd->add_option("--eps-s", sim.eps_s, "Override eps_s");
  sim_cmd->add_option("--delta-s", sim.delta_s, "Override delta_s");
  sim_cmd->add_option("--n-max", sim.n_max, "Override n_max");
  sim_cmd->add_option("--seed", sim.seed, "Override the master seed");
  sim_cmd->add_option("--workers", sim.workers, "OpenMP threads (0: all)");
  sim_cmd->add_flag("--serial", sim.serial, "Run the serial reference kernels");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*fuzz_cmd) return CmdFuzz(fuzz);
    if (*label_cmd) return CmdLabel(label);
    if (*cal_cmd) return CmdCalibrate(cal);
    if (*ev_cmd) return CmdEvaluate(ev);
    if (*sim_cmd) return CmdSimulate(sim);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ScoringError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const CalibrationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InfraError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExecution;
  } catch (const LabelingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExecution;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExecution;
  }
  return kExitInput;
}

}  // namespace scg
