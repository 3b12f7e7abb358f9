// contestlab: run schedules, check linearizability conditions over bounded
// execution trees, classify valency, and re-verify counterexample files.
//
// Exit codes: 0 success / holds-at-bound, 1 verify rejected the file,
// 2 configuration error, 3 node cap exceeded, 10 violation found.

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "contestlab/algorithms.hpp"
#include "contestlab/checkers.hpp"
#include "contestlab/trace_io.hpp"
#include "contestlab/tree.hpp"
#include "contestlab/valency.hpp"

namespace {

using namespace contestlab;
using trace_io::Json;

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCap = 3;
constexpr int kExitViolation = 10;
constexpr std::size_t kWitnessSample = 16;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string algo;
  int n = 3;
  int depth = 16;
  int max_competes = 1;
  std::string condition = "lin";
  std::string schedule;
  std::size_t node_cap = tree::kDefaultNodeCap;
  std::string out;
  std::string dot;
  int seed_universe = 0;  // 0: total competes + 1
  std::string referee_trigger;
  std::string competitors;
  std::string config;
  std::string input;  // verify
};

void AddCommon(CLI::App* app, Options& o) {
  app->add_option("--algo", o.algo, "catalog algorithm");
  app->add_option("--n", o.n, "number of processes, referee included");
  app->add_option("--max-competes", o.max_competes, "competes per competitor");
  app->add_option("--referee-trigger", o.referee_trigger,
                  "immediately | after-any-compete | after-process:<pid> | never");
  app->add_option("--competitors", o.competitors,
                  "comma-separated competitors that take part (default: all)");
  app->add_option("--seed-universe", o.seed_universe,
                  "largest decide value the long-lived contest checker tries");
  app->add_option("--out", o.out, "output file (default: stdout)");
  app->add_option("--config", o.config, "JSON file with the same keys; flags win");
}

void AddTreeOptions(CLI::App* app, Options& o) {
  app->add_option("--depth", o.depth, "maximum events per execution");
  app->add_option("--node-cap", o.node_cap, "maximum tree nodes");
}

// Fills options the command line left unset from the JSON config file.
void MergeConfig(CLI::App* app, Options& o) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw ConfigError("cannot read config file " + o.config);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config file is not JSON: ") + e.what());
  }
  auto take = [&](const char* flag, const char* key, auto& field) {
    if (!j.contains(key)) return;
    const auto* opt = app->get_option_no_throw(flag);
    if (opt && opt->count() > 0) return;
    try {
      j.at(key).get_to(field);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad value for ") + key + " in config file");
    }
  };
  take("--algo", "algo", o.algo);
  take("--n", "n", o.n);
  take("--depth", "depth", o.depth);
  take("--max-competes", "max_competes", o.max_competes);
  take("--condition", "condition", o.condition);
  take("--schedule", "schedule", o.schedule);
  take("--node-cap", "node_cap", o.node_cap);
  take("--out", "out", o.out);
  take("--dot", "dot", o.dot);
  take("--seed-universe", "seed_universe", o.seed_universe);
  take("--referee-trigger", "referee_trigger", o.referee_trigger);
  take("--competitors", "competitors", o.competitors);
}

std::vector<std::string> SplitCommas(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (s.back() == ',') out.push_back("");
  return out;
}

int ParsePid(const std::string& raw, int n, const char* what) {
  std::string tok = raw;
  tok.erase(0, tok.find_first_not_of(" \t"));
  tok.erase(tok.find_last_not_of(" \t") + 1);
  std::size_t used = 0;
  int pid = -1;
  try {
    pid = std::stoi(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (tok.empty() || used != tok.size()) {
    throw ConfigError(std::string("malformed ") + what + " token '" + raw + "'");
  }
  if (pid < 0 || pid >= n) {
    throw ConfigError(std::string(what) + " names process " + tok + ", outside [0, " +
                      std::to_string(n) + ")");
  }
  return pid;
}

machine::AlgorithmDef LoadAlgorithm(const Options& o) {
  if (o.algo.empty()) throw ConfigError("--algo is required");
  try {
    return algorithms::Lookup(o.algo, o.n);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
}

machine::Workload BuildWorkload(const Options& o, const machine::AlgorithmDef& algo,
                                machine::Trigger default_trigger) {
  machine::Trigger trigger = default_trigger;
  if (!o.referee_trigger.empty()) {
    try {
      trigger = trace_io::ParseTrigger(o.referee_trigger);
    } catch (const ContractViolation& e) {
      throw ConfigError(e.what());
    }
  }
  if (o.max_competes < 0) throw ConfigError("--max-competes must be >= 0");
  const bool long_lived = algorithms::IsLongLived(algo.name);
  if (!long_lived && o.max_competes > 1) {
    throw ConfigError(algo.name + " is one-shot: each competitor competes at most once");
  }
  machine::Workload w = machine::Workload::LongLived(algo.n, o.max_competes, trigger);
  if (!o.competitors.empty()) {
    std::vector<bool> keep(algo.n, false);
    for (const auto& tok : SplitCommas(o.competitors)) {
      const int q = ParsePid(tok, algo.n, "competitor");
      if (q == machine::kReferee) throw ConfigError("the referee is not a competitor");
      keep[q] = true;
    }
    for (int q = 1; q < algo.n; ++q) {
      if (!keep[q]) w.max_ops[q] = 0;
    }
  }
  try {
    w.Validate(algo.n);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return w;
}

void Emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw ConfigError("cannot write " + o.out);
  f << text;
}

void EmitFile(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

// The first `k` root-to-leaf executions in child order, without unfolding the
// rest of the tree.
void FirstLeaves(const tree::ExecutionTree& t, int node, std::vector<machine::Event>& path,
                 std::size_t k, std::vector<std::vector<machine::Event>>& out) {
  if (out.size() == k) return;
  bool leaf = true;
  for (const auto& e : t.node(node).edges) {
    if (e.pruned) continue;
    leaf = false;
    path.push_back(e.event);
    FirstLeaves(t, e.child, path, k, out);
    path.pop_back();
    if (out.size() == k) return;
  }
  if (leaf) out.push_back(path);
}

void CheckTreeOptions(const Options& o) {
  if (o.depth < 0) throw ConfigError("--depth must be >= 0");
  if (o.node_cap < 1) throw ConfigError("--node-cap must be >= 1");
}

int CmdRun(const Options& o) {
  const auto algo = LoadAlgorithm(o);
  const auto w = BuildWorkload(o, algo, machine::Trigger::Immediately());
  std::vector<machine::ProcessId> schedule;
  for (const auto& tok : SplitCommas(o.schedule)) {
    schedule.push_back(ParsePid(tok, algo.n, "schedule"));
  }
  const auto exec = machine::Run(algo, w, schedule, machine::Granularity::kSharedStep);
  Emit(o, trace_io::TraceJson(algo, w, exec.events).dump(2) + "\n");
  return kExitOk;
}

int CmdCheck(const Options& o) {
  CheckTreeOptions(o);
  const auto algo = LoadAlgorithm(o);
  const auto w = BuildWorkload(o, algo, machine::Trigger::Immediately());
  const auto condition = checkers::ParseCondition(o.condition);
  if (!condition) throw ConfigError("--condition must be lin, strong or decisive");
  const int universe = o.seed_universe > 0 ? o.seed_universe : algorithms::DefaultUniverse(w);
  const auto spec = algorithms::TargetSpec(algo, universe);
  const auto t = tree::Enumerate(algo, w, o.depth, o.node_cap);
  auto verdict = checkers::Check(t, spec, *condition);

  Json v;
  v["condition"] = std::string(checkers::ConditionName(*condition));
  v["result"] = verdict.holds ? "holds-at-bound" : "violation";
  v["depth"] = o.depth;
  v["node_cap"] = o.node_cap;
  v["universe"] = universe;
  v["nodes"] = t.size();
  v["executions"] = t.ExecutionCount();
  v["explored"] = verdict.explored;
  if (!verdict.holds) {
    std::vector<std::vector<machine::Event>> cex;
    if (*condition == checkers::Condition::kLinearizable) {
      cex.push_back(verdict.violation_path);
    } else {
      cex = checkers::Minimize(t, spec, *condition);
    }
    Json arr = Json::array();
    for (const auto& e : cex) arr.push_back(trace_io::ToJson(e, algo));
    v["counterexample"] = arr;
    v["reverified"] = checkers::Reverify(algo, w, cex, spec, *condition);
  } else if (verdict.witness) {
    Json wj;
    try {
      const auto defect = checkers::VerifyWitness(t, *verdict.witness, spec);
      wj["verified"] = !defect.has_value();
      if (defect) wj["defect"] = *defect;
    } catch (const ResourceLimit& e) {
      wj["verified"] = nullptr;
      wj["note"] = e.what();
    }
    Json sample = Json::array();
    std::vector<std::vector<machine::Event>> leaves;
    std::vector<machine::Event> path;
    FirstLeaves(t, tree::ExecutionTree::kRoot, path, kWitnessSample, leaves);
    for (const auto& exec : leaves) {
      sample.push_back({{"execution", trace_io::ToJson(exec, algo)},
                        {"label", trace_io::ToJson(verdict.witness->LabelOf(exec))}});
    }
    wj["sample"] = sample;
    v["witness"] = wj;
  }
  Json trace = trace_io::TraceJson(algo, w, {});
  trace["verdict"] = v;
  Emit(o, trace.dump(2) + "\n");
  std::cerr << algo.name << " n=" << algo.n << " " << checkers::ConditionName(*condition)
            << " depth=" << o.depth << ": "
            << (verdict.holds ? "holds-at-bound (bounded evidence)" : "violation") << "\n";
  return verdict.holds ? kExitOk : kExitViolation;
}

int CmdValency(const Options& o) {
  CheckTreeOptions(o);
  const auto algo = LoadAlgorithm(o);
  const auto w = BuildWorkload(o, algo, machine::Trigger::AfterAnyCompete());
  const auto t = tree::Enumerate(algo, w, o.depth, o.node_cap);
  const valency::ValencyMap map(t);
  const auto critical = valency::FindCritical(t, map);
  Json counts = {{"bivalent", 0}, {"univalent", 0}, {"unknown", 0}};
  for (std::size_t id = 0; id < t.size(); ++id) {
    switch (map.Classify(static_cast<int>(id)).kind) {
      case valency::ValencyClass::Kind::kBivalent:
        counts["bivalent"] = counts["bivalent"].get<int>() + 1;
        break;
      case valency::ValencyClass::Kind::kUnivalent:
        counts["univalent"] = counts["univalent"].get<int>() + 1;
        break;
      case valency::ValencyClass::Kind::kUnknown:
        counts["unknown"] = counts["unknown"].get<int>() + 1;
        break;
    }
  }
  Json crit = Json::array();
  for (int id : critical) {
    crit.push_back({{"node", trace_io::NodeId(t, id)},
                    {"execution", trace_io::ToJson(trace_io::PathTo(t, id), algo)}});
  }
  Json summary = trace_io::TraceJson(algo, w, {});
  summary["valency"] = {{"depth", o.depth},
                        {"nodes", t.size()},
                        {"root", map.Classify(tree::ExecutionTree::kRoot).ToString()},
                        {"counts", counts},
                        {"critical", crit}};
  if (!o.dot.empty()) EmitFile(o.dot, trace_io::ToDot(t, map, critical));
  Emit(o, summary.dump(2) + "\n");
  return kExitOk;
}

int CmdVerify(const Options& o) {
  std::ifstream in(o.input);
  if (!in) throw ConfigError("cannot read " + o.input);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("not JSON: ") + e.what());
  }
  try {
    const auto algo = algorithms::Lookup(j.at("algo").get<std::string>(), j.at("n").get<int>());
    const auto w = trace_io::WorkloadFromJson(j.at("workload"));
    w.Validate(algo.n);
    const auto& v = j.at("verdict");
    const auto condition = checkers::ParseCondition(v.at("condition").get<std::string>());
    if (!condition) throw ConfigError("unknown condition in file");
    if (!v.contains("counterexample")) throw ConfigError("file holds no counterexample");
    std::vector<std::vector<machine::Event>> cex;
    for (const auto& e : v.at("counterexample")) cex.push_back(trace_io::EventsFromJson(e, algo));
    const auto spec = algorithms::TargetSpec(algo, v.at("universe").get<int>());
    bool ok = false;
    try {
      ok = checkers::Reverify(algo, w, cex, spec, *condition);
    } catch (const ContractViolation& e) {
      std::cerr << "counterexample does not replay: " << e.what() << "\n";
      return kExitRejected;
    }
    std::cerr << (ok ? "counterexample re-verified" : "counterexample does not violate")
              << "\n";
    return ok ? kExitOk : kExitRejected;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed trace: ") + e.what());
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("malformed trace: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded model checking of contest implementations"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "run one schedule and write its trace");
  AddCommon(run, o);
  run->add_option("--schedule", o.schedule,
                  "comma-separated pids; each entry advances that process by one "
                  "shared step (invocation and response folded in)")
      ->expected(0, 1);

  auto* check = app.add_subcommand("check", "check a condition on the bounded tree");
  AddCommon(check, o);
  AddTreeOptions(check, o);
  check->add_option("--condition", o.condition, "lin | strong | decisive");

  auto* val = app.add_subcommand("valency", "classify nodes and list critical ones");
  AddCommon(val, o);
  AddTreeOptions(val, o);
  val->add_option("--dot", o.dot, "write the annotated graph here");

  auto* verify = app.add_subcommand("verify", "re-verify a counterexample file");
  verify->add_option("file", o.input, "trace written by check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    for (auto* sub : {run, check, val}) {
      if (sub->parsed()) MergeConfig(sub, o);
    }
    if (run->parsed()) return CmdRun(o);
    if (check->parsed()) return CmdCheck(o);
    if (val->parsed()) return CmdValency(o);
    return CmdVerify(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitCap;
  }
}
