#include "contestlab/algorithms.hpp"

#include <algorithm>
#include <array>

namespace contestlab::algorithms {
namespace {

using machine::Action;
using machine::AlgorithmDef;
using machine::LocalState;
using machine::ProcessId;
using memory::ObjectKind;
using memory::ObjectState;
using memory::PrimitiveOp;

constexpr std::array<std::string_view, 11> kNames = {
    "contest_rw",       "contest_window",  "contest_window_weak",
    "contest_from_queue", "contest_from_stack", "ll_contest_rw",
    "ll_from_counter",  "ll_from_maxreg",  "ll_from_snapshot",
    "ll_from_fai",      "ll_from_faa",
};

AlgorithmDef Skeleton(std::string_view name, int n, std::string target) {
  AlgorithmDef a;
  a.name = std::string(name);
  a.n = n;
  a.target_spec = std::move(target);
  a.op_name = [](ProcessId p) {
    return p == machine::kReferee ? std::string("decide") : std::string("compete");
  };
  a.begin = [](ProcessId, const LocalState& prev) {
    return LocalState{0, prev.vars};
  };
  a.initial_local.assign(n, LocalState{});
  return a;
}

LocalState Advance(const LocalState& s, int pc) { return LocalState{pc, s.vars}; }

// Competitor: read X; write own index only if the read saw "nothing yet";
// respond true. Referee: read X once and map the read value to an answer.
// contest_rw and contest_window differ only in the register and in what
// "nothing yet" and "answer" mean.
AlgorithmDef ReadThenWriteContest(std::string_view name, int n,
                                  ObjectState x_init,
                                  std::function<bool(const Value&)> unset,
                                  std::function<Value(const Value&)> answer) {
  AlgorithmDef a = Skeleton(name, n, "contest");
  a.layout.push_back({"X", std::move(x_init)});
  a.poised = [answer](ProcessId p, const LocalState& s) {
    if (p == machine::kReferee) {
      if (s.pc == 0) return Action::Apply(0, PrimitiveOp::Read());
      return Action::Respond(answer(s.vars.at(0)));
    }
    switch (s.pc) {
      case 0:
        return Action::Apply(0, PrimitiveOp::Read());
      case 1:
        return Action::Apply(0, PrimitiveOp::Write(Value::Int(p)));
      default:
        return Action::Respond(Value::Bool(true));
    }
  };
  a.absorb = [unset](ProcessId p, const LocalState& s, const Value& r) {
    if (p == machine::kReferee) return LocalState{1, {r}};
    if (s.pc == 0) return Advance(s, unset(r) ? 1 : 2);
    return Advance(s, 2);
  };
  return a;
}

AlgorithmDef ContestRw(int n) {
  return ReadThenWriteContest(
      "contest_rw", n, {ObjectKind::Register(), Value::False()},
      [](const Value& v) { return v == Value::False(); },
      [](const Value& v) { return v; });
}

AlgorithmDef ContestWindow(std::string_view name, int n, int k) {
  auto kind = ObjectKind::Window(k);
  return ReadThenWriteContest(
      name, n, ObjectState::Fresh(kind),
      [](const Value& v) { return v.items().empty(); },
      [](const Value& v) {
        return v.items().empty() ? Value::False() : v.items().front();
      });
}

// Competitor applies one spec call to the shared object and responds;
// the referee's program is supplied by the caller.
AlgorithmDef OneCallCompetitors(
    std::string_view name, int n, std::string target, ObjectKind kind,
    std::function<PrimitiveOp(ProcessId, const LocalState&)> competitor_call,
    std::function<LocalState(ProcessId, const LocalState&, const Value&)>
        competitor_absorb,
    Value compete_response,
    std::function<Action(const LocalState&)> referee_poised,
    std::function<LocalState(const LocalState&, const Value&)> referee_absorb) {
  AlgorithmDef a = Skeleton(name, n, std::move(target));
  a.layout.push_back({"A", ObjectState::Fresh(kind)});
  a.poised = [=](ProcessId p, const LocalState& s) {
    if (p == machine::kReferee) return referee_poised(s);
    if (s.pc == 0) return Action::Apply(0, competitor_call(p, s));
    return Action::Respond(compete_response);
  };
  a.absorb = [=](ProcessId p, const LocalState& s, const Value& r) {
    if (p == machine::kReferee) return referee_absorb(s, r);
    return competitor_absorb(p, s, r);
  };
  return a;
}

LocalState ToDone(ProcessId, const LocalState& s, const Value&) {
  return Advance(s, 1);
}

// Persistent per-competitor counter in vars[0], bumped by the write step.
LocalState BumpCounter(ProcessId, const LocalState& s, const Value&) {
  return LocalState{1, {Value::Int(s.vars.at(0).as_int() + 1)}};
}

Value NextCount(const LocalState& s) {
  return Value::Int(s.vars.at(0).as_int() + 1);
}

// Referee reads once (primitive `op`) and responds with f(read value).
std::pair<std::function<Action(const LocalState&)>,
          std::function<LocalState(const LocalState&, const Value&)>>
SingleReadReferee(PrimitiveOp op, std::function<Value(const Value&)> f) {
  auto poised = [op, f](const LocalState& s) {
    if (s.pc == 0) return Action::Apply(0, op);
    return Action::Respond(f(s.vars.at(0)));
  };
  auto absorb = [](const LocalState&, const Value& r) {
    return LocalState{1, {r}};
  };
  return {poised, absorb};
}

void WithCounterState(AlgorithmDef& a) {
  for (int p = 1; p < a.n; ++p) a.initial_local[p].vars = {Value::Int(0)};
}

AlgorithmDef LlContestRw(int n) {
  AlgorithmDef a = Skeleton("ll_contest_rw", n, "long-lived-contest");
  for (int i = 1; i < n; ++i) {
    a.layout.push_back({"M[" + std::to_string(i) + "]",
                        {ObjectKind::Register(), Value::Int(0)}});
  }
  WithCounterState(a);
  a.begin = [](ProcessId p, const LocalState& prev) {
    if (p == machine::kReferee) return LocalState{0, {Value::Int(0)}};
    return LocalState{0, prev.vars};
  };
  // Referee collects M[1..n-1] in ascending order, keeping the running max.
  a.poised = [n](ProcessId p, const LocalState& s) {
    if (p == machine::kReferee) {
      if (s.pc < n - 1) return Action::Apply(s.pc, PrimitiveOp::Read());
      return Action::Respond(s.vars.at(0));
    }
    if (s.pc == 0) return Action::Apply(p - 1, PrimitiveOp::Write(NextCount(s)));
    return Action::Respond(Value::Ack());
  };
  a.absorb = [](ProcessId p, const LocalState& s, const Value& r) {
    if (p == machine::kReferee) {
      return LocalState{s.pc + 1,
                        {Value::Int(std::max(s.vars.at(0).as_int(), r.as_int()))}};
    }
    return BumpCounter(p, s, r);
  };
  return a;
}

AlgorithmDef ContestFromQueue(int n) {
  auto [poised, absorb] = SingleReadReferee(
      PrimitiveOp::SpecCall("dequeue"),
      [](const Value& v) { return v == Value::Empty() ? Value::False() : v; });
  return OneCallCompetitors(
      "contest_from_queue", n, "contest",
      ObjectKind::Spec(specs::SequentialSpec(specs::SpecKind::kQueue, {n, 0})),
      [](ProcessId p, const LocalState&) {
        return PrimitiveOp::SpecCall("enqueue", {Value::Int(p)});
      },
      ToDone, Value::Bool(true), poised, absorb);
}

AlgorithmDef ContestFromStack(int n) {
  // Referee pops until the stack reports empty; vars[0] is the last
  // non-empty value seen (false while none).
  auto poised = [](const LocalState& s) {
    if (s.pc == 0) return Action::Apply(0, PrimitiveOp::SpecCall("pop"));
    return Action::Respond(s.vars.at(0));
  };
  auto absorb = [](const LocalState& s, const Value& r) {
    if (r == Value::Empty()) return LocalState{1, s.vars};
    return LocalState{0, {r}};
  };
  AlgorithmDef a = OneCallCompetitors(
      "contest_from_stack", n, "contest",
      ObjectKind::Spec(specs::SequentialSpec(specs::SpecKind::kStack, {n, 0})),
      [](ProcessId p, const LocalState&) {
        return PrimitiveOp::SpecCall("push", {Value::Int(p)});
      },
      ToDone, Value::Bool(true), poised, absorb);
  a.begin = [](ProcessId p, const LocalState& prev) {
    if (p == machine::kReferee) return LocalState{0, {Value::False()}};
    return LocalState{0, prev.vars};
  };
  return a;
}

AlgorithmDef LongLivedFromObject(std::string_view name, int n, ObjectKind kind,
                                 std::function<PrimitiveOp(ProcessId, const LocalState&)> call,
                                 bool counts, PrimitiveOp referee_op,
                                 std::function<Value(const Value&)> answer) {
  auto [poised, absorb] = SingleReadReferee(std::move(referee_op), std::move(answer));
  AlgorithmDef a = OneCallCompetitors(
      name, n, "long-lived-contest", std::move(kind), std::move(call),
      counts ? BumpCounter : ToDone, Value::Ack(), poised, absorb);
  if (counts) WithCounterState(a);
  return a;
}

Value Identity(const Value& v) { return v; }

Value MaxComponent(const Value& v) {
  std::int64_t m = 0;
  for (const auto& item : v.items()) m = std::max(m, item.as_int());
  return Value::Int(m);
}

}  // namespace

std::vector<std::string> CatalogNames() {
  return {kNames.begin(), kNames.end()};
}

bool IsLongLived(std::string_view name) { return name.starts_with("ll_"); }

machine::AlgorithmDef Lookup(std::string_view name, int n) {
  if (std::find(kNames.begin(), kNames.end(), name) == kNames.end()) {
    throw ContractViolation("unknown algorithm: " + std::string(name));
  }
  if (n < 2 || n > 16) throw ContractViolation("n must be in [2, 16]");
  auto spec_kind = [n](specs::SpecKind k) {
    return ObjectKind::Spec(specs::SequentialSpec(k, {n, 0}));
  };
  if (name == "contest_rw") return ContestRw(n);
  if (name == "contest_window") return ContestWindow(name, n, n - 1);
  if (name == "contest_window_weak") {
    if (n < 3) throw ContractViolation("contest_window_weak needs n >= 3");
    return ContestWindow(name, n, n - 2);
  }
  if (name == "contest_from_queue") return ContestFromQueue(n);
  if (name == "contest_from_stack") return ContestFromStack(n);
  if (name == "ll_contest_rw") return LlContestRw(n);
  if (name == "ll_from_counter") {
    return LongLivedFromObject(
        name, n, spec_kind(specs::SpecKind::kCounter),
        [](ProcessId, const LocalState&) { return PrimitiveOp::SpecCall("increment"); },
        false, PrimitiveOp::SpecCall("read"), Identity);
  }
  if (name == "ll_from_maxreg") {
    return LongLivedFromObject(
        name, n, spec_kind(specs::SpecKind::kMaxRegister),
        [](ProcessId, const LocalState& s) {
          return PrimitiveOp::SpecCall("maxWrite", {NextCount(s)});
        },
        true, PrimitiveOp::SpecCall("maxRead"), Identity);
  }
  if (name == "ll_from_snapshot") {
    return LongLivedFromObject(
        name, n, spec_kind(specs::SpecKind::kSnapshot),
        [](ProcessId p, const LocalState& s) {
          return PrimitiveOp::SpecCall("update", {Value::Int(p), NextCount(s)});
        },
        true, PrimitiveOp::SpecCall("scan"), MaxComponent);
  }
  if (name == "ll_from_fai") {
    return LongLivedFromObject(
        name, n, spec_kind(specs::SpecKind::kFetchInc),
        [](ProcessId, const LocalState&) { return PrimitiveOp::SpecCall("fetchInc"); },
        false, PrimitiveOp::SpecCall("fetchInc"), Identity);
  }
  return LongLivedFromObject(
      name, n, ObjectKind::AddCell(),
      [](ProcessId, const LocalState&) { return PrimitiveOp::Fadd(1); }, false,
      PrimitiveOp::Fadd(1), Identity);
}

specs::SequentialSpec TargetSpec(const machine::AlgorithmDef& algo,
                                 int universe) {
  return specs::SequentialSpec::FromId(algo.target_spec, {algo.n, universe});
}

int DefaultUniverse(const machine::Workload& workload) {
  return workload.total_competes() + 1;
}

}  // namespace contestlab::algorithms
