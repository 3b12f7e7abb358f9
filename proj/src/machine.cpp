#include "contestlab/machine.hpp"

#include <sstream>

namespace contestlab::machine {

void LocalState::HashInto(Fingerprinter& fp) const {
  fp.AddInt(pc);
  fp.AddInt(static_cast<std::int64_t>(vars.size()));
  for (const auto& v : vars) v.HashInto(fp);
}

int AlgorithmDef::ObjectIndex(std::string_view object_name) const {
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].name == object_name) return static_cast<int>(i);
  }
  throw ContractViolation("no object named " + std::string(object_name));
}

void ProcessState::HashInto(Fingerprinter& fp) const {
  fp.AddByte(active ? 1 : 0);
  local.HashInto(fp);
  fp.AddInt(completed);
  fp.AddByte(last_response ? 1 : 0);
  if (last_response) last_response->HashInto(fp);
}

RefereeStatus Configuration::referee_status() const {
  const auto& ref = procs.at(kReferee);
  if (ref.active) return RefereeStatus::kPending;
  return ref.completed > 0 ? RefereeStatus::kDone : RefereeStatus::kNotStarted;
}

std::optional<Value> Configuration::referee_result() const {
  if (referee_status() != RefereeStatus::kDone) return std::nullopt;
  return procs[kReferee].last_response;
}

void Configuration::HashInto(Fingerprinter& fp) const {
  fp.AddInt(static_cast<std::int64_t>(objects.size()));
  for (const auto& o : objects) o.HashInto(fp);
  fp.AddInt(static_cast<std::int64_t>(procs.size()));
  for (const auto& p : procs) p.HashInto(fp);
}

Event Event::Invoke(ProcessId p, std::string op, std::vector<Value> args) {
  Event e;
  e.kind = Kind::kInvoke;
  e.pid = p;
  e.op = std::move(op);
  e.args = std::move(args);
  return e;
}

Event Event::Step(ProcessId p, int object, memory::PrimitiveOp prim, Value r) {
  Event e;
  e.kind = Kind::kStep;
  e.pid = p;
  e.object = object;
  e.primitive = std::move(prim);
  e.value = std::move(r);
  return e;
}

Event Event::Respond(ProcessId p, Value v) {
  Event e;
  e.kind = Kind::kRespond;
  e.pid = p;
  e.value = std::move(v);
  return e;
}

void Event::HashInto(Fingerprinter& fp) const {
  fp.AddByte(static_cast<std::uint8_t>(kind));
  fp.AddInt(pid);
  fp.AddString(op);
  fp.AddInt(static_cast<std::int64_t>(args.size()));
  for (const auto& a : args) a.HashInto(fp);
  fp.AddInt(object);
  primitive.HashInto(fp);
  value.HashInto(fp);
}

std::string Event::ToString(const AlgorithmDef* algo) const {
  std::ostringstream os;
  os << "p" << pid << ' ';
  switch (kind) {
    case Kind::kInvoke:
      os << "invoke " << op;
      break;
    case Kind::kStep:
      if (algo && object >= 0) {
        os << algo->layout.at(object).name;
      } else {
        os << "obj" << object;
      }
      os << '.' << primitive.ToString() << " -> " << value.ToString();
      break;
    case Kind::kRespond:
      os << "respond " << value.ToString();
      break;
  }
  return os.str();
}

Workload Workload::OneShot(int n, Trigger referee) {
  return LongLived(n, 1, referee);
}

Workload Workload::LongLived(int n, int competes, Trigger referee) {
  Workload w;
  w.max_ops.assign(n, competes);
  w.max_ops[kReferee] = 1;
  w.triggers.assign(n, Trigger::Immediately());
  w.triggers[kReferee] = referee;
  return w;
}

int Workload::total_competes() const {
  int total = 0;
  for (std::size_t p = 1; p < max_ops.size(); ++p) total += max_ops[p];
  return total;
}

void Workload::Validate(int n) const {
  if (static_cast<int>(max_ops.size()) != n ||
      static_cast<int>(triggers.size()) != n) {
    throw ContractViolation("workload must list every process");
  }
  if (max_ops[kReferee] < 0 || max_ops[kReferee] > 1) {
    throw ContractViolation("the referee invokes decide at most once");
  }
  for (int p = 0; p < n; ++p) {
    if (max_ops[p] < 0) throw ContractViolation("negative operation quota");
    const auto& t = triggers[p];
    if (t.kind == Trigger::Kind::kAfterProcess &&
        (t.pid < 0 || t.pid >= n || t.pid == p)) {
      throw ContractViolation("trigger names an invalid process");
    }
  }
}

Configuration Initial(const AlgorithmDef& algo) {
  Configuration c;
  for (const auto& decl : algo.layout) c.objects.push_back(decl.initial);
  c.procs.resize(algo.n);
  for (int p = 0; p < algo.n; ++p) c.procs[p].local = algo.initial_local.at(p);
  return c;
}

namespace {

bool TriggerFires(const Trigger& t, const Configuration& c,
                  const Workload& w) {
  switch (t.kind) {
    case Trigger::Kind::kImmediately:
      return true;
    case Trigger::Kind::kAfterAnyCompete:
      for (std::size_t q = 1; q < c.procs.size(); ++q) {
        if (c.procs[q].completed > 0) return true;
      }
      return false;
    case Trigger::Kind::kAfterProcess:
      return c.procs[t.pid].completed >= w.max_ops[t.pid];
    case Trigger::Kind::kNever:
      return false;
  }
  return false;
}

}  // namespace

std::vector<Transition> Step(const AlgorithmDef& algo,
                             const Configuration& config, ProcessId pid,
                             const Workload& workload) {
  const ProcessState& ps = config.procs.at(pid);
  if (!ps.active) {
    if (ps.completed >= workload.max_ops[pid] ||
        !TriggerFires(workload.triggers[pid], config, workload)) {
      return {};
    }
    Configuration next = config;
    auto& np = next.procs[pid];
    np.active = true;
    np.local = algo.begin(pid, ps.local);
    return {{Event::Invoke(pid, algo.op_name(pid)), std::move(next)}};
  }
  Action action = algo.poised(pid, ps.local);
  Configuration next = config;
  auto& np = next.procs[pid];
  if (action.kind == Action::Kind::kRespond) {
    np.active = false;
    np.completed += 1;
    np.last_response = action.response;
    return {{Event::Respond(pid, std::move(action.response)), std::move(next)}};
  }
  if (action.object < 0 ||
      action.object >= static_cast<int>(config.objects.size())) {
    throw ContractViolation(algo.name + ": program names an unknown object");
  }
  auto applied = memory::ApplyPrimitive(config.objects[action.object], action.op);
  next.objects[action.object] = std::move(applied.state);
  np.local = algo.absorb(pid, ps.local, applied.response);
  return {{Event::Step(pid, action.object, std::move(action.op),
                       std::move(applied.response)),
           std::move(next)}};
}

Execution Run(const AlgorithmDef& algo, const Workload& workload,
              std::span<const ProcessId> schedule, Granularity granularity) {
  workload.Validate(algo.n);
  Execution exec{Initial(algo), {}, {}};
  Configuration current = exec.initial;
  auto take = [&](ProcessId p) -> const Event* {
    auto ts = Step(algo, current, p, workload);
    if (ts.empty()) return nullptr;
    exec.events.push_back(std::move(ts.front().event));
    current = std::move(ts.front().next);
    return &exec.events.back();
  };
  for (ProcessId p : schedule) {
    if (p < 0 || p >= algo.n) throw ContractViolation("schedule names an unknown process");
    if (granularity == Granularity::kEvent) {
      take(p);
      continue;
    }
    const Event* e = take(p);
    if (e && e->is_invoke()) e = take(p);
    if (e && e->is_step()) {
      if (algo.poised(p, current.procs[p].local).kind == Action::Kind::kRespond) {
        take(p);
      }
    }
  }
  exec.final_config = std::move(current);
  return exec;
}

Execution Replay(const AlgorithmDef& algo, const Workload& workload,
                 std::span<const Event> events) {
  workload.Validate(algo.n);
  Execution exec{Initial(algo), {}, {}};
  Configuration current = exec.initial;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (e.pid < 0 || e.pid >= algo.n) {
      throw ContractViolation("event " + std::to_string(i) + " names an unknown process");
    }
    auto ts = Step(algo, current, e.pid, workload);
    if (ts.empty() || !(ts.front().event == e)) {
      throw ContractViolation("event " + std::to_string(i) + " (" +
                              e.ToString(&algo) + ") is not enabled");
    }
    exec.events.push_back(e);
    current = std::move(ts.front().next);
  }
  exec.final_config = std::move(current);
  return exec;
}

bool Indistinguishable(const Configuration& c1, const Configuration& c2,
                       ProcessId pid) {
  if (c1.objects.size() != c2.objects.size() ||
      c1.procs.size() != c2.procs.size()) {
    throw ContractViolation("configurations have different layouts");
  }
  for (std::size_t i = 0; i < c1.objects.size(); ++i) {
    if (!(c1.objects[i].kind == c2.objects[i].kind)) {
      throw ContractViolation("configurations have different layouts");
    }
  }
  return c1.objects == c2.objects && c1.procs.at(pid) == c2.procs.at(pid);
}

History HistoryOf(std::span<const Event> events) {
  History h;
  for (const auto& e : events) {
    if (!e.is_step()) h.push_back(e);
  }
  return h;
}

}  // namespace contestlab::machine
