#include "contestlab/specs.hpp"

#include <algorithm>
#include <array>

namespace contestlab::specs {
namespace {

struct SpecInfo {
  SpecKind kind;
  std::string_view id;
  std::vector<std::pair<std::string_view, std::size_t>> ops;  // name, arity
};

const std::array<SpecInfo, 9>& Table() {
  static const std::array<SpecInfo, 9> table = {{
      {SpecKind::kQueue, "queue", {{"enqueue", 1}, {"dequeue", 0}}},
      {SpecKind::kStack, "stack", {{"push", 1}, {"pop", 0}}},
      {SpecKind::kCounter, "counter", {{"increment", 0}, {"read", 0}}},
      {SpecKind::kMaxRegister, "max-register", {{"maxWrite", 1}, {"maxRead", 0}}},
      {SpecKind::kSnapshot, "snapshot", {{"update", 2}, {"scan", 0}}},
      {SpecKind::kFetchInc, "fetch&inc", {{"fetchInc", 0}}},
      {SpecKind::kFetchAdd, "fetch&add", {{"fetchAdd", 1}}},
      {SpecKind::kContest, "contest", {{"compete", 0}, {"decide", 0}}},
      {SpecKind::kLongLivedContest, "long-lived-contest", {{"compete", 0}, {"decide", 0}}},
  }};
  return table;
}

const SpecInfo& InfoOf(SpecKind kind) {
  for (const auto& info : Table()) {
    if (info.kind == kind) return info;
  }
  throw ContractViolation("unregistered spec kind");
}

bool IsCompetitor(int pid, int n) { return pid >= 1 && pid < n; }

Value WithItem(const Value& seq, std::size_t i, Value v) {
  auto items = seq.items();
  items[i] = std::move(v);
  return Value::Seq(std::move(items));
}

}  // namespace

SequentialSpec::SequentialSpec(SpecKind kind, SpecParams params)
    : kind_(kind), params_(params) {
  if (params_.n < 2) throw ContractViolation("spec requires n >= 2");
  if (params_.universe < 0) throw ContractViolation("universe must be >= 0");
}

SequentialSpec SequentialSpec::FromId(std::string_view id, SpecParams params) {
  for (const auto& info : Table()) {
    if (info.id == id) return SequentialSpec(info.kind, params);
  }
  throw ContractViolation("unknown spec id: " + std::string(id));
}

std::vector<std::string> SequentialSpec::Ids() {
  std::vector<std::string> ids;
  for (const auto& info : Table()) ids.emplace_back(info.id);
  return ids;
}

std::string_view SequentialSpec::id() const { return InfoOf(kind_).id; }

void SequentialSpec::RequireOp(const Call& call) const {
  for (const auto& [name, arity] : InfoOf(kind_).ops) {
    if (name == call.op) {
      if (call.args.size() != arity) {
        throw ContractViolation("wrong argument count for " + call.op);
      }
      return;
    }
  }
  throw ContractViolation("spec " + std::string(id()) +
                          " has no operation " + call.op);
}

Value SequentialSpec::Initial() const {
  switch (kind_) {
    case SpecKind::kQueue:
    case SpecKind::kStack:
      return Value::Seq({});
    case SpecKind::kCounter:
    case SpecKind::kMaxRegister:
    case SpecKind::kFetchInc:
    case SpecKind::kFetchAdd:
      return Value::Int(0);
    case SpecKind::kSnapshot:
      return Value::Seq(std::vector<Value>(params_.n - 1, Value::Int(0)));
    case SpecKind::kContest:
      // [winner (0 = none), decided, competed bitmask]
      return Value::Seq({Value::Int(0), Value::Int(0), Value::Int(0)});
    case SpecKind::kLongLivedContest: {
      // [decided, count of p1, ..., count of p_{n-1}]
      std::vector<Value> cells(params_.n, Value::Int(0));
      return Value::Seq(std::move(cells));
    }
  }
  return Value();
}

std::vector<Outcome> SequentialSpec::Extensions(const Value& state,
                                                const Call& call) const {
  RequireOp(call);
  const std::string& op = call.op;
  switch (kind_) {
    case SpecKind::kQueue: {
      auto items = state.items();
      if (op == "enqueue") {
        items.push_back(call.args[0]);
        return {{Value::Ack(), Value::Seq(std::move(items))}};
      }
      if (items.empty()) return {{Value::Empty(), state}};
      Value front = items.front();
      items.erase(items.begin());
      return {{front, Value::Seq(std::move(items))}};
    }
    case SpecKind::kStack: {
      auto items = state.items();
      if (op == "push") {
        items.push_back(call.args[0]);
        return {{Value::Ack(), Value::Seq(std::move(items))}};
      }
      if (items.empty()) return {{Value::Empty(), state}};
      Value top = items.back();
      items.pop_back();
      return {{top, Value::Seq(std::move(items))}};
    }
    case SpecKind::kCounter:
      if (op == "increment") {
        return {{Value::Ack(), Value::Int(state.as_int() + 1)}};
      }
      return {{state, state}};
    case SpecKind::kMaxRegister:
      if (op == "maxWrite") {
        const auto v = call.args[0].as_int();
        return {{Value::Ack(), Value::Int(std::max(v, state.as_int()))}};
      }
      return {{state, state}};
    case SpecKind::kSnapshot: {
      if (op == "scan") return {{state, state}};
      const auto i = call.args[0].as_int();
      if (i < 1 || i >= params_.n) {
        throw ContractViolation("snapshot component out of range");
      }
      return {{Value::Ack(), WithItem(state, i - 1, call.args[1])}};
    }
    case SpecKind::kFetchInc:
      return {{state, Value::Int(state.as_int() + 1)}};
    case SpecKind::kFetchAdd:
      return {{state, Value::Int(state.as_int() + call.args[0].as_int())}};
    case SpecKind::kContest: {
      const auto& cells = state.items();
      const auto winner = cells[0].as_int();
      const auto decided = cells[1].as_int();
      const auto mask = cells[2].as_int();
      if (op == "compete") {
        if (!IsCompetitor(call.pid, params_.n)) return {};
        const std::int64_t bit = std::int64_t{1} << call.pid;
        if (mask & bit) return {};
        return {{Value::Bool(true),
                 Value::Seq({Value::Int(winner ? winner : call.pid),
                             Value::Int(decided), Value::Int(mask | bit)})}};
      }
      if (call.pid != 0 || decided) return {};
      Value answer = winner ? Value::Int(winner) : Value::False();
      return {{answer, WithItem(state, 1, Value::Int(1))}};
    }
    case SpecKind::kLongLivedContest: {
      const auto& cells = state.items();
      if (op == "compete") {
        if (!IsCompetitor(call.pid, params_.n)) return {};
        return {{Value::Ack(),
                 WithItem(state, call.pid,
                          Value::Int(cells[call.pid].as_int() + 1))}};
      }
      if (call.pid != 0 || cells[0].as_int()) return {};
      std::int64_t max_count = 0;
      for (int q = 1; q < params_.n; ++q) {
        max_count = std::max(max_count, cells[q].as_int());
      }
      Value next = WithItem(state, 0, Value::Int(1));
      std::vector<Outcome> out;
      for (std::int64_t x = max_count; x <= params_.universe; ++x) {
        out.push_back({Value::Int(x), next});
      }
      return out;
    }
  }
  return {};
}

std::optional<Value> SequentialSpec::Accept(const Value& state,
                                            const Call& call,
                                            const Value& response) const {
  if (kind_ == SpecKind::kLongLivedContest && call.op == "decide") {
    RequireOp(call);
    const auto& cells = state.items();
    if (call.pid != 0 || cells[0].as_int() || !response.is_int()) {
      return std::nullopt;
    }
    for (int q = 1; q < params_.n; ++q) {
      if (cells[q].as_int() > response.as_int()) return std::nullopt;
    }
    return WithItem(state, 0, Value::Int(1));
  }
  for (auto& outcome : Extensions(state, call)) {
    if (outcome.response == response) return std::move(outcome.next);
  }
  return std::nullopt;
}

bool ValidSequence(const SequentialSpec& spec, std::span<const SeqEntry> seq) {
  Value state = spec.Initial();
  for (const auto& entry : seq) {
    auto next = spec.Accept(state, {entry.pid, entry.op, entry.args},
                            entry.response);
    if (!next) return false;
    state = std::move(*next);
  }
  return true;
}

}  // namespace contestlab::specs
