#include "contestlab/memory.hpp"

#include <algorithm>
#include <set>

namespace contestlab::memory {

using Tag = PrimitiveOp::Tag;

ObjectKind ObjectKind::Window(int w) {
  if (w < 1) throw ContractViolation("window register needs w >= 1");
  return ObjectKind(ObjectTag::kWindowRegister, w);
}

ObjectKind ObjectKind::Spec(specs::SequentialSpec spec) {
  if (!spec.deterministic()) {
    throw ContractViolation("spec objects must be deterministic");
  }
  ObjectKind kind(ObjectTag::kSpecObject, 0);
  kind.spec_ = std::move(spec);
  return kind;
}

const specs::SequentialSpec& ObjectKind::spec() const {
  if (!spec_) throw ContractViolation("object kind has no spec");
  return *spec_;
}

bool ObjectKind::interfering() const {
  switch (tag_) {
    case ObjectTag::kRegister:
    case ObjectTag::kTestAndSet:
    case ObjectTag::kSwapCell:
    case ObjectTag::kAddCell:
      return true;
    case ObjectTag::kWindowRegister:
      return window_ == 1;
    case ObjectTag::kSpecObject:
      return false;
  }
  return false;
}

std::string ObjectKind::ToString() const {
  switch (tag_) {
    case ObjectTag::kRegister:
      return "register";
    case ObjectTag::kWindowRegister:
      return "window-register(" + std::to_string(window_) + ")";
    case ObjectTag::kTestAndSet:
      return "test-and-set";
    case ObjectTag::kSwapCell:
      return "swap-cell";
    case ObjectTag::kAddCell:
      return "add-cell";
    case ObjectTag::kSpecObject:
      return "spec-object(" + std::string(spec_->id()) + ")";
  }
  return "?";
}

std::string PrimitiveOp::Mnemonic() const {
  switch (tag) {
    case Tag::kRead:
      return "read";
    case Tag::kWrite:
      return "write";
    case Tag::kTas:
      return "tas";
    case Tag::kSwap:
      return "swap";
    case Tag::kFadd:
      return "fadd";
    case Tag::kSpecCall:
      return name;
  }
  return "?";
}

std::string PrimitiveOp::ToString() const {
  std::string s = Mnemonic() + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += args[i].ToString();
  }
  return s + ")";
}

void PrimitiveOp::HashInto(Fingerprinter& fp) const {
  fp.AddByte(static_cast<std::uint8_t>(tag));
  fp.AddString(name);
  fp.AddInt(static_cast<std::int64_t>(args.size()));
  for (const auto& a : args) a.HashInto(fp);
}

ObjectState ObjectState::Fresh(const ObjectKind& kind) {
  switch (kind.tag()) {
    case ObjectTag::kRegister:
      return {kind, Value::Bottom()};
    case ObjectTag::kWindowRegister:
      return {kind, Value::Seq({})};
    case ObjectTag::kTestAndSet:
      return {kind, Value::Bool(false)};
    case ObjectTag::kSwapCell:
    case ObjectTag::kAddCell:
      return {kind, Value::Int(0)};
    case ObjectTag::kSpecObject:
      return {kind, kind.spec().Initial()};
  }
  return {kind, Value()};
}

void ObjectState::HashInto(Fingerprinter& fp) const {
  fp.AddByte(static_cast<std::uint8_t>(kind.tag()));
  fp.AddInt(kind.window());
  content.HashInto(fp);
}

bool Applicable(const ObjectKind& kind, const PrimitiveOp& op) {
  switch (kind.tag()) {
    case ObjectTag::kRegister:
    case ObjectTag::kWindowRegister:
      return op.tag == Tag::kRead || op.tag == Tag::kWrite;
    case ObjectTag::kTestAndSet:
      return op.tag == Tag::kRead || op.tag == Tag::kTas;
    case ObjectTag::kSwapCell:
      return op.tag == Tag::kRead || op.tag == Tag::kWrite ||
             op.tag == Tag::kSwap;
    case ObjectTag::kAddCell:
      return op.tag == Tag::kRead || op.tag == Tag::kWrite ||
             op.tag == Tag::kFadd;
    case ObjectTag::kSpecObject:
      return op.tag == Tag::kSpecCall;
  }
  return false;
}

Applied ApplyPrimitive(const ObjectState& state, const PrimitiveOp& op) {
  const ObjectKind& kind = state.kind;
  if (!Applicable(kind, op)) {
    throw ContractViolation(op.Mnemonic() + " is not defined on " +
                            kind.ToString());
  }
  const std::size_t arity =
      (op.tag == Tag::kRead || op.tag == Tag::kTas) ? 0 : 1;
  if (op.tag != Tag::kSpecCall && op.args.size() != arity) {
    throw ContractViolation("wrong argument count for " + op.Mnemonic());
  }
  switch (op.tag) {
    case Tag::kRead:
      return {state, state.content};
    case Tag::kWrite:
      if (kind.tag() == ObjectTag::kWindowRegister) {
        auto items = state.content.items();
        items.push_back(op.args[0]);
        if (items.size() > static_cast<std::size_t>(kind.window())) {
          items.erase(items.begin());
        }
        return {{kind, Value::Seq(std::move(items))}, Value::Ack()};
      }
      return {{kind, op.args[0]}, Value::Ack()};
    case Tag::kTas:
      return {{kind, Value::Bool(true)}, state.content};
    case Tag::kSwap:
      return {{kind, op.args[0]}, state.content};
    case Tag::kFadd:
      return {{kind, Value::Int(state.content.as_int() + op.args[0].as_int())},
              state.content};
    case Tag::kSpecCall: {
      specs::Call call{specs::Call::kAnyCaller, op.name, op.args};
      auto outcomes = kind.spec().Extensions(state.content, call);
      if (outcomes.size() != 1) {
        throw ContractViolation("spec call " + op.name +
                                " is not enabled on " + kind.ToString());
      }
      return {{kind, std::move(outcomes[0].next)},
              std::move(outcomes[0].response)};
    }
  }
  throw ContractViolation("unhandled primitive");
}

bool Commutes(const PrimitiveOp& op1, const PrimitiveOp& op2,
              const ObjectState& state) {
  const auto a = ApplyPrimitive(ApplyPrimitive(state, op1).state, op2).state;
  const auto b = ApplyPrimitive(ApplyPrimitive(state, op2).state, op1).state;
  return a == b;
}

bool Overwrites(const PrimitiveOp& op1, const PrimitiveOp& op2,
                const ObjectState& state) {
  const auto both = ApplyPrimitive(ApplyPrimitive(state, op2).state, op1).state;
  return both == ApplyPrimitive(state, op1).state;
}

bool Interferes(const PrimitiveOp& op1, const PrimitiveOp& op2,
                const ObjectState& state) {
  return Commutes(op1, op2, state) || Overwrites(op1, op2, state) ||
         Overwrites(op2, op1, state);
}

bool InterferesEverywhere(const PrimitiveOp& op1, const PrimitiveOp& op2,
                          const std::vector<ObjectState>& states) {
  return std::all_of(states.begin(), states.end(), [&](const auto& s) {
    return Interferes(op1, op2, s);
  });
}

std::vector<PrimitiveOp> PrimitivesOf(const ObjectKind& kind,
                                      const std::vector<Value>& values) {
  std::vector<PrimitiveOp> ops{PrimitiveOp::Read()};
  switch (kind.tag()) {
    case ObjectTag::kRegister:
    case ObjectTag::kWindowRegister:
      for (const auto& v : values) ops.push_back(PrimitiveOp::Write(v));
      break;
    case ObjectTag::kTestAndSet:
      ops.push_back(PrimitiveOp::Tas());
      break;
    case ObjectTag::kSwapCell:
      for (const auto& v : values) {
        ops.push_back(PrimitiveOp::Write(v));
        ops.push_back(PrimitiveOp::Swap(v));
      }
      break;
    case ObjectTag::kAddCell:
      for (const auto& v : values) {
        ops.push_back(PrimitiveOp::Write(v));
        ops.push_back(PrimitiveOp::Fadd(v.as_int()));
      }
      break;
    case ObjectTag::kSpecObject:
      throw ContractViolation("spec objects have no primitive family");
  }
  return ops;
}

std::vector<ObjectState> SmallStates(const ObjectKind& kind,
                                     const std::vector<Value>& values,
                                     int steps) {
  const auto ops = PrimitivesOf(kind, values);
  std::vector<ObjectState> all{ObjectState::Fresh(kind)};
  std::set<Value> seen{all.front().content};
  std::size_t frontier_begin = 0;
  for (int s = 0; s < steps; ++s) {
    const std::size_t frontier_end = all.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const auto& op : ops) {
        auto next = ApplyPrimitive(all[i], op).state;
        if (seen.insert(next.content).second) all.push_back(std::move(next));
      }
    }
    frontier_begin = frontier_end;
  }
  return all;
}

}  // namespace contestlab::memory
