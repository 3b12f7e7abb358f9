#include "contestlab/trace_io.hpp"

#include <cstdio>
#include <sstream>

namespace contestlab::trace_io {

using machine::Event;
using memory::PrimitiveOp;

Json ToJson(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::kSymbol:
      return "#" + std::string(SymbolName(v.as_symbol()));
    case Value::Kind::kBool:
      return v.as_bool();
    case Value::Kind::kInt:
      return v.as_int();
    case Value::Kind::kSeq: {
      Json arr = Json::array();
      for (const auto& x : v.items()) arr.push_back(ToJson(x));
      return arr;
    }
  }
  return nullptr;
}

Value ValueFromJson(const Json& j) {
  if (j.is_boolean()) return Value::Bool(j.get<bool>());
  if (j.is_number_integer()) return Value::Int(j.get<std::int64_t>());
  if (j.is_array()) {
    std::vector<Value> items;
    for (const auto& x : j) items.push_back(ValueFromJson(x));
    return Value::Seq(std::move(items));
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    for (Symbol sym : {Symbol::kAck, Symbol::kFalse, Symbol::kBottom, Symbol::kEmpty}) {
      if (s == "#" + std::string(SymbolName(sym))) return Value::Sym(sym);
    }
  }
  throw ContractViolation("not a value: " + j.dump());
}

namespace {

Json ValuesToJson(const std::vector<Value>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) arr.push_back(ToJson(v));
  return arr;
}

std::vector<Value> ValuesFromJson(const Json& j) {
  std::vector<Value> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ContractViolation("expected an array of values");
  for (const auto& x : j) out.push_back(ValueFromJson(x));
  return out;
}

PrimitiveOp PrimitiveFromJson(const Json& j, const memory::ObjectKind& kind) {
  const auto name = j.at("op").get<std::string>();
  auto args = ValuesFromJson(j.value("args", Json::array()));
  if (kind.tag() == memory::ObjectTag::kSpecObject) {
    return PrimitiveOp::SpecCall(name, std::move(args));
  }
  PrimitiveOp op;
  if (name == "read") {
    op.tag = PrimitiveOp::Tag::kRead;
  } else if (name == "write") {
    op.tag = PrimitiveOp::Tag::kWrite;
  } else if (name == "tas") {
    op.tag = PrimitiveOp::Tag::kTas;
  } else if (name == "swap") {
    op.tag = PrimitiveOp::Tag::kSwap;
  } else if (name == "fadd") {
    op.tag = PrimitiveOp::Tag::kFadd;
  } else {
    throw ContractViolation("unknown primitive " + name);
  }
  op.args = std::move(args);
  return op;
}

}  // namespace

Json ToJson(const Event& e, const machine::AlgorithmDef& algo) {
  Json j;
  j["pid"] = e.pid;
  switch (e.kind) {
    case Event::Kind::kInvoke:
      j["kind"] = "invoke";
      j["op"] = e.op;
      j["args"] = ValuesToJson(e.args);
      break;
    case Event::Kind::kStep:
      j["kind"] = "step";
      j["object"] = algo.layout.at(e.object).name;
      j["primitive"] = {{"op", e.primitive.Mnemonic()},
                        {"args", ValuesToJson(e.primitive.args)}};
      j["value"] = ToJson(e.value);
      break;
    case Event::Kind::kRespond:
      j["kind"] = "respond";
      j["value"] = ToJson(e.value);
      break;
  }
  return j;
}

Event EventFromJson(const Json& j, const machine::AlgorithmDef& algo) {
  const auto kind = j.at("kind").get<std::string>();
  const int pid = j.at("pid").get<int>();
  if (kind == "invoke") {
    return Event::Invoke(pid, j.at("op").get<std::string>(),
                         ValuesFromJson(j.value("args", Json::array())));
  }
  if (kind == "step") {
    const int object = algo.ObjectIndex(j.at("object").get<std::string>());
    return Event::Step(pid, object,
                       PrimitiveFromJson(j.at("primitive"), algo.layout[object].initial.kind),
                       ValueFromJson(j.at("value")));
  }
  if (kind == "respond") return Event::Respond(pid, ValueFromJson(j.at("value")));
  throw ContractViolation("unknown event kind " + kind);
}

Json ToJson(std::span<const Event> events, const machine::AlgorithmDef& algo) {
  Json arr = Json::array();
  for (const auto& e : events) arr.push_back(ToJson(e, algo));
  return arr;
}

std::vector<Event> EventsFromJson(const Json& j, const machine::AlgorithmDef& algo) {
  if (!j.is_array()) throw ContractViolation("events must be an array");
  std::vector<Event> out;
  for (const auto& e : j) out.push_back(EventFromJson(e, algo));
  return out;
}

std::string TriggerName(const machine::Trigger& t) {
  switch (t.kind) {
    case machine::Trigger::Kind::kImmediately:
      return "immediately";
    case machine::Trigger::Kind::kAfterAnyCompete:
      return "after-any-compete";
    case machine::Trigger::Kind::kAfterProcess:
      return "after-process:" + std::to_string(t.pid);
    case machine::Trigger::Kind::kNever:
      return "never";
  }
  return "?";
}

machine::Trigger ParseTrigger(const std::string& s) {
  if (s == "immediately") return machine::Trigger::Immediately();
  if (s == "after-any-compete") return machine::Trigger::AfterAnyCompete();
  if (s == "never") return machine::Trigger::Never();
  const std::string prefix = "after-process:";
  if (s.rfind(prefix, 0) == 0) {
    const std::string rest = s.substr(prefix.size());
    std::size_t used = 0;
    int pid = -1;
    try {
      pid = std::stoi(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == rest.size() && !rest.empty()) return machine::Trigger::AfterProcess(pid);
  }
  throw ContractViolation("unknown trigger " + s);
}

Json ToJson(const machine::Workload& w) {
  Json triggers = Json::array();
  for (const auto& t : w.triggers) triggers.push_back(TriggerName(t));
  return {{"max_ops", w.max_ops}, {"triggers", triggers}};
}

machine::Workload WorkloadFromJson(const Json& j) {
  machine::Workload w;
  w.max_ops = j.at("max_ops").get<std::vector<int>>();
  for (const auto& t : j.at("triggers")) w.triggers.push_back(ParseTrigger(t.get<std::string>()));
  return w;
}

Json ToJson(const checkers::Linearization& lin) {
  Json arr = Json::array();
  for (const auto& l : lin) {
    arr.push_back({{"pid", l.pid},
                   {"seq", l.seq},
                   {"op", l.op},
                   {"args", ValuesToJson(l.args)},
                   {"response", ToJson(l.response)}});
  }
  return arr;
}

Json TraceJson(const machine::AlgorithmDef& algo, const machine::Workload& workload,
               std::span<const Event> events) {
  return {{"algo", algo.name},
          {"n", algo.n},
          {"workload", ToJson(workload)},
          {"events", ToJson(events, algo)}};
}

std::vector<Event> PathTo(const tree::ExecutionTree& tree, int node) {
  std::vector<int> parent(tree.size(), -1);
  std::vector<const tree::Edge*> via(tree.size(), nullptr);
  for (int id : tree.Order()) {
    for (const auto& e : tree.node(id).edges) {
      if (e.pruned || via[e.child] || e.child == tree::ExecutionTree::kRoot) continue;
      parent[e.child] = id;
      via[e.child] = &e;
    }
  }
  std::vector<Event> path;
  for (int at = node; at != tree::ExecutionTree::kRoot; at = parent[at]) {
    if (!via[at]) throw ContractViolation("node is unreachable");
    path.push_back(via[at]->event);
  }
  return {path.rbegin(), path.rend()};
}

std::string NodeId(const tree::ExecutionTree& tree, int node) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "c%08llx_d%d",
                static_cast<unsigned long long>(tree.config(node).Fingerprint() >> 32),
                tree.node(node).depth);
  return buf;
}

namespace {

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string ToDot(const tree::ExecutionTree& tree, const valency::ValencyMap& map,
                  const std::vector<int>& critical) {
  std::ostringstream os;
  os << "digraph executions {\n"
     << "  node [shape=box, style=filled, fontname=\"monospace\"];\n";
  const auto reach = tree.Reachable();
  std::vector<bool> is_critical(tree.size(), false);
  for (int id : critical) is_critical.at(id) = true;
  for (int id : tree.Order()) {
    if (!reach[id]) continue;
    const auto cls = map.Classify(id);
    const char* color = "lightgray";
    if (cls.kind == valency::ValencyClass::Kind::kBivalent) color = "orange";
    if (cls.kind == valency::ValencyClass::Kind::kUnivalent) color = "lightblue";
    os << "  " << NodeId(tree, id) << " [label=\"" << tree.node(id).depth << "\\n"
       << Escape(cls.ToString()) << "\", fillcolor=" << color;
    if (is_critical[id]) os << ", penwidth=3, color=red";
    os << "];\n";
  }
  for (int id : tree.Order()) {
    if (!reach[id]) continue;
    for (const auto& e : tree.node(id).edges) {
      if (e.pruned) continue;
      os << "  " << NodeId(tree, id) << " -> " << NodeId(tree, e.child) << " [label=\"p"
         << e.event.pid << "\", tooltip=\"" << Escape(e.event.ToString(&tree.algo()))
         << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace contestlab::trace_io
