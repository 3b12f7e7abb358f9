#include "contestlab/checkers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

namespace contestlab::checkers {

using machine::Event;
using specs::Call;
using specs::SequentialSpec;

std::string_view ConditionName(Condition c) {
  switch (c) {
    case Condition::kLinearizable:
      return "lin";
    case Condition::kStrong:
      return "strong";
    case Condition::kDecisive:
      return "decisive";
  }
  return "?";
}

std::optional<Condition> ParseCondition(std::string_view name) {
  if (name == "lin") return Condition::kLinearizable;
  if (name == "strong") return Condition::kStrong;
  if (name == "decisive") return Condition::kDecisive;
  return std::nullopt;
}

std::vector<Operation> OperationsOf(std::span<const Event> history) {
  std::vector<Operation> ops;
  std::map<int, int> open;     // pid -> index into ops
  std::map<int, int> issued;   // pid -> invocations so far
  for (std::size_t i = 0; i < history.size(); ++i) {
    const Event& e = history[i];
    if (e.is_step()) continue;
    if (e.is_invoke()) {
      if (open.contains(e.pid)) {
        throw ContractViolation("p" + std::to_string(e.pid) +
                                " invokes with an operation pending");
      }
      Operation op;
      op.pid = e.pid;
      op.seq = issued[e.pid]++;
      op.op = e.op;
      op.args = e.args;
      op.invoke_index = static_cast<int>(i);
      open[e.pid] = static_cast<int>(ops.size());
      ops.push_back(std::move(op));
    } else {
      auto it = open.find(e.pid);
      if (it == open.end()) {
        throw ContractViolation("p" + std::to_string(e.pid) +
                                " responds without a pending operation");
      }
      ops[it->second].respond_index = static_cast<int>(i);
      ops[it->second].response = e.value;
      open.erase(it);
    }
  }
  return ops;
}

std::vector<specs::SeqEntry> EntriesOf(const Linearization& lin) {
  std::vector<specs::SeqEntry> out;
  out.reserve(lin.size());
  for (const auto& l : lin) out.push_back({l.pid, l.op, l.args, l.response});
  return out;
}

std::string ToString(const Linearization& lin) {
  std::string s = "[";
  for (std::size_t i = 0; i < lin.size(); ++i) {
    if (i) s += ", ";
    s += "p" + std::to_string(lin[i].pid) + "." + lin[i].op + "(";
    for (std::size_t j = 0; j < lin[i].args.size(); ++j) {
      if (j) s += ",";
      s += lin[i].args[j].ToString();
    }
    s += ")->" + lin[i].response.ToString();
  }
  return s + "]";
}

std::vector<Linearization> LinearizationsOf(std::span<const Event> history,
                                            const SequentialSpec& spec,
                                            std::size_t cap) {
  const auto ops = OperationsOf(history);
  const std::size_t m = ops.size();
  std::size_t complete = 0;
  for (const auto& o : ops) complete += o.complete() ? 1 : 0;
  // must_precede[b] lists the operations that responded before b was invoked.
  std::vector<std::vector<std::size_t>> must_precede(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (ops[a].complete() && ops[a].respond_index < ops[b].invoke_index) {
        must_precede[b].push_back(a);
      }
    }
  }
  std::vector<Linearization> out;
  Linearization current;
  std::vector<bool> placed(m, false);
  auto dfs = [&](auto&& self, const Value& state, std::size_t placed_complete) -> void {
    if (placed_complete == complete) {
      if (out.size() >= cap) {
        throw ResourceLimit("more than " + std::to_string(cap) + " linearizations");
      }
      out.push_back(current);
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (placed[i]) continue;
      const bool ready = std::all_of(must_precede[i].begin(), must_precede[i].end(),
                                     [&](std::size_t a) { return placed[a]; });
      if (!ready) continue;
      const Operation& o = ops[i];
      Call call{o.pid, o.op, o.args};
      std::vector<specs::Outcome> choices;
      if (o.complete()) {
        if (auto next = spec.Accept(state, call, *o.response)) {
          choices.push_back({*o.response, *next});
        }
      } else {
        choices = spec.Extensions(state, call);
      }
      for (const auto& c : choices) {
        placed[i] = true;
        current.push_back({o.pid, o.seq, o.op, o.args, c.response});
        self(self, c.next, placed_complete + (o.complete() ? 1 : 0));
        current.pop_back();
        placed[i] = false;
      }
    }
  };
  dfs(dfs, spec.Initial(), 0);
  return out;
}

bool IsLinearizationOf(std::span<const Event> history, const Linearization& lin,
                       const SequentialSpec& spec) {
  const auto ops = OperationsOf(history);
  std::map<std::pair<int, int>, const Operation*> by_id;
  for (const auto& o : ops) by_id[{o.pid, o.seq}] = &o;
  std::map<std::pair<int, int>, std::size_t> position;
  for (std::size_t i = 0; i < lin.size(); ++i) {
    const LinOp& l = lin[i];
    auto it = by_id.find({l.pid, l.seq});
    if (it == by_id.end()) return false;
    const Operation& o = *it->second;
    if (o.op != l.op || o.args != l.args) return false;
    if (o.complete() && !(*o.response == l.response)) return false;
    if (!position.emplace(std::make_pair(l.pid, l.seq), i).second) return false;
  }
  for (const auto& o : ops) {
    if (o.complete() && !position.contains({o.pid, o.seq})) return false;
  }
  for (std::size_t i = 0; i < lin.size(); ++i) {
    const Operation& a = *by_id[{lin[i].pid, lin[i].seq}];
    for (std::size_t j = i + 1; j < lin.size(); ++j) {
      const Operation& b = *by_id[{lin[j].pid, lin[j].seq}];
      // b is placed after a, so b must not have finished before a started.
      if (b.complete() && b.respond_index < a.invoke_index) return false;
    }
  }
  const auto entries = EntriesOf(lin);
  return specs::ValidSequence(spec, entries);
}

void LinState::HashInto(Fingerprinter& fp) const {
  spec_state.HashInto(fp);
  fp.AddInt(static_cast<std::int64_t>(slots.size()));
  for (const auto& s : slots) {
    fp.AddByte(static_cast<std::uint8_t>(s.kind));
    fp.AddString(s.op);
    fp.AddInt(static_cast<std::int64_t>(s.args.size()));
    for (const auto& a : s.args) a.HashInto(fp);
    s.response.HashInto(fp);
    fp.AddInt(static_cast<std::int64_t>(s.cut.size()));
    for (int c : s.cut) fp.AddInt(c);
  }
  for (int i : issued) fp.AddInt(i);
  fp.AddInt(static_cast<std::int64_t>(seq.size()));
  for (const auto& l : seq) {
    fp.AddInt(l.pid);
    fp.AddInt(l.seq);
    fp.AddString(l.op);
    fp.AddInt(static_cast<std::int64_t>(l.args.size()));
    for (const auto& a : l.args) a.HashInto(fp);
    l.response.HashInto(fp);
  }
}

namespace {

LinState InitialState(const SequentialSpec& spec, int n) {
  LinState s;
  s.spec_state = spec.Initial();
  s.slots.resize(n);
  s.issued.assign(n, 0);
  return s;
}

// All ways of appending one more open operation to the label of `s`.
void AppendOne(const LinState& s, const SequentialSpec& spec,
               const std::function<void(LinState, LinOp)>& emit) {
  const int n = static_cast<int>(s.slots.size());
  for (int p = 0; p < n; ++p) {
    const Slot& slot = s.slots[p];
    if (slot.kind != Slot::Kind::kOpen) continue;
    const int op_seq = s.issued[p] - 1;
    for (auto& out : spec.Extensions(s.spec_state, Call{p, slot.op, slot.args})) {
      LinState next = s;
      next.spec_state = std::move(out.next);
      next.slots[p].kind = Slot::Kind::kPlaced;
      next.slots[p].response = out.response;
      emit(std::move(next), LinOp{p, op_seq, slot.op, slot.args, out.response});
    }
  }
}

// Prefix-closed specs make one-at-a-time appending complete: every prefix of
// a valid extension is valid.
std::vector<Successor> StrongClosure(const LinState& start, const SequentialSpec& spec) {
  std::vector<Successor> all{{start, {}}};
  std::unordered_set<LinState, LinStateHash> seen{start};
  for (std::size_t i = 0; i < all.size(); ++i) {
    const LinState cur = all[i].state;
    const Linearization placed = all[i].placed;
    AppendOne(cur, spec, [&](LinState next, LinOp op) {
      if (!seen.insert(next).second) return;
      Linearization more = placed;
      more.push_back(std::move(op));
      all.push_back({std::move(next), std::move(more)});
    });
  }
  return all;
}

// Every label obtained by interleaving some open operations (always including
// `must`, whose response is `must_response`) into the label of `s`, each
// after its real-time predecessors, such that the whole result is valid.
// Validity is only required of the final sequence: inserting two operations
// at once may repair what inserting either alone breaks.
std::vector<Successor> DecisiveInsertions(const LinState& s, int must,
                                          const Value& must_response,
                                          const SequentialSpec& spec) {
  struct Candidate {
    int pid;
    std::size_t lo;  // earliest position among the old label's operations
  };
  std::vector<Candidate> open;
  for (int p = 0; p < static_cast<int>(s.slots.size()); ++p) {
    const Slot& slot = s.slots[p];
    if (slot.kind != Slot::Kind::kOpen) continue;
    std::size_t lo = 0;
    for (std::size_t i = 0; i < s.seq.size(); ++i) {
      const LinOp& l = s.seq[i];
      if (l.seq < slot.cut.at(l.pid)) lo = i + 1;
    }
    open.push_back({p, lo});
  }
  std::vector<Successor> out;
  Linearization merged;
  Linearization added;
  std::vector<bool> used(open.size(), false);
  auto dfs = [&](auto&& self, std::size_t i, const Value& state) -> void {
    if (i == s.seq.size()) {
      const bool has_must = std::any_of(added.begin(), added.end(),
                                        [&](const LinOp& l) { return l.pid == must; });
      if (has_must) {
        LinState next = s;
        next.seq = merged;
        next.spec_state = state;
        for (const auto& l : added) {
          next.slots[l.pid].kind = Slot::Kind::kPlaced;
          next.slots[l.pid].response = l.response;
        }
        out.push_back({std::move(next), added});
      }
    } else if (auto next = spec.Accept(state, Call{s.seq[i].pid, s.seq[i].op, s.seq[i].args},
                                       s.seq[i].response)) {
      merged.push_back(s.seq[i]);
      self(self, i + 1, *next);
      merged.pop_back();
    }
    for (std::size_t k = 0; k < open.size(); ++k) {
      if (used[k] || i < open[k].lo) continue;
      const int p = open[k].pid;
      const Slot& slot = s.slots[p];
      const Call call{p, slot.op, slot.args};
      std::vector<specs::Outcome> choices;
      if (p == must) {
        if (auto next = spec.Accept(state, call, must_response)) {
          choices.push_back({must_response, std::move(*next)});
        }
      } else {
        choices = spec.Extensions(state, call);
      }
      for (auto& c : choices) {
        LinOp op{p, s.issued[p] - 1, slot.op, slot.args, c.response};
        used[k] = true;
        merged.push_back(op);
        added.push_back(op);
        self(self, i, c.next);
        added.pop_back();
        merged.pop_back();
        used[k] = false;
      }
    }
  };
  dfs(dfs, 0, spec.Initial());
  std::stable_sort(out.begin(), out.end(), [](const Successor& a, const Successor& b) {
    return a.placed.size() < b.placed.size();
  });
  return out;
}

std::vector<Successor> SuccessorsOf(const LinState& s, const Event& event,
                                    const SequentialSpec& spec, Condition mode) {
  LinState start = s;
  const int p = event.pid;
  if (p < 0 || p >= static_cast<int>(s.slots.size())) {
    throw ContractViolation("event names an unknown process");
  }
  if (event.is_invoke()) {
    if (start.slots[p].kind != Slot::Kind::kNone) return {};
    Slot& slot = start.slots[p];
    slot.kind = Slot::Kind::kOpen;
    slot.op = event.op;
    slot.args = event.args;
    if (mode == Condition::kDecisive) {
      slot.cut.resize(s.slots.size());
      for (std::size_t q = 0; q < s.slots.size(); ++q) {
        slot.cut[q] = s.issued[q] - (s.slots[q].kind == Slot::Kind::kNone ? 0 : 1);
      }
    }
    start.issued[p] += 1;
  } else if (event.is_respond() && start.slots[p].kind == Slot::Kind::kNone) {
    return {};
  }
  std::vector<Successor> all;
  if (mode != Condition::kDecisive) {
    all = StrongClosure(start, spec);
  } else if (!event.is_respond() || start.slots[p].kind == Slot::Kind::kPlaced) {
    // A decisive label that places an operation early can be matched by one
    // that defers it until it is needed, so only responses insert anything.
    all = {{start, {}}};
  } else {
    all = DecisiveInsertions(start, p, event.value, spec);
  }
  if (!event.is_respond()) return all;
  std::vector<Successor> out;
  for (auto& succ : all) {
    Slot& slot = succ.state.slots[p];
    if (slot.kind != Slot::Kind::kPlaced || !(slot.response == event.value)) continue;
    slot = Slot{};
    out.push_back(std::move(succ));
  }
  return out;
}

int ProcessCount(std::span<const Event> history) {
  int n = 1;
  for (const auto& e : history) n = std::max(n, e.pid + 1);
  return n;
}

// Sorted, deduplicated frontier of strong states.
using Frontier = std::vector<LinState>;

void Canonicalize(Frontier& f) {
  std::vector<std::pair<std::uint64_t, std::size_t>> keys;
  keys.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) keys.push_back({FingerprintOf(f[i]), i});
  std::sort(keys.begin(), keys.end());
  Frontier out;
  out.reserve(f.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const LinState& s = f[keys[i].second];
    bool dup = false;
    for (std::size_t j = i; j-- > 0 && keys[j].first == keys[i].first;) {
      if (f[keys[j].second] == s) dup = true;
    }
    if (!dup) out.push_back(s);
  }
  f = std::move(out);
}

Frontier Advance(const Frontier& f, const Event& e, const SequentialSpec& spec) {
  Frontier next;
  for (const auto& s : f) {
    for (auto& succ : SuccessorsOf(s, e, spec, Condition::kStrong)) {
      next.push_back(std::move(succ.state));
    }
  }
  Canonicalize(next);
  return next;
}

}  // namespace

Game::Game(const tree::ExecutionTree& tree, SequentialSpec spec, Condition mode)
    : tree_(&tree), spec_(std::move(spec)), mode_(mode), memo_(tree.size()) {
  if (mode == Condition::kLinearizable) {
    throw ContractViolation("the labeling game is for strong or decisive mode");
  }
}

LinState Game::Root() const { return InitialState(spec_, tree_->algo().n); }

std::vector<Successor> Game::Successors(const LinState& s, const Event& event) const {
  return SuccessorsOf(s, event, spec_, mode_);
}

bool Game::Viable(int node, const LinState& s) {
  auto& memo = memo_[node];
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  bool ok = true;
  for (const auto& edge : tree_->node(node).edges) {
    if (edge.pruned) continue;
    bool any = false;
    for (const auto& succ : Successors(s, edge.event)) {
      if (Viable(edge.child, succ.state)) {
        any = true;
        break;
      }
    }
    if (!any) {
      ok = false;
      break;
    }
  }
  memo_[node].emplace(s, ok);
  ++memo_entries_;
  return ok;
}

Labeling::Point Labeling::Root() const {
  return Point{tree::ExecutionTree::kRoot, game_->Root(), {}};
}

Labeling::Point Labeling::Next(const Point& at, const tree::Edge& edge) const {
  for (auto& succ : game_->Successors(at.state, edge.event)) {
    if (!game_->Viable(edge.child, succ.state)) continue;
    Point next{edge.child, std::move(succ.state), {}};
    if (mode() == Condition::kStrong) {
      next.label = at.label;
      next.label.insert(next.label.end(), succ.placed.begin(), succ.placed.end());
    } else {
      next.label = next.state.seq;
    }
    return next;
  }
  throw ContractViolation("labeling has no viable successor for " +
                          edge.event.ToString());
}

LinState Labeling::NextState(const LinState& at, const tree::Edge& edge) const {
  for (auto& succ : game_->Successors(at, edge.event)) {
    if (game_->Viable(edge.child, succ.state)) return std::move(succ.state);
  }
  throw ContractViolation("labeling has no viable successor for " +
                          edge.event.ToString());
}

Linearization Labeling::LabelOf(std::span<const Event> events) const {
  Point p = Root();
  const auto& t = game_->tree();
  for (const auto& ev : events) {
    const auto& edges = t.node(p.node).edges;
    auto it = std::find_if(edges.begin(), edges.end(),
                           [&](const tree::Edge& e) { return e.event == ev; });
    if (it == edges.end()) throw ContractViolation("execution is not in the tree");
    p = Next(p, *it);
  }
  return p.label;
}

Verdict CheckLinearizable(std::span<const Event> history, const SequentialSpec& spec) {
  Verdict v;
  v.condition = Condition::kLinearizable;
  Frontier f{InitialState(spec, ProcessCount(history))};
  for (const auto& e : history) {
    f = Advance(f, e, spec);
    v.explored += f.size();
    if (f.empty()) break;
  }
  v.holds = !f.empty();
  if (!v.holds) v.violation_path.assign(history.begin(), history.end());
  return v;
}

Verdict CheckLinearizable(const tree::ExecutionTree& tree, const SequentialSpec& spec) {
  Verdict v;
  v.condition = Condition::kLinearizable;
  struct Item {
    int node;
    Frontier frontier;
    int parent;
    const tree::Edge* via;
  };
  std::vector<Item> items;
  std::unordered_map<int, std::vector<std::size_t>> by_node;
  items.push_back({tree::ExecutionTree::kRoot,
                   {InitialState(spec, tree.algo().n)}, -1, nullptr});
  by_node[tree::ExecutionTree::kRoot].push_back(0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const int node = items[i].node;
    for (const auto& edge : tree.node(node).edges) {
      if (edge.pruned) continue;
      Frontier next = Advance(items[i].frontier, edge.event, spec);
      ++v.explored;
      if (next.empty()) {
        std::vector<Event> path{edge.event};
        for (int at = static_cast<int>(i); items[at].via; at = items[at].parent) {
          path.push_back(items[at].via->event);
        }
        std::reverse(path.begin(), path.end());
        v.holds = false;
        v.violation_path = std::move(path);
        return v;
      }
      auto& seen = by_node[edge.child];
      const bool dup = std::any_of(seen.begin(), seen.end(), [&](std::size_t k) {
        return items[k].frontier == next;
      });
      if (dup) continue;
      seen.push_back(items.size());
      items.push_back({edge.child, std::move(next), static_cast<int>(i), &edge});
    }
  }
  v.holds = true;
  return v;
}

namespace {

Verdict SolveGame(const tree::ExecutionTree& tree, const SequentialSpec& spec,
                  Condition mode) {
  auto game = std::make_shared<Game>(tree, spec, mode);
  Verdict v;
  v.condition = mode;
  v.holds = game->Viable(tree::ExecutionTree::kRoot, game->Root());
  v.explored = game->memo_size();
  if (v.holds) v.witness.emplace(std::move(game));
  return v;
}

}  // namespace

Verdict CheckStrong(const tree::ExecutionTree& tree, const SequentialSpec& spec) {
  return SolveGame(tree, spec, Condition::kStrong);
}

Verdict CheckDecisive(const tree::ExecutionTree& tree, const SequentialSpec& spec) {
  return SolveGame(tree, spec, Condition::kDecisive);
}

Verdict Check(const tree::ExecutionTree& tree, const SequentialSpec& spec,
              Condition condition) {
  switch (condition) {
    case Condition::kLinearizable:
      return CheckLinearizable(tree, spec);
    case Condition::kStrong:
      return CheckStrong(tree, spec);
    case Condition::kDecisive:
      return CheckDecisive(tree, spec);
  }
  throw ContractViolation("unknown condition");
}

namespace {

bool IsPrefix(const Linearization& a, const Linearization& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool IsSubsequence(const Linearization& a, const Linearization& b) {
  std::size_t i = 0;
  for (const auto& x : b) {
    if (i < a.size() && a[i] == x) ++i;
  }
  return i == a.size();
}

}  // namespace

namespace {

// Everything the witness check below a point depends on. Executions that
// differ only in the order of steps share it.
struct CheckKey {
  int node;
  std::vector<Event> history;
  LinState state;
  Linearization label;

  friend bool operator==(const CheckKey&, const CheckKey&) = default;
};

struct CheckKeyHash {
  std::size_t operator()(const CheckKey& k) const {
    Fingerprinter fp;
    fp.AddInt(k.node);
    for (const auto& e : k.history) e.HashInto(fp);
    k.state.HashInto(fp);
    LinState label_only;
    label_only.seq = k.label;
    label_only.HashInto(fp);
    return static_cast<std::size_t>(fp.digest());
  }
};

}  // namespace

std::optional<std::string> VerifyWitness(const tree::ExecutionTree& tree,
                                         const Labeling& labeling,
                                         const SequentialSpec& spec,
                                         std::size_t path_cap) {
  std::vector<Event> path;
  std::vector<Event> history;
  std::unordered_set<CheckKey, CheckKeyHash> done;
  std::optional<std::string> defect;
  auto describe = [&](const std::string& what, const Linearization& label) {
    std::string s = what + " after [";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) s += "; ";
      s += path[i].ToString(&tree.algo());
    }
    return s + "]: " + ToString(label);
  };
  auto walk = [&](auto&& self, const Labeling::Point& at) -> void {
    if (!done.insert(CheckKey{at.node, history, at.state, at.label}).second) return;
    if (done.size() > path_cap) {
      throw ResourceLimit("witness check exceeds " + std::to_string(path_cap) +
                          " distinct executions");
    }
    if (!IsLinearizationOf(history, at.label, spec)) {
      defect = describe("label is not a linearization", at.label);
      return;
    }
    for (const auto& edge : tree.node(at.node).edges) {
      if (edge.pruned) continue;
      Labeling::Point next = labeling.Next(at, edge);
      path.push_back(edge.event);
      const bool grows = labeling.mode() == Condition::kStrong
                             ? IsPrefix(at.label, next.label)
                             : IsSubsequence(at.label, next.label);
      if (!grows) {
        defect = describe(labeling.mode() == Condition::kStrong
                              ? "label does not extend its parent's"
                              : "label does not contain its parent's",
                          next.label);
        return;
      }
      if (!edge.event.is_step()) history.push_back(edge.event);
      self(self, next);
      if (defect) return;
      if (!edge.event.is_step()) history.pop_back();
      path.pop_back();
    }
  };
  walk(walk, labeling.Root());
  return defect;
}

std::vector<std::vector<Event>> Minimize(const tree::ExecutionTree& input,
                                         const SequentialSpec& spec,
                                         Condition condition,
                                         std::size_t leaf_cap) {
  tree::ExecutionTree t = input;
  if (Check(t, spec, condition).holds) {
    throw ContractViolation("minimize needs a violating tree");
  }
  bool changed = true;
  while (changed) {
    changed = false;
    auto reach = t.Reachable();
    for (int id : t.Order()) {
      if (!reach[id]) continue;
      for (std::size_t e = 0; e < t.node(id).edges.size(); ++e) {
        if (t.node(id).edges[e].pruned) continue;
        t.SetPruned(id, e, true);
        if (Check(t, spec, condition).holds) {
          t.SetPruned(id, e, false);
        } else {
          changed = true;
          reach = t.Reachable();
        }
      }
    }
  }
  return t.LeafExecutions(leaf_cap);
}

bool Reverify(const machine::AlgorithmDef& algo, const machine::Workload& workload,
              std::span<const std::vector<Event>> executions,
              const SequentialSpec& spec, Condition condition) {
  const auto t = tree::FromExecutions(algo, workload, executions);
  return !Check(t, spec, condition).holds;
}

}  // namespace contestlab::checkers
