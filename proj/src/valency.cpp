#include "contestlab/valency.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace contestlab::valency {

using checkers::Slot;
using machine::kReferee;

std::string ValencyClass::ToString() const {
  switch (kind) {
    case Kind::kUnivalent:
      return "univalent(" + value->ToString() + ")";
    case Kind::kBivalent:
      return "bivalent";
    case Kind::kUnknown:
      return "unknown";
  }
  return "?";
}

ValencyMap::ValencyMap(const tree::ExecutionTree& tree) : outcomes_(tree.size()) {
  auto order = tree.Order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int id = *it;
    auto& out = outcomes_[id];
    if (auto r = tree.config(id).referee_result()) out.insert(*r);
    for (const auto& e : tree.node(id).edges) {
      if (e.pruned) continue;
      const auto& below = outcomes_[e.child];
      out.insert(below.begin(), below.end());
    }
  }
}

ValencyClass ValencyMap::Classify(int node) const {
  const auto& out = outcomes_.at(node);
  if (out.empty()) return {ValencyClass::Kind::kUnknown, std::nullopt};
  if (out.size() == 1) return {ValencyClass::Kind::kUnivalent, *out.begin()};
  return {ValencyClass::Kind::kBivalent, std::nullopt};
}

ValencyClass Classify(const tree::ExecutionTree& tree, int node) {
  return ValencyMap(tree).Classify(node);
}

std::vector<int> FindCritical(const tree::ExecutionTree& tree, const ValencyMap& map) {
  std::vector<int> out;
  for (int id : tree.Order()) {
    const auto& c = tree.config(id);
    if (c.procs[kReferee].active) continue;
    bool all_active = true;
    for (std::size_t q = 1; q < c.procs.size(); ++q) all_active &= c.procs[q].active;
    if (!all_active || c.procs.size() < 2) continue;
    if (map.Classify(id).kind != ValencyClass::Kind::kBivalent) continue;
    std::set<Value> child_values;
    std::set<int> stepped;
    bool all_univalent = true;
    for (const auto& e : tree.node(id).edges) {
      if (e.pruned || !machine::IsCompetitor(e.event.pid)) continue;
      const auto cls = map.Classify(e.child);
      if (cls.kind != ValencyClass::Kind::kUnivalent) {
        all_univalent = false;
        break;
      }
      child_values.insert(*cls.value);
      stepped.insert(e.event.pid);
    }
    if (all_univalent && stepped.size() + 1 == c.procs.size() &&
        child_values.size() >= 2) {
      out.push_back(id);
    }
  }
  return out;
}

std::vector<int> FindCritical(const tree::ExecutionTree& tree) {
  return FindCritical(tree, ValencyMap(tree));
}

std::string_view StatusName(NodeStatus s) {
  switch (s) {
    case NodeStatus::kClosed:
      return "closed";
    case NodeStatus::kSupervalent:
      return "supervalent";
    case NodeStatus::kHelping:
      return "helping";
  }
  return "?";
}

std::size_t CompetitorAnalysis::KeyHash::operator()(const LabeledPoint& p) const {
  Fingerprinter fp;
  fp.AddInt(p.node);
  p.state.HashInto(fp);
  return static_cast<std::size_t>(fp.digest());
}

CompetitorAnalysis::CompetitorAnalysis(const tree::ExecutionTree& tree,
                                       const checkers::Labeling& labeling)
    : tree_(&tree), labeling_(&labeling) {
  if (labeling.mode() != checkers::Condition::kStrong) {
    throw ContractViolation("competitor valency needs a prefix-closed labeling");
  }
  if (&labeling.game().tree() != &tree) {
    throw ContractViolation("labeling belongs to a different tree");
  }
}

LabeledPoint CompetitorAnalysis::Root() const {
  return {tree::ExecutionTree::kRoot, labeling_->Root().state};
}

LabeledPoint CompetitorAnalysis::Next(const LabeledPoint& at, const tree::Edge& edge) const {
  return {edge.child, labeling_->NextState(at.state, edge)};
}

LabeledPoint CompetitorAnalysis::At(std::span<const machine::Event> events) const {
  LabeledPoint p = Root();
  for (const auto& ev : events) {
    const auto& edges = tree_->node(p.node).edges;
    auto it = std::find_if(edges.begin(), edges.end(),
                           [&](const tree::Edge& e) { return e.event == ev; });
    if (it == edges.end()) throw ContractViolation("execution is not in the tree");
    p = Next(p, *it);
  }
  return p;
}

std::optional<Value> CompetitorAnalysis::DecideInLabel(const LabeledPoint& p) const {
  const Slot& ref = p.state.slots.at(kReferee);
  if (ref.kind == Slot::Kind::kPlaced) return ref.response;
  if (ref.kind == Slot::Kind::kNone && p.state.issued.at(kReferee) > 0) {
    // The decide completed, so the label holds it with its actual response.
    return tree_->config(p.node).referee_result();
  }
  return std::nullopt;
}

const std::set<Value>& CompetitorAnalysis::W(const LabeledPoint& p) {
  Info& info = InfoOf(p);
  if (info.w) return *info.w;
  std::set<Value> w;
  if (auto d = DecideInLabel(p)) w.insert(*d);
  for (const auto& e : tree_->node(p.node).edges) {
    if (e.pruned || !machine::IsCompetitor(e.event.pid)) continue;
    const auto& below = W(Next(p, e));
    w.insert(below.begin(), below.end());
  }
  info.w = std::move(w);
  return *info.w;
}

bool CompetitorAnalysis::Closed(const LabeledPoint& p) {
  Info& info = InfoOf(p);
  if (info.closed) return *info.closed;
  bool closed = DecideInLabel(p).has_value();
  if (!closed) {
    bool any = false;
    bool all = true;
    for (const auto& e : tree_->node(p.node).edges) {
      if (e.pruned || !machine::IsCompetitor(e.event.pid)) continue;
      any = true;
      if (!Closed(Next(p, e))) {
        all = false;
        break;
      }
    }
    closed = any && all;
  }
  info.closed = closed;
  return closed;
}

bool CompetitorAnalysis::Helps(const LabeledPoint& p) {
  Info& info = InfoOf(p);
  if (info.helps) return *info.helps;
  const auto& node = tree_->node(p.node);
  bool ok = node.truncated;
  for (const auto& e : node.edges) {
    if (!e.pruned && e.event.pid == kReferee) ok = Closed(Next(p, e));
  }
  for (const auto& e : node.edges) {
    if (!ok) break;
    if (e.pruned || !machine::IsCompetitor(e.event.pid)) continue;
    ok = Helps(Next(p, e));
  }
  info.helps = ok;
  return ok;
}

bool CompetitorAnalysis::TruncatedBelow(const LabeledPoint& p) {
  Info& info = InfoOf(p);
  if (info.truncated_below) return *info.truncated_below;
  const auto& node = tree_->node(p.node);
  bool t = node.truncated;
  for (const auto& e : node.edges) {
    if (t) break;
    if (e.pruned || !machine::IsCompetitor(e.event.pid)) continue;
    t = TruncatedBelow(Next(p, e));
  }
  info.truncated_below = t;
  return t;
}

NodeStatus CompetitorAnalysis::Status(const LabeledPoint& p) {
  if (Closed(p)) return NodeStatus::kClosed;
  return Helps(p) ? NodeStatus::kHelping : NodeStatus::kSupervalent;
}

namespace {

std::string Describe(const LabeledPoint& p, const tree::ExecutionTree& t) {
  return "node " + std::to_string(p.node) + " (depth " +
         std::to_string(t.node(p.node).depth) + ")";
}

std::string SetString(const std::set<Value>& s) {
  std::string out = "{";
  for (const auto& v : s) {
    if (out.size() > 1) out += ",";
    out += v.ToString();
  }
  return out + "}";
}

}  // namespace

PropertyReport CompetitorAnalysis::CheckProperties(std::size_t point_cap) {
  PropertyReport report;
  std::unordered_set<LabeledPoint, KeyHash> seen;
  std::vector<LabeledPoint> stack{Root()};
  std::vector<LabeledPoint> closed_points;
  seen.insert(stack.front());
  while (!stack.empty()) {
    const LabeledPoint p = stack.back();
    stack.pop_back();
    if (++report.points > point_cap) {
      throw ResourceLimit("more than " + std::to_string(point_cap) + " labeled points");
    }
    const NodeStatus status = Status(p);
    switch (status) {
      case NodeStatus::kClosed:
        ++report.closed;
        closed_points.push_back(p);
        break;
      case NodeStatus::kHelping:
        ++report.helping;
        ++report.supervalent;
        break;
      case NodeStatus::kSupervalent:
        ++report.supervalent;
        break;
    }
    const auto& w = W(p);
    const auto decide = DecideInLabel(p);
    if (w.size() >= 2 && decide) {
      report.failures.push_back(Describe(p, *tree_) + ": W=" + SetString(w) +
                                " but decide is already in the label");
    }
    bool any_competitor = false;
    bool some_supervalent = false;
    for (const auto& e : tree_->node(p.node).edges) {
      if (e.pruned) continue;
      const LabeledPoint c = Next(p, e);
      if (machine::IsCompetitor(e.event.pid)) {
        any_competitor = true;
        const auto& wc = W(c);
        if (!std::includes(w.begin(), w.end(), wc.begin(), wc.end())) {
          report.failures.push_back(Describe(c, *tree_) + ": W=" + SetString(wc) +
                                    " is not inside its parent's " + SetString(w));
        }
        const bool child_closed = Closed(c);
        if (status == NodeStatus::kClosed && !child_closed) {
          report.failures.push_back(Describe(c, *tree_) +
                                    ": competitor child of a closed point is not closed");
        }
        some_supervalent |= !child_closed;
      }
      if (seen.insert(c).second) stack.push_back(c);
    }
    if (status != NodeStatus::kClosed && any_competitor && !some_supervalent) {
      report.failures.push_back(Describe(p, *tree_) +
                                ": supervalent with no supervalent competitor child");
    }
    if (p.state.issued[kReferee] == 0 && status == NodeStatus::kClosed) {
      report.failures.push_back(Describe(p, *tree_) +
                                ": closed before the referee invoked decide");
    }
  }

  // Closed points the referee cannot tell apart, compared per competitor.
  const bool long_lived =
      labeling_->game().spec().kind() == specs::SpecKind::kLongLivedContest;
  const auto& workload = tree_->workload();
  std::map<std::uint64_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < closed_points.size(); ++i) {
    const auto& c = tree_->config(closed_points[i].node);
    Fingerprinter fp;
    for (const auto& o : c.objects) o.HashInto(fp);
    c.procs[kReferee].HashInto(fp);
    groups[fp.digest()].push_back(i);
  }
  for (const auto& [key, members] : groups) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const LabeledPoint& pa = closed_points[members[a]];
        const LabeledPoint& pb = closed_points[members[b]];
        const auto& ca = tree_->config(pa.node);
        const auto& cb = tree_->config(pb.node);
        if (!machine::Indistinguishable(ca, cb, kReferee)) continue;
        for (int q = 1; q < tree_->algo().n; ++q) {
          if (!machine::Indistinguishable(ca, cb, q)) continue;
          ++report.indistinguishable_pairs;
          const auto& wa = W(pa);
          const auto& wb = W(pb);
          const bool meet = std::any_of(wa.begin(), wa.end(),
                                        [&](const Value& v) { return wb.contains(v); });
          if (meet) continue;
          std::int64_t top = 0;
          for (const auto& v : wa) top = std::max(top, v.kind() == Value::Kind::kInt ? v.as_int() : 0);
          for (const auto& v : wb) top = std::max(top, v.kind() == Value::Kind::kInt ? v.as_int() : 0);
          // q running alone can push its count to its quota; only then does
          // the bounded tree contain the solo runs that force a common output.
          const bool hard = long_lived && workload.max_ops[q] > top && !TruncatedBelow(pa) &&
                            !TruncatedBelow(pb);
          const std::string line = Describe(pa, *tree_) + " and " + Describe(pb, *tree_) +
                                   " look alike to p0 and p" + std::to_string(q) +
                                   " but W=" + SetString(wa) + " vs " + SetString(wb);
          (hard ? report.disjoint_hard : report.disjoint_soft).push_back(line);
        }
      }
    }
  }
  return report;
}

}  // namespace contestlab::valency
