#include "contestlab/tree.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace contestlab::tree {

using machine::Configuration;
using machine::Event;

ExecutionTree::ExecutionTree(machine::AlgorithmDef algo,
                             machine::Workload workload, int depth_bound)
    : algo_(std::move(algo)),
      workload_(std::move(workload)),
      depth_bound_(depth_bound) {}

int ExecutionTree::AddConfig(Configuration c) {
  configs_.push_back(std::move(c));
  return static_cast<int>(configs_.size()) - 1;
}

int ExecutionTree::AddNode(int config, int depth) {
  nodes_.push_back(Node{config, depth, {}, false});
  return static_cast<int>(nodes_.size()) - 1;
}

void ExecutionTree::AddEdge(int parent, Event event, int child) {
  nodes_.at(parent).edges.push_back(Edge{std::move(event), child, false});
}

std::vector<int> ExecutionTree::Order() const {
  std::vector<int> ids(nodes_.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    return nodes_[a].depth < nodes_[b].depth;
  });
  return ids;
}

std::uint64_t ExecutionTree::ExecutionCount() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> paths(nodes_.size(), 0);
  if (nodes_.empty()) return 0;
  paths[kRoot] = 1;
  std::uint64_t total = 0;
  for (int id : Order()) {
    const std::uint64_t here = paths[id];
    if (here == 0) continue;
    total = (total > kMax - here) ? kMax : total + here;
    for (const auto& e : nodes_[id].edges) {
      if (e.pruned) continue;
      auto& c = paths[e.child];
      c = (c > kMax - here) ? kMax : c + here;
    }
  }
  return total;
}

void ExecutionTree::SetPruned(int node_id, std::size_t edge, bool pruned) {
  nodes_.at(node_id).edges.at(edge).pruned = pruned;
}

void ExecutionTree::ClearPruning() {
  for (auto& n : nodes_) {
    for (auto& e : n.edges) e.pruned = false;
  }
}

std::vector<bool> ExecutionTree::Reachable() const {
  std::vector<bool> seen(nodes_.size(), false);
  if (nodes_.empty()) return seen;
  std::vector<int> stack{kRoot};
  seen[kRoot] = true;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    for (const auto& e : nodes_[id].edges) {
      if (!e.pruned && !seen[e.child]) {
        seen[e.child] = true;
        stack.push_back(e.child);
      }
    }
  }
  return seen;
}

std::vector<std::vector<Event>> ExecutionTree::LeafExecutions(
    std::size_t cap) const {
  std::vector<std::vector<Event>> out;
  std::vector<Event> path;
  auto walk = [&](auto&& self, int id) -> void {
    bool leaf = true;
    for (const auto& e : nodes_[id].edges) {
      if (e.pruned) continue;
      leaf = false;
      path.push_back(e.event);
      self(self, e.child);
      path.pop_back();
    }
    if (!leaf) return;
    if (out.size() >= cap) {
      throw ResourceLimit("more than " + std::to_string(cap) + " leaf executions");
    }
    out.push_back(path);
  };
  walk(walk, kRoot);
  return out;
}

void ExecutionTree::SortEdgesByPid() {
  for (auto& n : nodes_) {
    std::stable_sort(n.edges.begin(), n.edges.end(), [](const Edge& a, const Edge& b) {
      return a.event.pid < b.event.pid;
    });
  }
}

int ExecutionTree::Find(std::span<const Event> events) const {
  int id = kRoot;
  for (const auto& ev : events) {
    const auto& edges = nodes_[id].edges;
    auto it = std::find_if(edges.begin(), edges.end(),
                           [&](const Edge& e) { return e.event == ev; });
    if (it == edges.end()) return -1;
    id = it->child;
  }
  return id;
}

ExecutionTree Enumerate(const machine::AlgorithmDef& algo,
                        const machine::Workload& workload, int depth,
                        std::size_t node_cap) {
  if (depth < 0) throw ContractViolation("depth must be >= 0");
  if (node_cap < 1) throw ContractViolation("node cap must be >= 1");
  workload.Validate(algo.n);
  ExecutionTree tree(algo, workload, depth);
  std::unordered_map<Configuration, int> config_ids;
  auto intern = [&](Configuration c) {
    auto it = config_ids.find(c);
    if (it != config_ids.end()) return it->second;
    int id = tree.AddConfig(c);
    config_ids.emplace(std::move(c), id);
    return id;
  };
  tree.AddNode(intern(machine::Initial(algo)), 0);
  std::vector<int> level{ExecutionTree::kRoot};
  for (int d = 0; d < depth && !level.empty(); ++d) {
    std::unordered_map<int, int> next_ids;  // config id -> node at depth d+1
    std::vector<int> next_level;
    for (int id : level) {
      const Configuration current = tree.config(id);
      for (machine::ProcessId p = 0; p < algo.n; ++p) {
        for (auto& t : machine::Step(algo, current, p, workload)) {
          const int cfg = intern(std::move(t.next));
          auto it = next_ids.find(cfg);
          int child;
          if (it != next_ids.end()) {
            child = it->second;
          } else {
            if (tree.size() >= node_cap) {
              throw ResourceLimit("execution tree exceeds the node cap of " +
                                  std::to_string(node_cap));
            }
            child = tree.AddNode(cfg, d + 1);
            next_ids.emplace(cfg, child);
            next_level.push_back(child);
          }
          tree.AddEdge(id, std::move(t.event), child);
        }
      }
    }
    level = std::move(next_level);
  }
  // Nodes at the bound that still have enabled events.
  for (int id : level) {
    const Configuration& c = tree.config(id);
    for (machine::ProcessId p = 0; p < algo.n; ++p) {
      if (!machine::Step(algo, c, p, workload).empty()) {
        tree.SetTruncated(id, true);
        break;
      }
    }
  }
  return tree;
}

ExecutionTree FromExecutions(const machine::AlgorithmDef& algo,
                             const machine::Workload& workload,
                             std::span<const std::vector<Event>> executions) {
  workload.Validate(algo.n);
  int bound = 0;
  for (const auto& e : executions) bound = std::max<int>(bound, e.size());
  ExecutionTree tree(algo, workload, bound);
  tree.AddNode(tree.AddConfig(machine::Initial(algo)), 0);
  for (const auto& exec : executions) {
    machine::Replay(algo, workload, exec);  // validates
    int id = ExecutionTree::kRoot;
    for (const auto& ev : exec) {
      const auto& edges = tree.node(id).edges;
      auto it = std::find_if(edges.begin(), edges.end(),
                             [&](const Edge& e) { return e.event == ev; });
      if (it != edges.end()) {
        id = it->child;
        continue;
      }
      auto ts = machine::Step(algo, tree.config(id), ev.pid, workload);
      const int child =
          tree.AddNode(tree.AddConfig(std::move(ts.front().next)),
                       tree.node(id).depth + 1);
      tree.AddEdge(id, ev, child);
      id = child;
    }
  }
  tree.SortEdgesByPid();
  return tree;
}

}  // namespace contestlab::tree
