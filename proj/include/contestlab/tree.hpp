#ifndef CONTESTLAB_TREE_HPP_
#define CONTESTLAB_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "contestlab/machine.hpp"

namespace contestlab::tree {

inline constexpr std::size_t kDefaultNodeCap = 1'000'000;

struct Edge {
  machine::Event event;
  int child = -1;
  bool pruned = false;
};

struct Node {
  int config = -1;  // index into the configuration table
  int depth = 0;
  std::vector<Edge> edges;  // ordered by pid
  /// The node sits at the depth bound while events were still enabled.
  bool truncated = false;
};

/// The bounded tree of well-formed executions.
///
/// Enumerate stores it as a DAG: a node is identified by (configuration,
/// depth), since everything below an execution is a function of its final
/// configuration and remaining depth. Executions are the root paths, so the
/// semantics is the tree over event sequences; ExecutionCount() gives the
/// size of that unfolded tree. FromExecutions builds an unshared trie.
class ExecutionTree {
 public:
  ExecutionTree(machine::AlgorithmDef algo, machine::Workload workload,
                int depth_bound);

  const machine::AlgorithmDef& algo() const { return algo_; }
  const machine::Workload& workload() const { return workload_; }
  int depth_bound() const { return depth_bound_; }

  static constexpr int kRoot = 0;
  std::size_t size() const { return nodes_.size(); }
  const Node& node(int id) const { return nodes_.at(id); }
  const machine::Configuration& config(int node_id) const {
    return configs_.at(nodes_.at(node_id).config);
  }
  std::size_t config_count() const { return configs_.size(); }

  /// Node ids in nondecreasing depth order (parents before children).
  std::vector<int> Order() const;

  /// Number of executions (root paths over unpruned edges), i.e. nodes of
  /// the unfolded tree. Saturates at UINT64_MAX.
  std::uint64_t ExecutionCount() const;

  void SetPruned(int node_id, std::size_t edge, bool pruned);
  void ClearPruning();

  /// Nodes reachable from the root over unpruned edges.
  std::vector<bool> Reachable() const;

  /// Event sequences of every root-to-leaf path over unpruned edges (a leaf
  /// has no unpruned edge). Throws ResourceLimit past `cap` paths.
  std::vector<std::vector<machine::Event>> LeafExecutions(std::size_t cap) const;

  /// Follows `events` from the root; -1 if some event is not an edge.
  int Find(std::span<const machine::Event> events) const;

  // Construction.
  int AddConfig(machine::Configuration c);
  int AddNode(int config, int depth);
  void AddEdge(int parent, machine::Event event, int child);
  void SetTruncated(int node_id, bool t) { nodes_.at(node_id).truncated = t; }
  void SortEdgesByPid();

 private:
  machine::AlgorithmDef algo_;
  machine::Workload workload_;
  int depth_bound_;
  std::vector<machine::Configuration> configs_;
  std::vector<Node> nodes_;
};

/// All well-formed executions with at most `depth` events, children ordered
/// by pid. Throws ResourceLimit when more than `node_cap` nodes would be
/// materialized and ContractViolation for a negative depth.
ExecutionTree Enumerate(const machine::AlgorithmDef& algo,
                        const machine::Workload& workload, int depth,
                        std::size_t node_cap = kDefaultNodeCap);

/// The prefix-closed tree of the given executions, one node per distinct
/// prefix. Every execution is replayed, so malformed input throws
/// ContractViolation.
ExecutionTree FromExecutions(const machine::AlgorithmDef& algo,
                             const machine::Workload& workload,
                             std::span<const std::vector<machine::Event>> executions);

}  // namespace contestlab::tree

#endif  // CONTESTLAB_TREE_HPP_
