#ifndef CONTESTLAB_VALENCY_HPP_
#define CONTESTLAB_VALENCY_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "contestlab/checkers.hpp"
#include "contestlab/tree.hpp"

namespace contestlab::valency {

struct ValencyClass {
  enum class Kind { kUnivalent, kBivalent, kUnknown };

  Kind kind = Kind::kUnknown;
  std::optional<Value> value;  // kUnivalent only

  std::string ToString() const;
  friend bool operator==(const ValencyClass&, const ValencyClass&) = default;
};

/// Decide responses reachable below every node. Only completed decides
/// count; a decide that has not responded within the bound contributes
/// nothing.
class ValencyMap {
 public:
  explicit ValencyMap(const tree::ExecutionTree& tree);

  const std::set<Value>& Outcomes(int node) const { return outcomes_.at(node); }
  ValencyClass Classify(int node) const;

 private:
  std::vector<std::set<Value>> outcomes_;
};

ValencyClass Classify(const tree::ExecutionTree& tree, int node);

/// Nodes where every competitor is in the middle of its operation, the
/// referee is idle, the node is bivalent, each competitor's next event leads
/// to a univalent node, and at least two of those valencies differ.
std::vector<int> FindCritical(const tree::ExecutionTree& tree, const ValencyMap& map);
std::vector<int> FindCritical(const tree::ExecutionTree& tree);

enum class NodeStatus { kClosed, kSupervalent, kHelping };
std::string_view StatusName(NodeStatus s);

/// A labeled point of the tree: the node plus the witness state the
/// labeling reaches it with.
struct LabeledPoint {
  int node = tree::ExecutionTree::kRoot;
  checkers::LinState state;

  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

struct PropertyReport {
  std::size_t points = 0;
  std::size_t closed = 0;
  std::size_t supervalent = 0;
  std::size_t helping = 0;
  std::vector<std::string> failures;  // broken valency laws, one line each
  std::size_t indistinguishable_pairs = 0;
  std::vector<std::string> disjoint_hard;
  std::vector<std::string> disjoint_soft;  // bound effects may explain these
};

/// Competitor-only analyses relative to a prefix-closed witness labeling.
/// Following only competitor edges from a point:
///   W        decide outputs found in the labels along the way;
///   closed   every maximal path reaches a label containing decide;
///   helping  not closed, and after every such path one referee step gives
///            a closed point (paths that end at the depth bound are not
///            held against it).
class CompetitorAnalysis {
 public:
  /// Throws ContractViolation unless `labeling` is prefix-closed.
  CompetitorAnalysis(const tree::ExecutionTree& tree, const checkers::Labeling& labeling);

  LabeledPoint Root() const;
  /// Throws ContractViolation if the labeling has no label past `edge`.
  LabeledPoint Next(const LabeledPoint& at, const tree::Edge& edge) const;
  LabeledPoint At(std::span<const machine::Event> events) const;

  /// The decide response in the label at `p`, if decide is in it.
  std::optional<Value> DecideInLabel(const LabeledPoint& p) const;
  const std::set<Value>& W(const LabeledPoint& p);
  bool Closed(const LabeledPoint& p);
  NodeStatus Status(const LabeledPoint& p);

  /// Walks every labeled point and checks the valency laws: |W| >= 2 keeps
  /// decide out of the label; W shrinks along competitor edges; closed
  /// points have closed competitor children; supervalent points have a
  /// supervalent competitor child (unless there is no competitor child);
  /// points before the referee's invocation are supervalent. Also compares
  /// W across closed points indistinguishable to the referee and to some
  /// competitor. Throws ResourceLimit past `point_cap` points.
  PropertyReport CheckProperties(std::size_t point_cap = 2'000'000);

 private:
  struct Info {
    std::optional<std::set<Value>> w;
    std::optional<bool> closed;
    std::optional<bool> helps;  // referee step closes every competitor-only descendant
    std::optional<bool> truncated_below;  // some competitor-only path hits the bound
  };
  struct KeyHash {
    std::size_t operator()(const LabeledPoint& p) const;
  };

  Info& InfoOf(const LabeledPoint& p) { return info_[p]; }
  bool Helps(const LabeledPoint& p);
  bool TruncatedBelow(const LabeledPoint& p);

  const tree::ExecutionTree* tree_;
  const checkers::Labeling* labeling_;
  std::unordered_map<LabeledPoint, Info, KeyHash> info_;
};

}  // namespace contestlab::valency

#endif  // CONTESTLAB_VALENCY_HPP_
