#ifndef CONTESTLAB_CHECKERS_HPP_
#define CONTESTLAB_CHECKERS_HPP_

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "contestlab/machine.hpp"
#include "contestlab/specs.hpp"
#include "contestlab/tree.hpp"

namespace contestlab::checkers {

enum class Condition { kLinearizable, kStrong, kDecisive };

/// "lin", "strong", "decisive".
std::string_view ConditionName(Condition c);
std::optional<Condition> ParseCondition(std::string_view name);

/// An operation of an execution, identified by (pid, seq) where seq counts
/// that process's invocations from 0.
struct Operation {
  int pid = 0;
  int seq = 0;
  std::string op;
  std::vector<Value> args;
  int invoke_index = -1;   // position in the history
  int respond_index = -1;  // -1 while pending
  std::optional<Value> response;

  bool complete() const { return response.has_value(); }
};

/// The operations of a history (steps, if present, are skipped). Throws
/// ContractViolation if a process responds without a pending invocation or
/// invokes while one is pending.
std::vector<Operation> OperationsOf(std::span<const machine::Event> history);

struct LinOp {
  int pid = 0;
  int seq = 0;
  std::string op;
  std::vector<Value> args;
  Value response;

  friend bool operator==(const LinOp&, const LinOp&) = default;
  friend auto operator<=>(const LinOp&, const LinOp&) = default;
};

using Linearization = std::vector<LinOp>;

std::vector<specs::SeqEntry> EntriesOf(const Linearization& lin);
std::string ToString(const Linearization& lin);

/// Every linearization of `history`: real-time consistent orders of all
/// complete operations plus any subset of pending ones, pending responses
/// drawn from the sequential relation. Throws ResourceLimit past `cap` results.
std::vector<Linearization> LinearizationsOf(std::span<const machine::Event> history,
                                            const specs::SequentialSpec& spec,
                                            std::size_t cap);

/// Direct check of the definition: each complete operation appears once with
/// its actual response, nothing un-invoked appears, real-time order holds and
/// the sequence is valid for `spec`.
bool IsLinearizationOf(std::span<const machine::Event> history,
                       const Linearization& lin,
                       const specs::SequentialSpec& spec);

/// Per-process view of an operation inside a linearization search.
struct Slot {
  enum class Kind { kNone, kOpen, kPlaced };

  Kind kind = Kind::kNone;
  std::string op;
  std::vector<Value> args;
  Value response;        // kPlaced only
  std::vector<int> cut;  // completed counts per process at invocation

  friend bool operator==(const Slot&, const Slot&) = default;
};

/// What a search needs to know about a linearization of an execution
/// prefix. Strong mode keeps only the object state reached by the label;
/// decisive mode keeps the whole label because later operations may be
/// inserted anywhere in it.
struct LinState {
  Value spec_state;
  std::vector<Slot> slots;  // one per process
  std::vector<int> issued;  // invocations per process
  Linearization seq;        // decisive mode only

  void HashInto(Fingerprinter& fp) const;
  friend bool operator==(const LinState&, const LinState&) = default;
};

struct LinStateHash {
  std::size_t operator()(const LinState& s) const {
    return static_cast<std::size_t>(FingerprintOf(s));
  }
};

struct Successor {
  LinState state;
  /// Operations placed on this edge, in order (strong mode: appended).
  Linearization placed;
};

/// The labeling game over a tree: a (node, state) pair is viable when every
/// child edge has some successor state that is viable in turn. Strong mode
/// only appends to labels; decisive mode inserts new operations anywhere
/// after their real-time predecessors.
class Game {
 public:
  Game(const tree::ExecutionTree& tree, specs::SequentialSpec spec,
       Condition mode);

  const tree::ExecutionTree& tree() const { return *tree_; }
  const specs::SequentialSpec& spec() const { return spec_; }
  Condition mode() const { return mode_; }

  LinState Root() const;
  /// Successor states after `event`, fewest placements first. Empty when
  /// no label of the extended execution extends `s`.
  std::vector<Successor> Successors(const LinState& s,
                                    const machine::Event& event) const;
  bool Viable(int node, const LinState& s);
  std::size_t memo_size() const { return memo_entries_; }

 private:
  const tree::ExecutionTree* tree_;
  specs::SequentialSpec spec_;
  Condition mode_;
  std::vector<std::unordered_map<LinState, bool, LinStateHash>> memo_;
  std::size_t memo_entries_ = 0;
};

/// A path-dependent witness labeling extracted from a solved game: at each
/// edge it takes the first viable successor, so the label of a node depends
/// on the path (execution) that reaches it. The tree must outlive it.
class Labeling {
 public:
  struct Point {
    int node = tree::ExecutionTree::kRoot;
    LinState state;
    Linearization label;
  };

  explicit Labeling(std::shared_ptr<Game> game) : game_(std::move(game)) {}

  Condition mode() const { return game_->mode(); }
  const Game& game() const { return *game_; }
  Point Root() const;
  /// Throws ContractViolation if `edge` leaves the viable region.
  Point Next(const Point& at, const tree::Edge& edge) const;
  /// The state part of Next, without building the label.
  LinState NextState(const LinState& at, const tree::Edge& edge) const;
  /// Label of the execution `events`, following the tree from the root.
  Linearization LabelOf(std::span<const machine::Event> events) const;

 private:
  std::shared_ptr<Game> game_;
};

struct Verdict {
  Condition condition = Condition::kLinearizable;
  bool holds = false;
  /// Linearizability: the first execution (BFS order) without a
  /// linearization.
  std::vector<machine::Event> violation_path;
  /// Strong or decisive: the executions of an offending subtree, filled in
  /// by Minimize.
  std::vector<std::vector<machine::Event>> counterexample;
  std::optional<Labeling> witness;
  std::size_t explored = 0;  // search states visited
};

Verdict CheckLinearizable(std::span<const machine::Event> history,
                          const specs::SequentialSpec& spec);
Verdict CheckLinearizable(const tree::ExecutionTree& tree,
                          const specs::SequentialSpec& spec);
Verdict CheckStrong(const tree::ExecutionTree& tree,
                    const specs::SequentialSpec& spec);
Verdict CheckDecisive(const tree::ExecutionTree& tree,
                      const specs::SequentialSpec& spec);
Verdict Check(const tree::ExecutionTree& tree, const specs::SequentialSpec& spec,
              Condition condition);

/// Re-checks a witness without the search: along every execution of the
/// tree the label must linearize the history, and labels must grow by
/// prefix (strong) or subsequence (decisive). Executions that agree on node,
/// history and label are checked once. Returns a description of the first
/// defect, or nothing. Throws ResourceLimit past `path_cap` distinct ones.
std::optional<std::string> VerifyWitness(const tree::ExecutionTree& tree,
                                         const Labeling& labeling,
                                         const specs::SequentialSpec& spec,
                                         std::size_t path_cap = 5'000'000);

/// Greedily prunes edges (breadth-first, repeated until stable) while the
/// tree still violates `condition`, and returns the leaf executions of what
/// is left. Throws ContractViolation if `tree` does not violate it.
std::vector<std::vector<machine::Event>> Minimize(
    const tree::ExecutionTree& tree, const specs::SequentialSpec& spec,
    Condition condition, std::size_t leaf_cap = 100'000);

/// Rebuilds the tree of `executions` and checks that it violates
/// `condition`.
bool Reverify(const machine::AlgorithmDef& algo,
              const machine::Workload& workload,
              std::span<const std::vector<machine::Event>> executions,
              const specs::SequentialSpec& spec, Condition condition);

}  // namespace contestlab::checkers

#endif  // CONTESTLAB_CHECKERS_HPP_
