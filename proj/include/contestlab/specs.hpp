#ifndef CONTESTLAB_SPECS_HPP_
#define CONTESTLAB_SPECS_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contestlab/value.hpp"

namespace contestlab::specs {

enum class SpecKind {
  kQueue,
  kStack,
  kCounter,
  kMaxRegister,
  kSnapshot,
  kFetchInc,
  kFetchAdd,
  kContest,
  kLongLivedContest,
};

/// `n` is the system size (snapshot components = n-1; contest roles).
/// `universe` caps the representative decide responses of the long-lived
/// contest, whose relation is otherwise infinite.
struct SpecParams {
  int n = 3;
  int universe = 4;

  friend bool operator==(const SpecParams&, const SpecParams&) = default;
};

/// An operation request. `pid` is the caller, or kAnyCaller when the type is
/// used as a shared base object and roles do not apply.
struct Call {
  static constexpr int kAnyCaller = -1;

  int pid = kAnyCaller;
  std::string op;
  std::vector<Value> args;
};

struct Outcome {
  Value response;
  Value next;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// One element of a sequential execution: a call paired with its response.
struct SeqEntry {
  int pid = Call::kAnyCaller;
  std::string op;
  std::vector<Value> args;
  Value response;
};

/// A sequential object type as a transition relation over Value-encoded
/// states. Cheap to copy; all methods are pure.
class SequentialSpec {
 public:
  SequentialSpec(SpecKind kind, SpecParams params);

  /// Stable string ids: queue, stack, counter, max-register, snapshot,
  /// fetch&inc, fetch&add, contest, long-lived-contest.
  static SequentialSpec FromId(std::string_view id, SpecParams params = {});
  static std::vector<std::string> Ids();

  SpecKind kind() const { return kind_; }
  const SpecParams& params() const { return params_; }
  std::string_view id() const;
  bool deterministic() const { return kind_ != SpecKind::kLongLivedContest; }

  Value Initial() const;

  /// All (response, next state) pairs allowed for `call` in `state`. Empty
  /// when the call violates a role or at-most-once constraint. Throws
  /// ContractViolation for an operation the type does not define.
  std::vector<Outcome> Extensions(const Value& state, const Call& call) const;

  /// Exact membership test of (call, response) in the relation; returns the
  /// next state. Unlike Extensions this is not restricted to the universe.
  std::optional<Value> Accept(const Value& state, const Call& call,
                              const Value& response) const;

  bool operator==(const SequentialSpec& o) const {
    return kind_ == o.kind_ && params_ == o.params_;
  }

 private:
  void RequireOp(const Call& call) const;

  SpecKind kind_;
  SpecParams params_;
};

/// True iff `seq` is generated by the relation from the initial state and
/// respects the role constraints.
bool ValidSequence(const SequentialSpec& spec, std::span<const SeqEntry> seq);

}  // namespace contestlab::specs

#endif  // CONTESTLAB_SPECS_HPP_
