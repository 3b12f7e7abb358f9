#ifndef CONTESTLAB_MACHINE_HPP_
#define CONTESTLAB_MACHINE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contestlab/memory.hpp"
#include "contestlab/value.hpp"

namespace contestlab::machine {

/// Process index in [0, n). Index 0 is the referee, the rest competitors.
using ProcessId = int;
inline constexpr ProcessId kReferee = 0;
inline bool IsCompetitor(ProcessId p) { return p >= 1; }

/// Program counter plus registers. Registers persist across operations of
/// the same process; `begin` decides what to reset on each invocation.
struct LocalState {
  int pc = 0;
  std::vector<Value> vars;

  void HashInto(Fingerprinter& fp) const;
  friend bool operator==(const LocalState&, const LocalState&) = default;
};

/// What a process does next. Programs are in normal form: one shared
/// primitive per step, local computation folded into `absorb`.
struct Action {
  enum class Kind { kApply, kRespond };

  Kind kind = Kind::kRespond;
  int object = -1;
  memory::PrimitiveOp op;
  Value response;

  static Action Apply(int object, memory::PrimitiveOp op) {
    return {Kind::kApply, object, std::move(op), Value()};
  }
  static Action Respond(Value v) { return {Kind::kRespond, -1, {}, std::move(v)}; }
};

struct ObjectDecl {
  std::string name;
  memory::ObjectState initial;
};

struct AlgorithmDef {
  std::string name;
  int n = 0;
  std::string target_spec;  // spec id the responses must linearize against
  std::vector<ObjectDecl> layout;

  /// The operation process `p` invokes (one kind per process).
  std::function<std::string(ProcessId)> op_name;
  /// Local state right after invocation, given the state left by the
  /// previous operation.
  std::function<LocalState(ProcessId, const LocalState&)> begin;
  /// The next action; depends only on the local state.
  std::function<Action(ProcessId, const LocalState&)> poised;
  /// Local state after the primitive chosen by `poised` returned `response`.
  std::function<LocalState(ProcessId, const LocalState&, const Value&)> absorb;

  std::vector<LocalState> initial_local;  // one per process

  int ObjectIndex(std::string_view object_name) const;
};

struct ProcessState {
  bool active = false;
  LocalState local;
  int completed = 0;
  std::optional<Value> last_response;

  void HashInto(Fingerprinter& fp) const;
  friend bool operator==(const ProcessState&, const ProcessState&) = default;
};

enum class RefereeStatus { kNotStarted, kPending, kDone };

struct Configuration {
  std::vector<memory::ObjectState> objects;
  std::vector<ProcessState> procs;

  int op_count(ProcessId p) const { return procs.at(p).completed; }
  RefereeStatus referee_status() const;
  /// The referee's response once its operation completed.
  std::optional<Value> referee_result() const;

  void HashInto(Fingerprinter& fp) const;
  std::uint64_t Fingerprint() const { return FingerprintOf(*this); }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct Event {
  enum class Kind { kInvoke, kStep, kRespond };

  Kind kind = Kind::kInvoke;
  ProcessId pid = 0;
  std::string op;           // invoke: operation name
  std::vector<Value> args;  // invoke: arguments
  int object = -1;          // step: object index
  memory::PrimitiveOp primitive;
  Value value;  // step: primitive response; respond: operation response

  static Event Invoke(ProcessId p, std::string op, std::vector<Value> args = {});
  static Event Step(ProcessId p, int object, memory::PrimitiveOp prim, Value r);
  static Event Respond(ProcessId p, Value v);

  bool is_invoke() const { return kind == Kind::kInvoke; }
  bool is_step() const { return kind == Kind::kStep; }
  bool is_respond() const { return kind == Kind::kRespond; }

  void HashInto(Fingerprinter& fp) const;
  std::string ToString(const AlgorithmDef* algo = nullptr) const;
  friend bool operator==(const Event&, const Event&) = default;
};

struct Trigger {
  enum class Kind { kImmediately, kAfterAnyCompete, kAfterProcess, kNever };

  Kind kind = Kind::kImmediately;
  ProcessId pid = -1;  // kAfterProcess only

  static Trigger Immediately() { return {Kind::kImmediately, -1}; }
  static Trigger AfterAnyCompete() { return {Kind::kAfterAnyCompete, -1}; }
  static Trigger AfterProcess(ProcessId p) { return {Kind::kAfterProcess, p}; }
  static Trigger Never() { return {Kind::kNever, -1}; }

  friend bool operator==(const Trigger&, const Trigger&) = default;
};

/// Which invocations the scheduler may fire. An idle process invokes its
/// next operation when its quota is not used up and its trigger holds.
struct Workload {
  std::vector<int> max_ops;        // per process; referee at most 1
  std::vector<Trigger> triggers;   // per process

  /// One compete per competitor, one decide.
  static Workload OneShot(int n, Trigger referee = Trigger::Immediately());
  /// `competes` competes per competitor, one decide.
  static Workload LongLived(int n, int competes,
                            Trigger referee = Trigger::Immediately());

  int total_competes() const;
  /// Throws ContractViolation unless sized for `n` with referee quota <= 1.
  void Validate(int n) const;

  friend bool operator==(const Workload&, const Workload&) = default;
};

struct Transition {
  Event event;
  Configuration next;
};

Configuration Initial(const AlgorithmDef& algo);

/// Enabled next event of `pid` (at most one: every process has a single
/// operation kind), with the resulting configuration.
std::vector<Transition> Step(const AlgorithmDef& algo,
                             const Configuration& config, ProcessId pid,
                             const Workload& workload);

struct Execution {
  Configuration initial;
  std::vector<Event> events;
  Configuration final_config;
};

enum class Granularity {
  kEvent,       // one schedule entry = one event
  kSharedStep,  // one entry = the next shared step, with the invocation
                // before it and the response after it folded in
};

/// Folds Step over `schedule`, skipping disabled processes.
Execution Run(const AlgorithmDef& algo, const Workload& workload,
              std::span<const ProcessId> schedule,
              Granularity granularity = Granularity::kEvent);

/// Replays `events` from the initial configuration, checking every event is
/// the one Step produces. Throws ContractViolation on the first mismatch.
Execution Replay(const AlgorithmDef& algo, const Workload& workload,
                 std::span<const Event> events);

/// Base objects and `pid`'s process state coincide.
bool Indistinguishable(const Configuration& c1, const Configuration& c2,
                       ProcessId pid);

using History = std::vector<Event>;

/// Invoke and Respond events in order.
History HistoryOf(std::span<const Event> events);
inline History HistoryOf(const Execution& exec) { return HistoryOf(exec.events); }

}  // namespace contestlab::machine

template <>
struct std::hash<contestlab::machine::Configuration> {
  std::size_t operator()(const contestlab::machine::Configuration& c) const {
    return static_cast<std::size_t>(c.Fingerprint());
  }
};

template <>
struct std::hash<contestlab::machine::Event> {
  std::size_t operator()(const contestlab::machine::Event& e) const {
    return static_cast<std::size_t>(contestlab::FingerprintOf(e));
  }
};

#endif  // CONTESTLAB_MACHINE_HPP_
