#ifndef CONTESTLAB_MEMORY_HPP_
#define CONTESTLAB_MEMORY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "contestlab/specs.hpp"
#include "contestlab/value.hpp"

namespace contestlab::memory {

enum class ObjectTag {
  kRegister,
  kWindowRegister,
  kTestAndSet,
  kSwapCell,
  kAddCell,
  kSpecObject,
};

/// The kind of an atomic base object. A plain register behaves as a
/// 1-window register whose read unwraps the single retained value.
class ObjectKind {
 public:
  static ObjectKind Register() { return ObjectKind(ObjectTag::kRegister, 1); }
  static ObjectKind Window(int w);
  static ObjectKind TestAndSet() { return ObjectKind(ObjectTag::kTestAndSet, 0); }
  static ObjectKind SwapCell() { return ObjectKind(ObjectTag::kSwapCell, 0); }
  static ObjectKind AddCell() { return ObjectKind(ObjectTag::kAddCell, 0); }
  static ObjectKind Spec(specs::SequentialSpec spec);

  ObjectTag tag() const { return tag_; }
  int window() const { return window_; }
  const specs::SequentialSpec& spec() const;

  /// Interfering kinds: every pair of their primitives commutes or one
  /// overwrites the other, from every state.
  bool interfering() const;

  std::string ToString() const;

  bool operator==(const ObjectKind& o) const {
    return tag_ == o.tag_ && window_ == o.window_ && spec_ == o.spec_;
  }

 private:
  ObjectKind(ObjectTag tag, int window) : tag_(tag), window_(window) {}

  ObjectTag tag_;
  int window_;
  std::optional<specs::SequentialSpec> spec_;
};

struct PrimitiveOp {
  enum class Tag { kRead, kWrite, kTas, kSwap, kFadd, kSpecCall };

  Tag tag = Tag::kRead;
  std::vector<Value> args;
  std::string name;  // spec-call operation name; empty otherwise

  static PrimitiveOp Read() { return {Tag::kRead, {}, {}}; }
  static PrimitiveOp Write(Value v) { return {Tag::kWrite, {std::move(v)}, {}}; }
  static PrimitiveOp Tas() { return {Tag::kTas, {}, {}}; }
  static PrimitiveOp Swap(Value v) { return {Tag::kSwap, {std::move(v)}, {}}; }
  static PrimitiveOp Fadd(std::int64_t delta) {
    return {Tag::kFadd, {Value::Int(delta)}, {}};
  }
  static PrimitiveOp SpecCall(std::string op, std::vector<Value> args = {}) {
    return {Tag::kSpecCall, std::move(args), std::move(op)};
  }

  /// "read", "write", ... or the operation name for spec calls.
  std::string Mnemonic() const;
  std::string ToString() const;
  void HashInto(Fingerprinter& fp) const;

  friend bool operator==(const PrimitiveOp&, const PrimitiveOp&) = default;
};

/// Content encoding: register / swap-cell / add-cell hold a value, a window
/// register holds a sequence of at most w values (oldest first), test&set
/// holds a boolean, a spec object holds its spec state.
struct ObjectState {
  ObjectKind kind;
  Value content;

  /// The initial state a fresh object of this kind conventionally has.
  static ObjectState Fresh(const ObjectKind& kind);

  void HashInto(Fingerprinter& fp) const;
  friend bool operator==(const ObjectState& a, const ObjectState& b) {
    return a.content == b.content && a.kind == b.kind;
  }
};

struct Applied {
  ObjectState state;
  Value response;
};

bool Applicable(const ObjectKind& kind, const PrimitiveOp& op);

/// Atomically applies `op`. Throws ContractViolation when the primitive is
/// not defined for the object's kind.
Applied ApplyPrimitive(const ObjectState& state, const PrimitiveOp& op);

/// State-level commutation: op1;op2 and op2;op1 leave the same state.
bool Commutes(const PrimitiveOp& op1, const PrimitiveOp& op2,
              const ObjectState& state);

/// op2;op1 leaves the same state as op1 alone.
bool Overwrites(const PrimitiveOp& op1, const PrimitiveOp& op2,
                const ObjectState& state);

/// Commutes, or one of the two overwrites the other, at `state`.
bool Interferes(const PrimitiveOp& op1, const PrimitiveOp& op2,
                const ObjectState& state);

/// Exhaustive check of Interferes over every state in `states`.
bool InterferesEverywhere(const PrimitiveOp& op1, const PrimitiveOp& op2,
                          const std::vector<ObjectState>& states);

/// Small states of `kind` reachable from its fresh state with writes drawn
/// from `values` (and every fadd/tas outcome up to `steps` operations).
std::vector<ObjectState> SmallStates(const ObjectKind& kind,
                                     const std::vector<Value>& values,
                                     int steps);

/// Primitives defined on `kind`, instantiated with arguments from `values`.
std::vector<PrimitiveOp> PrimitivesOf(const ObjectKind& kind,
                                      const std::vector<Value>& values);

}  // namespace contestlab::memory

#endif  // CONTESTLAB_MEMORY_HPP_
