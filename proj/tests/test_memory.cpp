#include <gtest/gtest.h>

#include <deque>

#include "contestlab/memory.hpp"

namespace {

using namespace contestlab;
using namespace contestlab::memory;

TEST(Memory, WindowWriteDropsOldest) {
  ObjectState s{ObjectKind::Window(2), Value::Seq({Value::Int(1), Value::Int(2)})};
  auto r = ApplyPrimitive(s, PrimitiveOp::Write(Value::Int(3)));
  EXPECT_EQ(r.state.content, Value::Seq({Value::Int(2), Value::Int(3)}));
  EXPECT_EQ(r.response, Value::Ack());
}

TEST(Memory, ReadIsIdentity) {
  ObjectState s{ObjectKind::Register(), Value::Int(5)};
  auto r = ApplyPrimitive(s, PrimitiveOp::Read());
  EXPECT_EQ(r.state, s);
  EXPECT_EQ(r.response, Value::Int(5));
}

TEST(Memory, TestAndSet) {
  auto s = ObjectState::Fresh(ObjectKind::TestAndSet());
  auto first = ApplyPrimitive(s, PrimitiveOp::Tas());
  EXPECT_EQ(first.response, Value::Bool(false));
  EXPECT_EQ(first.state.content, Value::Bool(true));
  auto second = ApplyPrimitive(first.state, PrimitiveOp::Tas());
  EXPECT_EQ(second.response, Value::Bool(true));
  EXPECT_EQ(second.state.content, Value::Bool(true));
}

TEST(Memory, FetchAddReturnsOld) {
  ObjectState s{ObjectKind::AddCell(), Value::Int(3)};
  auto r = ApplyPrimitive(s, PrimitiveOp::Fadd(2));
  EXPECT_EQ(r.state.content, Value::Int(5));
  EXPECT_EQ(r.response, Value::Int(3));
}

TEST(Memory, KindMismatchIsContractViolation) {
  ObjectState reg{ObjectKind::Register(), Value::Int(0)};
  EXPECT_THROW(ApplyPrimitive(reg, PrimitiveOp::Tas()), ContractViolation);
  auto tas = ObjectState::Fresh(ObjectKind::TestAndSet());
  EXPECT_THROW(ApplyPrimitive(tas, PrimitiveOp::Write(Value::Int(1))), ContractViolation);
  EXPECT_THROW(ObjectKind::Window(0), ContractViolation);
}

TEST(Memory, CommuteExamples) {
  ObjectState add{ObjectKind::AddCell(), Value::Int(4)};
  EXPECT_TRUE(Commutes(PrimitiveOp::Fadd(2), PrimitiveOp::Fadd(5), add));
  ObjectState reg{ObjectKind::Register(), Value::Int(0)};
  EXPECT_FALSE(Commutes(PrimitiveOp::Write(Value::Int(1)), PrimitiveOp::Write(Value::Int(2)), reg));
  EXPECT_TRUE(Commutes(PrimitiveOp::Write(Value::Int(1)), PrimitiveOp::Write(Value::Int(1)), reg));
  ObjectState seven{ObjectKind::Register(), Value::Int(7)};
  EXPECT_TRUE(Commutes(PrimitiveOp::Read(), PrimitiveOp::Write(Value::Int(7)), seven));
}

TEST(Memory, OverwriteExamples) {
  ObjectState reg{ObjectKind::Register(), Value::Int(0)};
  EXPECT_TRUE(Overwrites(PrimitiveOp::Write(Value::Int(3)), PrimitiveOp::Write(Value::Int(9)), reg));
  EXPECT_TRUE(Overwrites(PrimitiveOp::Write(Value::Int(3)), PrimitiveOp::Read(), reg));
  ObjectState add{ObjectKind::AddCell(), Value::Int(0)};
  EXPECT_FALSE(Overwrites(PrimitiveOp::Fadd(1), PrimitiveOp::Fadd(2), add));
}

TEST(Memory, WideWindowDoesNotInterfere) {
  EXPECT_FALSE(ObjectKind::Window(2).interfering());
  EXPECT_TRUE(ObjectKind::Window(1).interfering());
  auto empty = ObjectState::Fresh(ObjectKind::Window(2));
  EXPECT_FALSE(Interferes(PrimitiveOp::Write(Value::Int(1)), PrimitiveOp::Write(Value::Int(2)), empty));
}

// Reference window register: a deque truncated to w.
void CheckWindowSequences(int w, int k, std::vector<int>& writes) {
  if (static_cast<int>(writes.size()) == k) {
    ObjectState s = ObjectState::Fresh(ObjectKind::Window(w));
    std::deque<int> ref;
    for (int x : writes) {
      auto r = ApplyPrimitive(s, PrimitiveOp::Write(Value::Int(x)));
      ASSERT_EQ(r.response, Value::Ack());
      s = r.state;
      ref.push_back(x);
      if (static_cast<int>(ref.size()) > w) ref.pop_front();
      std::vector<Value> expect;
      for (int y : ref) expect.push_back(Value::Int(y));
      auto read = ApplyPrimitive(s, PrimitiveOp::Read());
      ASSERT_EQ(read.response, Value::Seq(expect));
      ASSERT_EQ(read.state, s);
    }
    return;
  }
  for (int v = 1; v <= 2; ++v) {
    writes.push_back(v);
    CheckWindowSequences(w, k, writes);
    writes.pop_back();
  }
}

TEST(Memory, WindowSemanticsSmall) {
  for (int w = 1; w <= 3; ++w) {
    for (int k = 0; k <= 5; ++k) {
      std::vector<int> writes;
      CheckWindowSequences(w, k, writes);
    }
  }
}

TEST(Memory, InterferingKindsInterfereOnSmallStates) {
  const std::vector<Value> vals{Value::Int(0), Value::Int(1), Value::Int(2)};
  for (const auto& kind : {ObjectKind::Register(), ObjectKind::TestAndSet(),
                           ObjectKind::SwapCell(), ObjectKind::AddCell(), ObjectKind::Window(1)}) {
    const auto states = SmallStates(kind, vals, 2);
    ASSERT_FALSE(states.empty());
    for (const auto& a : PrimitivesOf(kind, vals)) {
      for (const auto& b : PrimitivesOf(kind, vals)) {
        EXPECT_TRUE(InterferesEverywhere(a, b, states))
            << kind.ToString() << " " << a.ToString() << " " << b.ToString();
      }
    }
  }
}

TEST(Memory, SpecObjectCallsTheSpec) {
  auto q = ObjectState::Fresh(ObjectKind::Spec(specs::SequentialSpec::FromId("queue")));
  q = ApplyPrimitive(q, PrimitiveOp::SpecCall("enqueue", {Value::Int(4)})).state;
  auto r = ApplyPrimitive(q, PrimitiveOp::SpecCall("dequeue"));
  EXPECT_EQ(r.response, Value::Int(4));
  EXPECT_EQ(ApplyPrimitive(r.state, PrimitiveOp::SpecCall("dequeue")).response, Value::Empty());
  EXPECT_THROW(ObjectKind::Spec(specs::SequentialSpec::FromId("long-lived-contest")),
               ContractViolation);
}

}  // namespace
