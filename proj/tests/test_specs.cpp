#include <gtest/gtest.h>

#include "contestlab/specs.hpp"

namespace {

using namespace contestlab;
using namespace contestlab::specs;

SeqEntry E(int pid, std::string op, Value r, std::vector<Value> args = {}) {
  return {pid, std::move(op), std::move(args), std::move(r)};
}

TEST(Specs, ContestFirstCompeteWins) {
  const auto c = SequentialSpec::FromId("contest", {3, 4});
  std::vector<SeqEntry> seq{E(2, "compete", Value::Bool(true)), E(1, "compete", Value::Bool(true)),
                            E(0, "decide", Value::Int(2))};
  EXPECT_TRUE(ValidSequence(c, seq));
  seq[2].response = Value::Int(1);
  EXPECT_FALSE(ValidSequence(c, seq));
}

TEST(Specs, ContestDecideWithoutCompete) {
  const auto c = SequentialSpec::FromId("contest", {3, 4});
  std::vector<SeqEntry> none{E(0, "decide", Value::False())};
  EXPECT_TRUE(ValidSequence(c, none));
  std::vector<SeqEntry> bad{E(0, "decide", Value::Int(1))};
  EXPECT_FALSE(ValidSequence(c, bad));
  auto ext = c.Extensions(c.Initial(), {0, "decide", {}});
  ASSERT_EQ(ext.size(), 1u);
  EXPECT_EQ(ext[0].response, Value::False());
}

TEST(Specs, ContestRoles) {
  const auto c = SequentialSpec::FromId("contest", {3, 4});
  EXPECT_TRUE(c.Extensions(c.Initial(), {0, "compete", {}}).empty());
  EXPECT_TRUE(c.Extensions(c.Initial(), {1, "decide", {}}).empty());
  std::vector<SeqEntry> twice{E(1, "compete", Value::Bool(true)), E(1, "compete", Value::Bool(true))};
  EXPECT_FALSE(ValidSequence(c, twice));
  EXPECT_THROW(c.Extensions(c.Initial(), {1, "push", {}}), ContractViolation);
}

TEST(Specs, LongLivedDecideIsAtLeastTheMaxCount) {
  const auto ll = SequentialSpec::FromId("long-lived-contest", {3, 8});
  std::vector<SeqEntry> seq{E(1, "compete", Value::Ack()), E(1, "compete", Value::Ack()),
                            E(2, "compete", Value::Ack()), E(0, "decide", Value::Int(2))};
  EXPECT_TRUE(ValidSequence(ll, seq));
  seq[3].response = Value::Int(1);
  EXPECT_FALSE(ValidSequence(ll, seq));
  seq[3].response = Value::Int(7);
  EXPECT_TRUE(ValidSequence(ll, seq));
}

TEST(Specs, LongLivedExtensionsStopAtUniverse) {
  const auto ll = SequentialSpec::FromId("long-lived-contest", {3, 4});
  Value s = ll.Initial();
  for (int pid : {1, 1, 2}) s = ll.Extensions(s, {pid, "compete", {}}).at(0).next;
  std::vector<Value> got;
  for (const auto& o : ll.Extensions(s, {0, "decide", {}})) got.push_back(o.response);
  EXPECT_EQ(got, (std::vector<Value>{Value::Int(2), Value::Int(3), Value::Int(4)}));
  // Accept is exact, not universe-bound.
  EXPECT_TRUE(ll.Accept(s, {0, "decide", {}}, Value::Int(100)).has_value());
}

TEST(Specs, QueueFifo) {
  const auto q = SequentialSpec::FromId("queue");
  std::vector<SeqEntry> ok{E(1, "enqueue", Value::Ack(), {Value::Int(1)}),
                           E(1, "enqueue", Value::Ack(), {Value::Int(2)}),
                           E(2, "dequeue", Value::Int(1))};
  EXPECT_TRUE(ValidSequence(q, ok));
  ok[2].response = Value::Int(2);
  EXPECT_FALSE(ValidSequence(q, ok));
  const auto s = Value::Seq({Value::Int(1), Value::Int(2)});
  auto ext = q.Extensions(s, {Call::kAnyCaller, "dequeue", {}});
  ASSERT_EQ(ext.size(), 1u);
  EXPECT_EQ(ext[0], (Outcome{Value::Int(1), Value::Seq({Value::Int(2)})}));
}

TEST(Specs, StackLifo) {
  const auto st = SequentialSpec::FromId("stack");
  std::vector<SeqEntry> seq{E(1, "push", Value::Ack(), {Value::Int(1)}),
                            E(1, "push", Value::Ack(), {Value::Int(2)}),
                            E(2, "pop", Value::Int(2)), E(2, "pop", Value::Int(1)),
                            E(2, "pop", Value::Empty())};
  EXPECT_TRUE(ValidSequence(st, seq));
}

TEST(Specs, CounterMaxRegFetchInc) {
  const auto ctr = SequentialSpec::FromId("counter");
  std::vector<SeqEntry> c{E(1, "increment", Value::Ack()), E(2, "increment", Value::Ack()),
                          E(0, "read", Value::Int(2))};
  EXPECT_TRUE(ValidSequence(ctr, c));
  const auto mr = SequentialSpec::FromId("max-register");
  std::vector<SeqEntry> m{E(1, "maxWrite", Value::Ack(), {Value::Int(3)}),
                          E(2, "maxWrite", Value::Ack(), {Value::Int(1)}),
                          E(0, "maxRead", Value::Int(3))};
  EXPECT_TRUE(ValidSequence(mr, m));
  const auto fi = SequentialSpec::FromId("fetch&inc");
  std::vector<SeqEntry> f{E(1, "fetchInc", Value::Int(0)), E(2, "fetchInc", Value::Int(1))};
  EXPECT_TRUE(ValidSequence(fi, f));
}

TEST(Specs, SnapshotScanSeesUpdates) {
  const auto snap = SequentialSpec::FromId("snapshot", {3, 4});
  Value s = snap.Initial();
  s = snap.Extensions(s, {1, "update", {Value::Int(1), Value::Int(5)}}).at(0).next;
  auto scan = snap.Extensions(s, {0, "scan", {}});
  ASSERT_EQ(scan.size(), 1u);
  ASSERT_TRUE(scan[0].response.is_seq());
  EXPECT_EQ(scan[0].response.items().size(), 2u);
  EXPECT_EQ(scan[0].response.items()[0], Value::Int(5));
}

TEST(Specs, IdsRoundTrip) {
  for (const auto& id : SequentialSpec::Ids()) {
    EXPECT_EQ(SequentialSpec::FromId(id).id(), id);
  }
  EXPECT_THROW(SequentialSpec::FromId("nope"), ContractViolation);
}

}  // namespace
