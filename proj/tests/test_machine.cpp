#include <gtest/gtest.h>

#include "contestlab/algorithms.hpp"
#include "contestlab/machine.hpp"
#include "contestlab/tree.hpp"

namespace contestlab {
void PrintTo(const Value& v, std::ostream* os) { *os << v.ToString(); }
}  // namespace contestlab

namespace {

using namespace contestlab;
using namespace contestlab::machine;

std::vector<ProcessId> Repeat(ProcessId p, int times) { return std::vector<ProcessId>(times, p); }

TEST(Machine, FreshCompetitorInvokes) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  const auto w = Workload::OneShot(3);
  auto t = Step(algo, Initial(algo), 1, w);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].event, Event::Invoke(1, "compete"));
}

TEST(Machine, WriterAfterReadingFalse) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  const auto w = Workload::OneShot(3);
  auto exec = machine::Run(algo, w, std::vector<ProcessId>{1, 1});
  ASSERT_EQ(exec.events.size(), 2u);
  EXPECT_EQ(exec.events[1].value, Value::False());
  auto t = Step(algo, exec.final_config, 1, w);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].event,
            Event::Step(1, algo.ObjectIndex("X"), memory::PrimitiveOp::Write(Value::Int(1)),
                        Value::Ack()));
}

TEST(Machine, RefereeWaitsForACompete) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  const auto w = Workload::OneShot(3, Trigger::AfterAnyCompete());
  EXPECT_TRUE(Step(algo, Initial(algo), kReferee, w).empty());
  auto exec = machine::Run(algo, w, Repeat(1, 8));
  EXPECT_EQ(Step(algo, exec.final_config, kReferee, w).size(), 1u);
}

TEST(Machine, SoloCompeteThenDecide) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  auto sched = Repeat(1, 10);
  for (int i = 0; i < 10; ++i) sched.push_back(0);
  auto exec = machine::Run(algo, Workload::OneShot(3), sched);
  EXPECT_EQ(exec.final_config.referee_result(), Value::Int(1));
  const History expect{Event::Invoke(1, "compete"), Event::Respond(1, Value::Bool(true)),
                       Event::Invoke(0, "decide"), Event::Respond(0, Value::Int(1))};
  EXPECT_EQ(HistoryOf(exec), expect);
}

TEST(Machine, AlternatingCompetitors) {
  // Both read false before either writes, so the referee sees the later write.
  const auto algo = algorithms::Lookup("contest_rw", 3);
  std::vector<ProcessId> sched;
  for (int i = 0; i < 8; ++i) {
    sched.push_back(1);
    sched.push_back(2);
  }
  for (int i = 0; i < 8; ++i) sched.push_back(0);
  auto exec = machine::Run(algo, Workload::OneShot(3), sched);
  EXPECT_EQ(exec.final_config.referee_result(), Value::Int(2));
  EXPECT_EQ(exec.final_config.op_count(1), 1);
  EXPECT_EQ(exec.final_config.op_count(2), 1);
}

TEST(Machine, SharedStepGranularity) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  auto exec = machine::Run(algo, Workload::OneShot(3), std::vector<ProcessId>{1, 1, 0},
                  Granularity::kSharedStep);
  // p1: invoke, read, write, respond; p0: invoke, read, respond.
  ASSERT_EQ(exec.events.size(), 7u);
  EXPECT_EQ(exec.final_config.referee_result(), Value::Int(1));
}

TEST(Machine, EmptySchedule) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  auto exec = machine::Run(algo, Workload::OneShot(3), std::vector<ProcessId>{});
  EXPECT_TRUE(exec.events.empty());
  EXPECT_TRUE(HistoryOf(exec).empty());
  EXPECT_EQ(exec.final_config, Initial(algo));
}

TEST(Machine, ReplayRejectsForeignEvents) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  const auto w = Workload::OneShot(3);
  auto exec = machine::Run(algo, w, Repeat(1, 4));
  EXPECT_EQ(Replay(algo, w, exec.events).final_config, exec.final_config);
  auto forged = exec.events;
  forged[1].value = Value::Int(2);
  EXPECT_THROW(Replay(algo, w, forged), ContractViolation);
}

TEST(Machine, Indistinguishable) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  const auto c = Initial(algo);
  EXPECT_TRUE(Indistinguishable(c, c, 0));
  auto d = machine::Run(algo, Workload::OneShot(3), std::vector<ProcessId>{2}).final_config;
  EXPECT_TRUE(Indistinguishable(c, d, 0));
  EXPECT_FALSE(Indistinguishable(c, d, 2));
}

TEST(Machine, WorkloadValidation) {
  Workload w = Workload::OneShot(3);
  EXPECT_NO_THROW(w.Validate(3));
  EXPECT_THROW(w.Validate(4), ContractViolation);
  w.max_ops[0] = 2;
  EXPECT_THROW(w.Validate(3), ContractViolation);
  EXPECT_EQ(Workload::LongLived(3, 2).total_competes(), 4);
}

TEST(Catalog, Layouts) {
  auto cw = algorithms::Lookup("contest_window", 3);
  ASSERT_EQ(cw.layout.size(), 1u);
  EXPECT_EQ(cw.layout[0].initial.kind, memory::ObjectKind::Window(2));
  auto rw = algorithms::Lookup("contest_rw", 2);
  ASSERT_EQ(rw.layout.size(), 1u);
  EXPECT_EQ(rw.layout[0].initial.kind, memory::ObjectKind::Register());
  EXPECT_EQ(rw.layout[0].initial.content, Value::False());
  auto weak = algorithms::Lookup("contest_window_weak", 3);
  EXPECT_EQ(weak.layout[0].initial.kind.window(), 1);
  EXPECT_THROW(algorithms::Lookup("no_such_algo", 3), ContractViolation);
  EXPECT_THROW(algorithms::Lookup("contest_rw", 1), ContractViolation);
}

TEST(Catalog, EveryEntrySoloRunCompletes) {
  for (const auto& name : algorithms::CatalogNames()) {
    const auto algo = algorithms::Lookup(name, 3);
    const auto w = algorithms::IsLongLived(name) ? Workload::LongLived(3, 2) : Workload::OneShot(3);
    std::vector<ProcessId> sched;
    for (int p : {1, 2, 0}) {
      for (int i = 0; i < 40; ++i) sched.push_back(p);
    }
    auto exec = machine::Run(algo, w, sched);
    ASSERT_TRUE(exec.final_config.referee_result().has_value()) << name;
    // Counting reductions report the total number of competes (2 + 2), the
    // others the largest per-competitor count.
    Value want = Value::Int(1);
    if (algorithms::IsLongLived(name)) {
      const bool counts_all = name == "ll_from_counter" || name == "ll_from_fai" || name == "ll_from_faa";
      want = Value::Int(counts_all ? 4 : 2);
    }
    EXPECT_EQ(*exec.final_config.referee_result(), want) << name;
  }
}

TEST(Tree, DepthZero) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  auto t = tree::Enumerate(algo, Workload::OneShot(3), 0);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.ExecutionCount(), 1u);
}

TEST(Tree, TwoProcessTreeIsWaitFree) {
  const auto algo = algorithms::Lookup("contest_rw", 2);
  auto t = tree::Enumerate(algo, Workload::OneShot(2), 8);
  const auto leaves = t.LeafExecutions(100000);
  ASSERT_FALSE(leaves.empty());
  for (const auto& exec : leaves) {
    int responds = 0;
    for (const auto& e : exec) responds += e.is_respond();
    EXPECT_EQ(responds, 2);
  }
  // Every prefix is an execution too.
  EXPECT_GT(t.ExecutionCount(), leaves.size());
}

TEST(Tree, NodeCap) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  EXPECT_THROW(tree::Enumerate(algo, Workload::OneShot(3), 16, 10), ResourceLimit);
}

TEST(Tree, FromExecutionsRebuildsPaths) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  const auto w = Workload::OneShot(3);
  auto full = tree::Enumerate(algo, w, 6);
  auto leaves = full.LeafExecutions(100000);
  auto rebuilt = tree::FromExecutions(algo, w, leaves);
  EXPECT_EQ(rebuilt.ExecutionCount(), full.ExecutionCount());
  EXPECT_GE(rebuilt.Find(leaves.front()), 0);
}

}  // namespace
