#include <gtest/gtest.h>

#include <random>

#include "contestlab/algorithms.hpp"
#include "contestlab/checkers.hpp"
#include "oracle.hpp"

namespace {

using namespace contestlab;
using namespace contestlab::checkers;
using machine::Event;

const auto kContest = specs::SequentialSpec::FromId("contest", {3, 4});

TEST(Linearizations, SingleCompleteOp) {
  std::vector<Event> h{Event::Invoke(1, "compete"), Event::Respond(1, Value::Bool(true))};
  auto lins = LinearizationsOf(h, kContest, 100);
  ASSERT_EQ(lins.size(), 1u);
  EXPECT_EQ(lins[0].size(), 1u);
  EXPECT_EQ(lins[0][0].pid, 1);
}

TEST(Linearizations, ConcurrentCompetesBothOrders) {
  std::vector<Event> h{Event::Invoke(1, "compete"), Event::Invoke(2, "compete"),
                       Event::Respond(1, Value::Bool(true)), Event::Respond(2, Value::Bool(true))};
  auto lins = LinearizationsOf(h, kContest, 100);
  EXPECT_GE(lins.size(), 2u);
  bool one_first = false;
  bool two_first = false;
  for (const auto& l : lins) {
    one_first |= l.front().pid == 1;
    two_first |= l.front().pid == 2;
    EXPECT_TRUE(IsLinearizationOf(h, l, kContest));
  }
  EXPECT_TRUE(one_first && two_first);
}

TEST(Linearizations, RealTimeOrderRespected) {
  std::vector<Event> h{Event::Invoke(1, "compete"), Event::Respond(1, Value::Bool(true)),
                       Event::Invoke(2, "compete"), Event::Respond(2, Value::Bool(true))};
  for (const auto& l : LinearizationsOf(h, kContest, 100)) EXPECT_EQ(l.front().pid, 1);
}

TEST(Linearizations, PendingOpsMayBeIncluded) {
  std::vector<Event> h{Event::Invoke(1, "compete"), Event::Invoke(0, "decide"),
                       Event::Respond(0, Value::Int(1))};
  auto lins = LinearizationsOf(h, kContest, 100);
  ASSERT_FALSE(lins.empty());
  for (const auto& l : lins) EXPECT_EQ(l.size(), 2u);
}

TEST(Linearizations, CapThrows) {
  std::vector<Event> h;
  for (int p : {1, 2}) h.push_back(Event::Invoke(p, "compete"));
  EXPECT_THROW(LinearizationsOf(h, kContest, 1), ResourceLimit);
}

TEST(CheckLinearizable, DecideNamesAnAbsentCompetitor) {
  std::vector<Event> h{Event::Invoke(1, "compete"), Event::Respond(1, Value::Bool(true)),
                       Event::Invoke(0, "decide"), Event::Respond(0, Value::Int(2))};
  EXPECT_FALSE(CheckLinearizable(h, kContest).holds);
  h.back().value = Value::Int(1);
  EXPECT_TRUE(CheckLinearizable(h, kContest).holds);
}

TEST(CheckLinearizable, AgreesWithNaiveOracleOnSample) {
  std::mt19937 rng(7);
  for (const std::string id : {"queue", "stack", "contest"}) {
    const auto spec = specs::SequentialSpec::FromId(id, {3, 4});
    for (int i = 0; i < 60; ++i) {
      const auto h = oracle::RandomHistory(rng, id, 5);
      EXPECT_EQ(CheckLinearizable(h, spec).holds, oracle::NaiveLinearizable(h, spec)) << id;
    }
  }
}

TEST(CheckLinearizable, ContestRwTree) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  const auto w = machine::Workload::OneShot(3);
  const auto t = tree::Enumerate(algo, w, 12);
  EXPECT_TRUE(CheckLinearizable(t, algorithms::TargetSpec(algo, 4)).holds);
}

class SmallTrees : public ::testing::Test {
 protected:
  static Verdict Solve(const std::string& name, Condition c, int depth = 16) {
    const auto algo = algorithms::Lookup(name, 3);
    const auto w = machine::Workload::OneShot(3);
    const auto t = tree::Enumerate(algo, w, depth);
    return Check(t, algorithms::TargetSpec(algo, algorithms::DefaultUniverse(w)), c);
  }
};

TEST_F(SmallTrees, WindowIsStrong) {
  EXPECT_TRUE(Solve("contest_window", Condition::kStrong).holds);
}

TEST_F(SmallTrees, ReadWriteIsNotStrongButDecisive) {
  EXPECT_FALSE(Solve("contest_rw", Condition::kStrong).holds);
  EXPECT_TRUE(Solve("contest_rw", Condition::kDecisive).holds);
}

TEST(Witness, VerifiesAndCatchesTampering) {
  const auto algo = algorithms::Lookup("contest_window", 3);
  const auto w = machine::Workload::OneShot(3);
  const auto t = tree::Enumerate(algo, w, 16);
  const auto spec = algorithms::TargetSpec(algo, 3);
  auto v = CheckStrong(t, spec);
  ASSERT_TRUE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_FALSE(VerifyWitness(t, *v.witness, spec).has_value());
  // A witness for one tree does not certify a different spec.
  const auto other = specs::SequentialSpec::FromId("long-lived-contest", {3, 3});
  EXPECT_TRUE(VerifyWitness(t, *v.witness, other).has_value());
}

TEST(Minimize, CounterexampleReverifies) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  const auto w = machine::Workload::OneShot(3);
  const auto t = tree::Enumerate(algo, w, 16);
  const auto spec = algorithms::TargetSpec(algo, 3);
  auto cex = Minimize(t, spec, Condition::kStrong);
  ASSERT_FALSE(cex.empty());
  EXPECT_TRUE(Reverify(algo, w, cex, spec, Condition::kStrong));
  // Every execution shares the racing prefix: both competitors invoked.
  for (const auto& exec : cex) {
    bool p1 = false;
    bool p2 = false;
    for (const auto& e : exec) {
      p1 |= e.pid == 1;
      p2 |= e.pid == 2;
    }
    EXPECT_TRUE(p1 && p2);
  }
  // Minimizing the minimized tree changes nothing.
  const auto small = tree::FromExecutions(algo, w, cex);
  auto again = Minimize(small, spec, Condition::kStrong);
  EXPECT_EQ(again.size(), cex.size());
  EXPECT_THROW(Minimize(t, spec, Condition::kDecisive), ContractViolation);
}

TEST(Hierarchy, StrongImpliesDecisiveImpliesLinearizable) {
  for (const std::string name : {"contest_rw", "contest_window", "contest_window_weak",
                                 "contest_from_queue"}) {
    const auto algo = algorithms::Lookup(name, 3);
    const auto w = machine::Workload::OneShot(3);
    const auto t = tree::Enumerate(algo, w, 12);
    const auto spec = algorithms::TargetSpec(algo, 3);
    const bool s = CheckStrong(t, spec).holds;
    const bool d = CheckDecisive(t, spec).holds;
    const bool l = CheckLinearizable(t, spec).holds;
    EXPECT_TRUE(!s || d) << name;
    EXPECT_TRUE(!d || l) << name;
  }
}

TEST(Monotonicity, StrongViolationPersistsWithDepth) {
  const auto algo = algorithms::Lookup("contest_rw", 3);
  const auto w = machine::Workload::OneShot(3);
  const auto spec = algorithms::TargetSpec(algo, 3);
  bool violated = false;
  for (int d = 4; d <= 16; ++d) {
    const bool holds = CheckStrong(tree::Enumerate(algo, w, d), spec).holds;
    if (violated) {
      EXPECT_FALSE(holds) << "depth " << d;
    }
    violated |= !holds;
  }
  EXPECT_TRUE(violated);
}

TEST(Conditions, NamesRoundTrip) {
  for (auto c : {Condition::kLinearizable, Condition::kStrong, Condition::kDecisive}) {
    EXPECT_EQ(ParseCondition(ConditionName(c)), c);
  }
  EXPECT_FALSE(ParseCondition("weak").has_value());
}

}  // namespace
