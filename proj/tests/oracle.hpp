// Reference implementations the tests compare the library against. They are
// deliberately brute force and share no code with the checkers.
#ifndef CONTESTLAB_TESTS_ORACLE_HPP_
#define CONTESTLAB_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "contestlab/machine.hpp"
#include "contestlab/specs.hpp"

namespace oracle {

using contestlab::Value;
using contestlab::machine::Event;
using contestlab::specs::Call;
using contestlab::specs::SeqEntry;
using contestlab::specs::SequentialSpec;

struct Op {
  int pid;
  std::string name;
  std::vector<Value> args;
  int inv;
  int res;  // -1: pending
  Value response;
};

inline std::vector<Op> ParseOps(const std::vector<Event>& history) {
  std::vector<Op> ops;
  std::vector<int> open(32, -1);
  for (int i = 0; i < static_cast<int>(history.size()); ++i) {
    const auto& e = history[i];
    if (e.is_invoke()) {
      open[e.pid] = static_cast<int>(ops.size());
      ops.push_back({e.pid, e.op, e.args, i, -1, Value()});
    } else if (e.is_respond()) {
      ops[open[e.pid]].res = i;
      ops[open[e.pid]].response = e.value;
      open[e.pid] = -1;
    }
  }
  return ops;
}

// Tries every response the relation allows for each pending entry of `seq`
// (marked with bottom), then asks ValidSequence.
inline bool AnyResponsesValid(const SequentialSpec& spec, std::vector<SeqEntry>& seq,
                              std::size_t at) {
  if (at == seq.size()) return contestlab::specs::ValidSequence(spec, seq);
  if (seq[at].response != Value::Sym(contestlab::Symbol::kBottom)) {
    return AnyResponsesValid(spec, seq, at + 1);
  }
  // Replay the prefix to know the state this pending op sees.
  Value state = spec.Initial();
  for (std::size_t i = 0; i < at; ++i) {
    auto next = spec.Accept(state, {seq[i].pid, seq[i].op, seq[i].args}, seq[i].response);
    if (!next) return false;
    state = *next;
  }
  for (const auto& out : spec.Extensions(state, {seq[at].pid, seq[at].op, seq[at].args})) {
    seq[at].response = out.response;
    if (AnyResponsesValid(spec, seq, at + 1)) return true;
  }
  seq[at].response = Value::Sym(contestlab::Symbol::kBottom);
  return false;
}

/// Every subset of pending ops, every permutation, real-time filter, then
/// valid_sequence. Pending responses are unknown and marked with bottom
/// (no type here ever responds bottom).
inline bool NaiveLinearizable(const std::vector<Event>& history, const SequentialSpec& spec) {
  const auto ops = ParseOps(history);
  std::vector<int> pending;
  std::vector<int> complete;
  for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
    (ops[i].res < 0 ? pending : complete).push_back(i);
  }
  for (std::uint32_t mask = 0; mask < (1u << pending.size()); ++mask) {
    std::vector<int> chosen = complete;
    for (std::size_t b = 0; b < pending.size(); ++b) {
      if (mask & (1u << b)) chosen.push_back(pending[b]);
    }
    std::sort(chosen.begin(), chosen.end());
    do {
      bool real_time = true;
      for (std::size_t i = 0; i < chosen.size() && real_time; ++i) {
        for (std::size_t j = i + 1; j < chosen.size(); ++j) {
          const Op& later = ops[chosen[i]];
          const Op& earlier = ops[chosen[j]];
          if (earlier.res >= 0 && earlier.res < later.inv) {
            real_time = false;
            break;
          }
        }
      }
      if (!real_time) continue;
      std::vector<SeqEntry> seq;
      for (int k : chosen) {
        const Op& o = ops[k];
        seq.push_back({o.pid, o.name, o.args,
                       o.res >= 0 ? o.response : Value::Sym(contestlab::Symbol::kBottom)});
      }
      if (AnyResponsesValid(spec, seq, 0)) return true;
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return false;
}

/// Random well-formed history over queue, stack or contest with at most
/// `max_ops` operations on processes 0..2. Responses are drawn from a pool
/// of plausible values, so some histories linearize and some do not.
inline std::vector<Event> RandomHistory(std::mt19937& rng, const std::string& spec_id,
                                        int max_ops) {
  const bool contest = spec_id == "contest";
  std::vector<Event> h;
  std::vector<bool> busy(3, false);
  std::vector<std::string> op_of(3);
  std::vector<int> competed(3, 0);
  bool decided = false;
  int invoked = 0;
  std::vector<Value> pushed;
  auto pick = [&](int k) { return std::uniform_int_distribution<int>(0, k - 1)(rng); };
  while (true) {
    std::vector<int> idle;
    std::vector<int> active;
    for (int p = 0; p < 3; ++p) {
      if (busy[p]) {
        active.push_back(p);
        continue;
      }
      if (invoked >= max_ops) continue;
      if (contest && p == 0 && decided) continue;
      if (contest && p != 0 && competed[p] > 0) continue;
      idle.push_back(p);
    }
    if (idle.empty() && active.empty()) break;
    // Occasionally stop early, leaving operations pending.
    if (!active.empty() && idle.empty() && pick(6) == 0) break;
    const bool do_invoke = active.empty() || (!idle.empty() && pick(2) == 0);
    if (do_invoke) {
      const int p = idle[pick(static_cast<int>(idle.size()))];
      std::string op;
      std::vector<Value> args;
      if (contest) {
        op = p == 0 ? "decide" : "compete";
        if (p == 0) decided = true; else ++competed[p];
      } else if (pick(2) == 0) {
        op = spec_id == "queue" ? "enqueue" : "push";
        args.push_back(Value::Int(1 + pick(3)));
        pushed.push_back(args[0]);
      } else {
        op = spec_id == "queue" ? "dequeue" : "pop";
      }
      h.push_back(Event::Invoke(p, op, args));
      busy[p] = true;
      op_of[p] = op;
      ++invoked;
    } else {
      const int p = active[pick(static_cast<int>(active.size()))];
      Value r;
      const auto& op = op_of[p];
      if (op == "compete") {
        r = Value::Bool(true);
      } else if (op == "decide") {
        const int c = pick(3);
        r = c == 0 ? Value::False() : Value::Int(c);
      } else if (op == "enqueue" || op == "push") {
        r = Value::Ack();
      } else {
        const int c = pick(static_cast<int>(pushed.size()) + 1);
        r = c == static_cast<int>(pushed.size()) ? Value::Empty() : pushed[c];
      }
      h.push_back(Event::Respond(p, r));
      busy[p] = false;
    }
  }
  return h;
}

}  // namespace oracle

#endif  // CONTESTLAB_TESTS_ORACLE_HPP_
