#ifndef CONTESTLAB_TRACE_IO_HPP_
#define CONTESTLAB_TRACE_IO_HPP_

#include <string>
#include <vector>

#include "json.hpp"

#include "contestlab/checkers.hpp"
#include "contestlab/machine.hpp"
#include "contestlab/tree.hpp"
#include "contestlab/valency.hpp"

namespace contestlab::trace_io {

// nlohmann::json keeps object keys sorted, which makes output canonical.
using Json = nlohmann::json;

/// Symbols become tagged strings ("#false", "#bot", "#empty", "#ack") so they
/// never collide with booleans; sequences become arrays.
Json ToJson(const Value& v);
Value ValueFromJson(const Json& j);

Json ToJson(const machine::Event& e, const machine::AlgorithmDef& algo);
machine::Event EventFromJson(const Json& j, const machine::AlgorithmDef& algo);
Json ToJson(std::span<const machine::Event> events, const machine::AlgorithmDef& algo);
std::vector<machine::Event> EventsFromJson(const Json& j, const machine::AlgorithmDef& algo);

/// Triggers: "immediately", "after-any-compete", "after-process:<pid>",
/// "never".
std::string TriggerName(const machine::Trigger& t);
machine::Trigger ParseTrigger(const std::string& s);
Json ToJson(const machine::Workload& w);
machine::Workload WorkloadFromJson(const Json& j);

Json ToJson(const checkers::Linearization& lin);

/// {algo, n, workload, events}. Callers add "verdict" when they have one.
Json TraceJson(const machine::AlgorithmDef& algo, const machine::Workload& workload,
               std::span<const machine::Event> events);

/// Path of the first parent chain from the root to `node` (shared nodes
/// have several; this one is deterministic).
std::vector<machine::Event> PathTo(const tree::ExecutionTree& tree, int node);

/// Deterministic node id: configuration fingerprint prefix plus depth.
std::string NodeId(const tree::ExecutionTree& tree, int node);

/// Graphviz rendering of the (shared) tree, nodes colored by valency class
/// and marked when critical, edges labeled with the acting process.
std::string ToDot(const tree::ExecutionTree& tree, const valency::ValencyMap& map,
                  const std::vector<int>& critical = {});

}  // namespace contestlab::trace_io

#endif  // CONTESTLAB_TRACE_IO_HPP_
