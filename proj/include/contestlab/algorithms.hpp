#ifndef CONTESTLAB_ALGORITHMS_HPP_
#define CONTESTLAB_ALGORITHMS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "contestlab/machine.hpp"
#include "contestlab/specs.hpp"

namespace contestlab::algorithms {

/// Catalog names:
///   contest_rw, contest_window, contest_window_weak, contest_from_queue,
///   contest_from_stack                       (target: contest)
///   ll_contest_rw, ll_from_counter, ll_from_maxreg, ll_from_snapshot,
///   ll_from_fai, ll_from_faa                 (target: long-lived-contest)
std::vector<std::string> CatalogNames();

bool IsLongLived(std::string_view name);

/// Instantiates a catalog entry for `n` processes. Throws ContractViolation
/// for an unknown name or an `n` the entry does not support.
machine::AlgorithmDef Lookup(std::string_view name, int n);

/// The sequential spec an algorithm's responses must linearize against.
/// `universe` only matters for the long-lived contest.
specs::SequentialSpec TargetSpec(const machine::AlgorithmDef& algo,
                                 int universe);

/// The default representative universe for a workload: total invoked
/// competes plus one.
int DefaultUniverse(const machine::Workload& workload);

}  // namespace contestlab::algorithms

#endif  // CONTESTLAB_ALGORITHMS_HPP_
