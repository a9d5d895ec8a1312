#ifndef VPFLOW_DECODE_HPP
#define VPFLOW_DECODE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vpflow/flowgraph.hpp"
#include "vpflow/instance.hpp"
#include "vpflow/reduce.hpp"
#include "vpflow/solve.hpp"

namespace vpflow {

// A packing: patterns with multiplicities plus the concrete bins, each a
// sorted list of item indices (one entry per copy). Trimming can leave a
// bin empty; the bin count never changes.
struct PackingSolution {
    std::vector<std::pair<Pattern, std::int64_t>> patterns;
    std::vector<std::vector<int>> bins;
    std::int64_t objective = 0;
};

// Path decomposition of an integral flow: repeatedly extract the
// source-target path through positive residual flow that prefers the
// highest item rank at each node, subtract its bottleneck, and emit
// (pattern, multiplicity). Deterministic; sum of multiplicities equals z.
std::vector<std::pair<Pattern, std::int64_t>> decompose_flow(const ArcFlowGraph& g,
                                                             const FlowSolution& sol);

// Expands pattern multiplicities into concrete bins over the given
// (canonically ordered) instance and trims copies of over-covered items,
// smallest normalized weight first, until every item is at its demand.
PackingSolution to_bins(const std::vector<std::pair<Pattern, std::int64_t>>& patterns,
                        const VbpInstance& inst);

// Rewrites item ranks back to the original item indices of the
// pre-ordering instance.
PackingSolution relabel_items(const PackingSolution& sol, const CanonicalOrder& order);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Checks capacities in every dimension, exact demand coverage, the
// pattern/bin bookkeeping, and the reduction-specific semantics
// (coloring conflicts, timetable clashes, cardinality, binarity).
ValidationReport validate_solution(const VbpInstance& inst, const PackingSolution& sol,
                                   const ReductionMap& map);

// Text output: line 1 is z, then one line per bin "id×count ...". For
// coloring reductions a vertex -> color listing follows; for timetables a
// period -> triplet listing.
void write_solution(const PackingSolution& sol, const VbpInstance& inst, const ReductionMap& map,
                    std::ostream& out);

}  // namespace vpflow

#endif
