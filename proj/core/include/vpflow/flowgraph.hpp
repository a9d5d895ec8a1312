#ifndef VPFLOW_FLOWGRAPH_HPP
#define VPFLOW_FLOWGRAPH_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <vector>

#include "vpflow/instance.hpp"

namespace vpflow {

using Coord = std::int32_t;
using Label = std::vector<Coord>;

// item == 0 is a loss arc; items 1..m refer to canonical item ranks.
struct GraphArc {
    int tail = -1;
    int head = -1;
    int item = 0;
};

// Directed acyclic multigraph whose source-to-target paths are the valid
// packing patterns. Node labels are positions; arcs may be longer than
// the item they carry. Finalized graphs are canonical: nodes sorted by
// label (target last among equals), arcs sorted by (tail, head, item),
// duplicates removed.
struct ArcFlowGraph {
    int dim_count = 0;    // label width
    int item_count = 0;   // m of the generating instance
    std::vector<std::vector<Coord>> item_weights;  // by rank, instance weights
    std::vector<Label> labels;
    int source = -1;
    int target = -1;
    std::vector<GraphArc> arcs;

    int node_count() const { return static_cast<int>(labels.size()); }
    int arc_count() const { return static_cast<int>(arcs.size()); }

    std::vector<std::vector<int>> out_arcs() const;  // arc indices by tail node
    std::vector<std::vector<int>> in_arcs() const;
    std::vector<int> topological_order() const;      // throws Error on cycle
    void check_consistent() const;                   // reachability + acyclicity
};

struct BuildLimits {
    std::uint64_t max_states = 100'000'000;
    std::uint64_t max_paths = 1'000'000;
};

// Direct construction of the compressed graph by memoized recursion over
// states (position, item, copies used). Each state is lifted per
// dimension to the highest position reachable given the remaining items
// before memo lookup; tail labels are the componentwise minimum over
// outgoing arcs of head minus item weight. Requires canonical item order.
ArcFlowGraph build_step3(const VbpInstance& inst, const BuildLimits& limits = {});

// Per-dimension state lift: dimension d is raised to
//   W^d - max{ sum_{j>=i} w_j^d y_j : sum <= W^d - x^d, y_i <= b_i - c, y_j <= b_j }.
// `item` and `copies` are 0-based rank and copies of that item already used.
Label lift_state(const VbpInstance& inst, const Label& x, int item, int copies);

// Reported stage sizes: arcs include the final loss arcs; the node count
// of the uncompressed stage excludes the target.
struct StageStats {
    int nodes = 0;
    int arcs = 0;
};

// Explicit four-stage pipeline: uncompressed position graph, level graph,
// target-side longest-path relabeling, source-side relabeling.
struct ReferencePipeline {
    ArcFlowGraph step1, step2, step3, step4;
    std::array<StageStats, 4> stats() const;
};

ReferencePipeline build_reference_pipeline(const VbpInstance& inst, const BuildLimits& limits = {});

// Source-side longest-path relabeling: every node except the target is
// relabeled with the componentwise longest path from the source, equal
// labels merge, duplicate arcs and zero-length self loops are dropped.
// Idempotent; preserves the pattern set.
ArcFlowGraph compress_final(const ArcFlowGraph& g);

// A pattern as copy counts per canonical item rank (size m).
using Pattern = std::vector<int>;

// All patterns represented in the graph, by DFS over source-target paths
// (loss arcs contribute nothing). The empty pattern, which corresponds to
// zero flow, is always reported. Throws ResourceError past `max_paths`.
std::set<Pattern> enumerate_patterns(const ArcFlowGraph& g, std::uint64_t max_paths = 1'000'000);

struct PricedPattern {
    Pattern pattern;
    double reduced_cost = 0.0;
};

// Pattern of smallest reduced cost 1 - max_path sum(duals), by one
// backward dynamic-programming sweep; duals[r] belongs to rank r+1, loss
// arcs price at zero.
PricedPattern price_min_reduced_cost(const ArcFlowGraph& g, std::span<const double> duals);

// Text dump: "<nodes> <arcs>" header, then "id coord..." node lines,
// "tail head item" arc lines, and a "source target" trailer. Output is
// canonical, so equal graphs dump byte-identically.
void write_graph(const ArcFlowGraph& g, std::ostream& out);

}  // namespace vpflow

#endif
