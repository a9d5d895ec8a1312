#ifndef VPFLOW_REDUCE_HPP
#define VPFLOW_REDUCE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vpflow/instance.hpp"

namespace vpflow {

// Undirected conflict graph; vertices are 0-based internally.
struct ConflictGraph {
    int vertex_count = 0;
    std::set<std::pair<int, int>> edges;  // normalized u < v

    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;
    int degree(int v) const;
    std::vector<std::vector<int>> adjacency() const;
};

// DIMACS .col reader ("p edge n e" header, "e u v" lines, 1-based).
// Duplicate and reversed edge lines are merged.
ConflictGraph parse_dimacs(std::istream& in, const std::string& source_name = "<stream>");
ConflictGraph parse_dimacs(const std::filesystem::path& path);

enum class ColoringMode { adjacency, degree, clique };

enum class ReductionKind {
    plain,
    coloring,
    timetable,
    cardinality,
    binary,
    conflict,
    binary_conflict,
};

// A class/teacher/venue meeting request (ids 0-based).
struct Requirement {
    int class_id = 0;
    int teacher_id = 0;
    int venue_id = 0;
    std::int64_t demand = 1;
};

// Records where every dimension and item of a reduced instance came from,
// and enough of the source problem to validate solutions semantically.
struct ReductionMap {
    ReductionKind kind = ReductionKind::plain;
    std::vector<std::string> dim_notes;      // one entry per dimension
    std::vector<std::string> item_sources;   // one entry per item

    ConflictGraph conflicts;                 // coloring / conflict kinds
    std::vector<Requirement> requirements;   // timetable kind (merged triplets)
    int teachers = 0, classes = 0, venues = 0;
    std::optional<std::int64_t> cardinality_limit;
    std::vector<bool> binary_items;          // items carrying a binary dimension

    static ReductionMap plain_for(const VbpInstance& inst);
};

// All maximal cliques (Bron-Kerbosch with pivoting), each sorted, the
// list ordered lexicographically.
std::vector<std::vector<int>> maximal_cliques(const ConflictGraph& g);

// Subset of the maximal cliques chosen greedily until every edge is
// covered; singleton cliques (isolated vertices) are dropped.
std::vector<std::vector<int>> clique_edge_cover(const ConflictGraph& g);

// Graph coloring as vector packing: one item per vertex with demand one.
// A packing with z bins is a coloring with z colors.
std::pair<VbpInstance, ReductionMap> coloring_to_vbp(const ConflictGraph& g, ColoringMode mode);

// Class-teacher-venue timetabling as vector packing with c+t+v unit
// capacity dimensions; bins are periods. Duplicate triplets are merged by
// summing demands.
std::pair<VbpInstance, ReductionMap> timetable_to_vbp(int teachers, int classes, int venues,
                                                      const std::vector<Requirement>& reqs);

// Timetable text format: line 1 "t c v"; then "class teacher venue demand"
// lines (1-based ids).
std::tuple<int, int, int, std::vector<Requirement>> parse_timetable(
    std::istream& in, const std::string& source_name = "<stream>");
std::tuple<int, int, int, std::vector<Requirement>> parse_timetable(
    const std::filesystem::path& path);

// Appends one dimension of capacity C in which every item weighs 1.
VbpInstance add_cardinality(const VbpInstance& inst, std::int64_t limit);

// Appends m unit-capacity dimensions; item i weighs 1 only in its own.
VbpInstance add_binary_patterns(const VbpInstance& inst);

// Adds conflict dimensions (degree constraints) for a graph over the
// items; with `binary`, also adds per-item binary dimensions, but only
// for items with no conflict edge.
std::pair<VbpInstance, ReductionMap> add_conflicts(const VbpInstance& inst,
                                                   const ConflictGraph& g, bool binary);

// ReductionMap bookkeeping used by the pipeline when stacking reductions.
void note_cardinality(ReductionMap& map, const VbpInstance& result, std::int64_t limit);
void note_binary_patterns(ReductionMap& map, const VbpInstance& result);

}  // namespace vpflow

#endif
