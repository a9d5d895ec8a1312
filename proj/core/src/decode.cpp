#include "vpflow/decode.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "vpflow/errors.hpp"

namespace vpflow {

std::vector<std::pair<Pattern, std::int64_t>> decompose_flow(const ArcFlowGraph& g,
                                                             const FlowSolution& sol) {
    if (sol.status != SolveStatus::optimal && sol.status != SolveStatus::feasible)
        throw Error("cannot decompose a flow without a solution");
    if (static_cast<int>(sol.arc_flow.size()) != g.arc_count())
        throw Error("flow vector does not match the graph");
    std::vector<std::int64_t> net(g.node_count(), 0);
    for (int a = 0; a < g.arc_count(); ++a) {
        if (sol.arc_flow[a] < 0) throw Error("negative flow on an arc");
        net[g.arcs[a].head] += sol.arc_flow[a];
        net[g.arcs[a].tail] -= sol.arc_flow[a];
    }
    for (int v = 0; v < g.node_count(); ++v) {
        const std::int64_t expect =
            v == g.source ? -sol.objective : v == g.target ? sol.objective : 0;
        if (net[v] != expect) throw Error("flow conservation violated; cannot decompose");
    }

    const auto out_arcs = g.out_arcs();
    std::vector<std::int64_t> residual = sol.arc_flow;
    std::map<Pattern, std::int64_t> mult;
    std::int64_t extracted = 0;
    while (extracted < sol.objective) {
        std::vector<int> path;
        int v = g.source;
        while (v != g.target) {
            int pick = -1;
            for (int a : out_arcs[v]) {
                if (residual[a] <= 0) continue;
                if (pick < 0 || g.arcs[a].item > g.arcs[pick].item) pick = a;
            }
            if (pick < 0)
                throw ConsistencyError("stuck during flow decomposition at node " +
                                       std::to_string(v));
            path.push_back(pick);
            v = g.arcs[pick].head;
        }
        std::int64_t k = sol.objective - extracted;
        for (int a : path) k = std::min(k, residual[a]);
        Pattern pat(g.item_count, 0);
        for (int a : path) {
            residual[a] -= k;
            if (g.arcs[a].item != 0) ++pat[g.arcs[a].item - 1];
        }
        mult[pat] += k;
        extracted += k;
    }
    for (int a = 0; a < g.arc_count(); ++a)
        if (residual[a] != 0)
            throw ConsistencyError("residual flow left after extracting z units");
    return {mult.begin(), mult.end()};
}

PackingSolution to_bins(const std::vector<std::pair<Pattern, std::int64_t>>& patterns,
                        const VbpInstance& inst) {
    const int m = inst.item_count();
    PackingSolution sol;
    sol.patterns = patterns;
    std::vector<std::int64_t> covered(m, 0);
    for (const auto& [pat, k] : patterns) {
        if (static_cast<int>(pat.size()) != m) throw Error("pattern size does not match instance");
        if (k < 0) throw Error("negative pattern multiplicity");
        for (int i = 0; i < m; ++i) covered[i] += static_cast<std::int64_t>(pat[i]) * k;
        for (std::int64_t copy = 0; copy < k; ++copy) {
            std::vector<int> bin;
            for (int i = 0; i < m; ++i)
                for (int c = 0; c < pat[i]; ++c) bin.push_back(i);
            sol.bins.push_back(std::move(bin));
        }
    }
    sol.objective = static_cast<std::int64_t>(sol.bins.size());
    for (int i = 0; i < m; ++i)
        if (covered[i] < inst.items[i].demand)
            throw Error("patterns do not cover the demand of item " + inst.items[i].external_id);

    // trim excess copies, smallest normalized weight first: ranks are
    // sorted by decreasing alpha, so walk them backwards; copies are
    // removed from the later bins first
    for (int i = m - 1; i >= 0; --i) {
        std::int64_t excess = covered[i] - inst.items[i].demand;
        for (auto bin = sol.bins.rbegin(); excess > 0 && bin != sol.bins.rend(); ++bin) {
            while (excess > 0) {
                const auto it = std::find(bin->begin(), bin->end(), i);
                if (it == bin->end()) break;
                bin->erase(it);
                --excess;
            }
        }
    }
    for (auto& bin : sol.bins) std::sort(bin.begin(), bin.end());
    return sol;
}

PackingSolution relabel_items(const PackingSolution& sol, const CanonicalOrder& order) {
    PackingSolution out = sol;
    const int m = static_cast<int>(order.permutation.size());
    for (auto& [pat, k] : out.patterns) {
        Pattern mapped(m, 0);
        for (int r = 0; r < m; ++r) mapped[order.permutation[r]] = pat[r];
        pat = std::move(mapped);
    }
    for (auto& bin : out.bins) {
        for (int& idx : bin) idx = order.permutation[idx];
        std::sort(bin.begin(), bin.end());
    }
    return out;
}

ValidationReport validate_solution(const VbpInstance& inst, const PackingSolution& sol,
                                   const ReductionMap& map) {
    ValidationReport rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.violations.push_back(std::move(msg));
    };
    const int m = inst.item_count();

    if (sol.objective != static_cast<std::int64_t>(sol.bins.size()))
        fail("objective does not equal the bin count");
    std::int64_t mult_total = 0;
    for (const auto& [pat, k] : sol.patterns) mult_total += k;
    if (!sol.patterns.empty() && mult_total != sol.objective)
        fail("pattern multiplicities do not sum to the objective");

    std::vector<std::int64_t> copies(m, 0);
    for (std::size_t b = 0; b < sol.bins.size(); ++b) {
        std::vector<std::int64_t> used(inst.dim_count, 0);
        for (int idx : sol.bins[b]) {
            if (idx < 0 || idx >= m) {
                fail("bin " + std::to_string(b + 1) + " references an unknown item");
                continue;
            }
            ++copies[idx];
            for (int d = 0; d < inst.dim_count; ++d) used[d] += inst.items[idx].weights[d];
        }
        for (int d = 0; d < inst.dim_count; ++d)
            if (used[d] > inst.capacities[d])
                fail("bin " + std::to_string(b + 1) + " exceeds capacity in dimension " +
                     std::to_string(d + 1) + " (" + std::to_string(used[d]) + " > " +
                     std::to_string(inst.capacities[d]) + ")");
        if (map.cardinality_limit &&
            static_cast<std::int64_t>(sol.bins[b].size()) > *map.cardinality_limit)
            fail("bin " + std::to_string(b + 1) + " exceeds the cardinality limit");
        if (!map.binary_items.empty()) {
            std::map<int, int> per_item;
            for (int idx : sol.bins[b]) ++per_item[idx];
            for (const auto& [idx, c] : per_item)
                if (c > 1 && idx < static_cast<int>(map.binary_items.size()) &&
                    map.binary_items[idx])
                    fail("bin " + std::to_string(b + 1) + " repeats binary item " +
                         inst.items[idx].external_id);
        }
        if (map.kind == ReductionKind::coloring || map.kind == ReductionKind::conflict ||
            map.kind == ReductionKind::binary_conflict) {
            const auto& bin = sol.bins[b];
            for (std::size_t x = 0; x < bin.size(); ++x)
                for (std::size_t y = x + 1; y < bin.size(); ++y)
                    if (bin[x] != bin[y] && map.conflicts.has_edge(bin[x], bin[y]))
                        fail("bin " + std::to_string(b + 1) + " joins conflicting items " +
                             std::to_string(bin[x] + 1) + " and " + std::to_string(bin[y] + 1));
        }
        if (map.kind == ReductionKind::timetable) {
            std::set<int> cls, tch, ven;
            for (int idx : sol.bins[b]) {
                if (idx >= static_cast<int>(map.requirements.size())) continue;
                const auto& r = map.requirements[idx];
                if (!cls.insert(r.class_id).second)
                    fail("period " + std::to_string(b + 1) + " double-books class " +
                         std::to_string(r.class_id + 1));
                if (!tch.insert(r.teacher_id).second)
                    fail("period " + std::to_string(b + 1) + " double-books teacher " +
                         std::to_string(r.teacher_id + 1));
                if (!ven.insert(r.venue_id).second)
                    fail("period " + std::to_string(b + 1) + " double-books venue " +
                         std::to_string(r.venue_id + 1));
            }
        }
    }
    for (int i = 0; i < m; ++i)
        if (copies[i] != inst.items[i].demand)
            fail("item " + inst.items[i].external_id + " is assigned " + std::to_string(copies[i]) +
                 " copies, demand is " + std::to_string(inst.items[i].demand));
    return rep;
}

void write_solution(const PackingSolution& sol, const VbpInstance& inst, const ReductionMap& map,
                    std::ostream& out) {
    out << sol.objective << "\n";
    for (const auto& bin : sol.bins) {
        std::map<int, int> counts;
        for (int idx : bin) ++counts[idx];
        bool first = true;
        for (const auto& [idx, c] : counts) {
            if (!first) out << " ";
            out << inst.items[idx].external_id << "x" << c;
            first = false;
        }
        out << "\n";
    }
    if (map.kind == ReductionKind::coloring) {
        out << "# vertex -> color\n";
        for (std::size_t b = 0; b < sol.bins.size(); ++b)
            for (int idx : sol.bins[b]) out << idx + 1 << " -> " << b + 1 << "\n";
    }
    if (map.kind == ReductionKind::timetable) {
        out << "# period: (class, teacher, venue) ...\n";
        for (std::size_t b = 0; b < sol.bins.size(); ++b) {
            out << "period " << b + 1 << ":";
            for (int idx : sol.bins[b]) {
                const auto& r = map.requirements[idx];
                out << " (" << r.class_id + 1 << "," << r.teacher_id + 1 << "," << r.venue_id + 1
                    << ")";
            }
            out << "\n";
        }
    }
}

}  // namespace vpflow
