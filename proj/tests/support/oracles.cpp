#include "oracles.hpp"

#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vpflow/simplex.hpp"

namespace vpflow::testing {

std::set<Pattern> brute_force_patterns(const VbpInstance& inst) {
    const int m = inst.item_count();
    std::set<Pattern> out;
    Pattern counts(m, 0);
    std::vector<std::int64_t> used(inst.dim_count, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == m) {
            out.insert(counts);
            return;
        }
        rec(i + 1);
        std::int64_t k = 0;
        while (k < inst.items[i].demand) {
            bool ok = true;
            for (int d = 0; d < inst.dim_count; ++d)
                if (used[d] + inst.items[i].weights[d] > inst.capacities[d]) ok = false;
            if (!ok) break;
            for (int d = 0; d < inst.dim_count; ++d) used[d] += inst.items[i].weights[d];
            counts[i] = static_cast<int>(++k);
            rec(i + 1);
        }
        for (int d = 0; d < inst.dim_count; ++d) used[d] -= k * inst.items[i].weights[d];
        counts[i] = 0;
    };
    rec(0);
    return out;
}

std::set<std::vector<int>> all_independent_sets(const ConflictGraph& g) {
    std::set<std::vector<int>> out;
    const int n = g.vertex_count;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> verts;
        for (int v = 0; v < n; ++v)
            if (mask & (1u << v)) verts.push_back(v);
        bool independent = true;
        for (std::size_t i = 0; i < verts.size() && independent; ++i)
            for (std::size_t j = i + 1; j < verts.size(); ++j)
                if (g.has_edge(verts[i], verts[j])) {
                    independent = false;
                    break;
                }
        if (independent) out.insert(verts);
    }
    return out;
}

double pattern_lp_bound(const VbpInstance& inst) {
    const auto patterns = brute_force_patterns(inst);
    DenseLp lp;
    lp.objective.assign(patterns.size(), 1.0);
    lp.rows.resize(inst.item_count());
    for (int i = 0; i < inst.item_count(); ++i) {
        lp.rows[i].sense = '>';
        lp.rows[i].rhs = static_cast<double>(inst.items[i].demand);
    }
    int j = 0;
    for (const auto& pat : patterns) {
        for (int i = 0; i < inst.item_count(); ++i)
            if (pat[i] > 0) lp.rows[i].coeffs.emplace_back(j, static_cast<double>(pat[i]));
        ++j;
    }
    const LpResult res = solve_dense_lp(lp);
    if (res.status != LpResult::Status::optimal)
        throw std::runtime_error("pattern LP failed to solve");
    return res.objective;
}

VbpInstance example1() {
    return make_instance({7}, {{{5}, 3, "1"}, {{3}, 1, "2"}, {{2}, 2, "3"}});
}

VbpInstance example1_with_cardinality() {
    return add_cardinality(example1(), 3);
}

VbpInstance compression_example() {
    return add_cardinality(make_instance({9}, {{{4}, 1, "1"}, {{3}, 3, "2"}, {{2}, 1, "3"}}), 3);
}

VbpInstance random_instance(std::uint64_t seed, int max_items, int max_dims,
                            std::int64_t max_capacity, std::int64_t max_demand) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dims(1, max_dims);
    std::uniform_int_distribution<int> items(1, max_items);
    const int p = dims(rng);
    const int m = items(rng);
    std::vector<std::int64_t> caps(p);
    std::uniform_int_distribution<std::int64_t> cap(2, max_capacity);
    for (auto& c : caps) c = cap(rng);
    std::uniform_int_distribution<std::int64_t> demand(1, max_demand);
    std::vector<ItemType> its;
    for (int i = 0; i < m; ++i) {
        ItemType it;
        it.external_id = std::to_string(i + 1);
        it.demand = demand(rng);
        it.weights.resize(p);
        bool positive = false;
        for (int d = 0; d < p; ++d) {
            std::uniform_int_distribution<std::int64_t> w(0, caps[d]);
            it.weights[d] = w(rng);
            positive |= it.weights[d] > 0;
        }
        if (!positive) {
            std::uniform_int_distribution<std::int64_t> w(1, caps[0]);
            it.weights[0] = w(rng);
        }
        its.push_back(std::move(it));
    }
    return make_instance(std::move(caps), std::move(its));
}

std::string graph_dump(const ArcFlowGraph& g) {
    std::ostringstream ss;
    write_graph(g, ss);
    return ss.str();
}

}  // namespace vpflow::testing
