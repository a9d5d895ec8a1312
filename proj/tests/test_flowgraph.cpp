#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vpflow/errors.hpp"
#include "vpflow/flowgraph.hpp"

using namespace vpflow;
using vpflow::testing::brute_force_patterns;
using vpflow::testing::graph_dump;

namespace {

std::set<Label> label_set(const ArcFlowGraph& g) {
    return {g.labels.begin(), g.labels.end()};
}

}  // namespace

TEST_CASE("single item filling the bin") {
    const auto inst = make_instance({6}, {{{6}, 1, "1"}});
    const auto g = build_step3(inst);
    CHECK(g.node_count() == 3);
    CHECK(g.arc_count() == 2);  // one item arc, one final loss arc
    CHECK(g.labels[g.source] == Label{0});
    CHECK(g.labels[g.target] == Label{6});
}

TEST_CASE("capacity-7 instance: frozen builder output") {
    const auto g = build_step3(vpflow::testing::example1());
    CHECK(label_set(g) == std::set<Label>{{0}, {3}, {5}, {7}});
    const std::string expected =
        "5 8\n"
        "0 0\n"
        "1 3\n"
        "2 5\n"
        "3 7\n"
        "4 7\n"
        "0 1 0\n"
        "0 1 2\n"
        "0 2 1\n"
        "1 2 3\n"
        "1 4 0\n"
        "2 3 3\n"
        "2 4 0\n"
        "3 4 0\n"
        "0 4\n";
    CHECK(graph_dump(g) == expected);
    CHECK(graph_dump(compress_final(g)) == expected);  // already at the fixpoint
}

TEST_CASE("capacity-7 instance: pattern set equals brute force") {
    const auto inst = vpflow::testing::example1();
    const auto g = compress_final(build_step3(inst));
    const auto pats = enumerate_patterns(g);
    CHECK(pats == brute_force_patterns(inst));
    // explicit frozen set, counts ordered as (5, 3, 2)
    const std::set<Pattern> expected = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 1, 0},
                                        {0, 1, 1}, {0, 1, 2}, {1, 0, 0}, {1, 0, 1}};
    CHECK(pats == expected);
}

TEST_CASE("cardinality variant stays complete and bounded") {
    const auto inst = vpflow::testing::example1_with_cardinality();
    const auto g = compress_final(build_step3(inst));
    const auto pats = enumerate_patterns(g);
    CHECK(pats == brute_force_patterns(inst));
    for (const auto& p : pats) {
        int items = 0;
        for (int c : p) items += c;
        CHECK(items <= 3);
    }
}

TEST_CASE("lift raises states per dimension") {
    const auto inst = vpflow::testing::example1();
    // nothing used, all items ahead: the bin can be filled completely
    CHECK(lift_state(inst, {0}, 0, 0) == Label{0});
    // after one size-5 item only a size-2 item still fits
    CHECK(lift_state(inst, {5}, 1, 0) == Label{5});
    // only size-2 items remain: at most 4 of 7 units usable
    CHECK(lift_state(inst, {0}, 2, 0) == Label{3});
    // no remaining item fits: lifted to the capacity
    CHECK(lift_state(inst, {6}, 2, 2) == Label{7});
}

TEST_CASE("worked compression example: reported stage counts") {
    const auto pipe = build_reference_pipeline(vpflow::testing::compression_example());
    const auto st = pipe.stats();
    CHECK(st[0].nodes == 9);
    CHECK(st[0].arcs == 18);
    CHECK(st[2].nodes == 8);
    CHECK(st[2].arcs == 17);
    CHECK(st[3].nodes == 7);
    CHECK(st[3].arcs == 15);
    // the node that collapses in the last step sits one loss arc above the
    // size-4 head
    CHECK(label_set(pipe.step3).count({5, 1}) == 1);
    CHECK(label_set(pipe.step4).count({5, 1}) == 0);
}

TEST_CASE("single-item instance: all four stages isomorphic") {
    const auto inst = make_instance({5}, {{{5}, 1, "1"}});
    const auto pipe = build_reference_pipeline(inst);
    const auto st = pipe.stats();
    CHECK(st[2].nodes == st[3].nodes);
    CHECK(st[2].arcs == st[3].arcs);
    CHECK(enumerate_patterns(pipe.step1) == enumerate_patterns(pipe.step4));
}

TEST_CASE("level graph visits items in non-decreasing rank") {
    for (std::uint64_t seed : {3, 7, 11, 19}) {
        const auto raw = vpflow::testing::random_instance(seed);
        const auto inst = apply_order(raw, canonical_order(raw));
        const auto pipe = build_reference_pipeline(inst);
        const auto& s2 = pipe.step2;
        const int level_coord = s2.dim_count - 1;
        for (const auto& arc : s2.arcs) {
            if (arc.head == s2.target) continue;
            if (arc.item != 0) {
                CHECK(s2.labels[arc.tail][level_coord] == arc.item);
                CHECK(s2.labels[arc.head][level_coord] == arc.item);
            } else {
                CHECK(s2.labels[arc.tail][level_coord] <= s2.labels[arc.head][level_coord]);
            }
        }
    }
}

namespace {

// graphs may carry patterns that exceed an item's demand (the model's
// demand rows and arc bounds exclude them from solutions); restricting to
// demand-feasible patterns must recover the brute-force set exactly
std::set<Pattern> demand_feasible(const std::set<Pattern>& pats, const VbpInstance& inst) {
    std::set<Pattern> out;
    for (const auto& p : pats) {
        bool ok = true;
        for (int i = 0; i < inst.item_count(); ++i)
            if (p[i] > inst.items[i].demand) ok = false;
        if (ok) out.insert(p);
    }
    return out;
}

void check_capacity_sound(const std::set<Pattern>& pats, const VbpInstance& inst) {
    for (const auto& pat : pats) {
        for (int d = 0; d < inst.dim_count; ++d) {
            std::int64_t sum = 0;
            for (int i = 0; i < inst.item_count(); ++i)
                sum += static_cast<std::int64_t>(pat[i]) * inst.items[i].weights[d];
            CHECK(sum <= inst.capacities[d]);
        }
    }
}

bool subset_of(const std::set<Pattern>& a, const std::set<Pattern>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("compression never removes patterns and never breaks capacity") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto raw = vpflow::testing::random_instance(seed);
        const auto inst = apply_order(raw, canonical_order(raw));
        const auto pipe = build_reference_pipeline(inst);
        const auto p2 = enumerate_patterns(pipe.step2);
        const auto p3 = enumerate_patterns(pipe.step3);
        const auto p4 = enumerate_patterns(pipe.step4);
        CAPTURE(seed);
        CHECK(subset_of(p2, p3));
        CHECK(subset_of(p3, p4));
        check_capacity_sound(p4, inst);
        const auto brute = brute_force_patterns(inst);
        CHECK(demand_feasible(p2, inst) == brute);
        CHECK(demand_feasible(p3, inst) == brute);
        CHECK(demand_feasible(p4, inst) == brute);
    }
}

TEST_CASE("pattern completeness of the direct build on random instances") {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        const auto raw = vpflow::testing::random_instance(seed);
        const auto inst = apply_order(raw, canonical_order(raw));
        const auto g = compress_final(build_step3(inst));
        CAPTURE(seed);
        const auto pats = enumerate_patterns(g);
        const auto brute = brute_force_patterns(inst);
        CHECK(subset_of(brute, pats));                    // every valid pattern is a path
        CHECK(demand_feasible(pats, inst) == brute);      // nothing else below the demands
        check_capacity_sound(pats, inst);                 // no capacity violation at all
        CHECK_NOTHROW(g.check_consistent());
    }
}

TEST_CASE("compress_final is idempotent and never grows the graph") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto raw = vpflow::testing::random_instance(seed);
        const auto inst = apply_order(raw, canonical_order(raw));
        const auto direct = build_step3(inst);
        const auto once = compress_final(direct);
        const auto twice = compress_final(once);
        CHECK(graph_dump(once) == graph_dump(twice));
        CHECK(once.arc_count() <= direct.arc_count());
    }
}

TEST_CASE("identical instances produce identical graphs") {
    const auto a = build_step3(vpflow::testing::example1_with_cardinality());
    const auto b = build_step3(vpflow::testing::example1_with_cardinality());
    CHECK(graph_dump(a) == graph_dump(b));
}

TEST_CASE("builder requires canonical order") {
    const auto shuffled = make_instance({7}, {{{2}, 2, "3"}, {{5}, 3, "1"}, {{3}, 1, "2"}});
    CHECK_THROWS_AS(build_step3(shuffled), Error);
}

TEST_CASE("state budget failure is explicit") {
    BuildLimits limits;
    limits.max_states = 2;
    CHECK_THROWS_AS(build_step3(vpflow::testing::example1(), limits), ResourceError);
}

TEST_CASE("path budget failure is explicit") {
    const auto g = compress_final(build_step3(vpflow::testing::example1()));
    CHECK_THROWS_AS(enumerate_patterns(g, 2), ResourceError);
}

TEST_CASE("loss-only graph yields exactly the empty pattern") {
    ArcFlowGraph g;
    g.dim_count = 1;
    g.item_count = 1;
    g.item_weights = {{1}};
    g.labels = {{0}, {1}};
    g.source = 0;
    g.target = 1;
    g.arcs = {{0, 1, 0}};
    CHECK(enumerate_patterns(g) == std::set<Pattern>{{0}});
}

TEST_CASE("pricing matches the path-enumeration oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dual(0.0, 1.0);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto raw = vpflow::testing::random_instance(seed);
        const auto inst = apply_order(raw, canonical_order(raw));
        const auto g = compress_final(build_step3(inst));
        std::vector<double> duals(inst.item_count());
        for (auto& d : duals) d = dual(rng);
        const auto priced = price_min_reduced_cost(g, duals);
        // oracle: maximize the dual value over every path of the graph
        double best = 0.0;
        for (const auto& pat : enumerate_patterns(g)) {
            double v = 0.0;
            for (int i = 0; i < inst.item_count(); ++i) v += duals[i] * pat[i];
            best = std::max(best, v);
        }
        CHECK(priced.reduced_cost == doctest::Approx(1.0 - best).epsilon(1e-9));
        double got = 0.0;
        for (int i = 0; i < inst.item_count(); ++i) got += duals[i] * priced.pattern[i];
        CHECK(got == doctest::Approx(best).epsilon(1e-9));
        // never weaker than the best demand-feasible pattern
        double best_valid = 0.0;
        for (const auto& pat : brute_force_patterns(inst)) {
            double v = 0.0;
            for (int i = 0; i < inst.item_count(); ++i) v += duals[i] * pat[i];
            best_valid = std::max(best_valid, v);
        }
        CHECK(priced.reduced_cost <= 1.0 - best_valid + 1e-9);
    }
}

TEST_CASE("pricing on the capacity-7 instance") {
    const auto inst = vpflow::testing::example1();
    const auto g = compress_final(build_step3(inst));

    const std::vector<double> zeros{0.0, 0.0, 0.0};
    CHECK(price_min_reduced_cost(g, zeros).reduced_cost == doctest::Approx(1.0));

    const std::vector<double> unit_first{1.0, 0.0, 0.0};
    CHECK(price_min_reduced_cost(g, unit_first).reduced_cost == doctest::Approx(0.0));

    const std::vector<double> mixed{1.0, 0.0, 0.1};
    const auto priced = price_min_reduced_cost(g, mixed);
    CHECK(priced.reduced_cost == doctest::Approx(-0.1));
    CHECK(priced.pattern == Pattern{1, 0, 1});  // one size-5 and one size-2

    // duals at 1 / (max items per bin): a full pattern prices to zero
    const std::vector<double> thirds{1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK(price_min_reduced_cost(g, thirds).reduced_cost == doctest::Approx(0.0));
}

TEST_CASE("reference step4 and direct build agree on patterns") {
    const auto inst = vpflow::testing::example1();
    const auto pipe = build_reference_pipeline(inst);
    const auto direct = compress_final(build_step3(inst));
    CHECK(enumerate_patterns(pipe.step4) == enumerate_patterns(direct));
}

TEST_CASE("graph dump round-trips through a reader") {
    const auto g = compress_final(build_step3(vpflow::testing::example1_with_cardinality()));
    std::istringstream in(graph_dump(g));
    int nodes = 0, arcs = 0;
    REQUIRE((in >> nodes >> arcs));
    CHECK(nodes == g.node_count());
    CHECK(arcs == g.arc_count());
    for (int v = 0; v < nodes; ++v) {
        int id;
        REQUIRE((in >> id));
        CHECK(id == v);
        Label l(g.dim_count);
        for (auto& c : l) REQUIRE((in >> c));
        CHECK(l == g.labels[v]);
    }
    for (int a = 0; a < arcs; ++a) {
        int t, h, i;
        REQUIRE((in >> t >> h >> i));
        CHECK(t == g.arcs[a].tail);
        CHECK(h == g.arcs[a].head);
        CHECK(i == g.arcs[a].item);
    }
    int s, t;
    REQUIRE((in >> s >> t));
    CHECK(s == g.source);
    CHECK(t == g.target);
}
