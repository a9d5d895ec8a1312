#include <benchmark/benchmark.h>

#include <random>

#include "vpflow/flowgraph.hpp"
#include "vpflow/instance.hpp"
#include "vpflow/reduce.hpp"

namespace {

using namespace vpflow;

VbpInstance bpp_instance(int m, std::int64_t capacity, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> w(capacity / 10, capacity / 2);
    std::uniform_int_distribution<std::int64_t> d(1, 5);
    std::vector<ItemType> items;
    for (int i = 0; i < m; ++i) items.push_back({{w(rng)}, d(rng), std::to_string(i + 1)});
    auto inst = make_instance({capacity}, std::move(items));
    return apply_order(inst, canonical_order(inst));
}

VbpInstance queen_instance(int q) {
    ConflictGraph g;
    g.vertex_count = q * q;
    auto attacks = [&](int a, int b) {
        const int ra = a / q, ca = a % q, rb = b / q, cb = b % q;
        return ra == rb || ca == cb || (ra - rb) == (ca - cb) || (ra - rb) == (cb - ca);
    };
    for (int a = 0; a < q * q; ++a)
        for (int b = a + 1; b < q * q; ++b)
            if (attacks(a, b)) g.add_edge(a, b);
    auto inst = coloring_to_vbp(g, ColoringMode::degree).first;
    return apply_order(inst, canonical_order(inst));
}

void BuildBpp(benchmark::State& state) {
    const auto inst = bpp_instance(static_cast<int>(state.range(0)), 1000, 11);
    for (auto _ : state) {
        auto g = build_step3(inst);
        benchmark::DoNotOptimize(g.arc_count());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BuildBpp)->Range(8, 128)->Complexity();

void BuildQueen(benchmark::State& state) {
    const auto inst = queen_instance(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto g = build_step3(inst);
        benchmark::DoNotOptimize(g.arc_count());
    }
}
BENCHMARK(BuildQueen)->DenseRange(4, 6);

void CompressFinal(benchmark::State& state) {
    const auto inst = bpp_instance(static_cast<int>(state.range(0)), 1000, 13);
    const auto g = build_step3(inst);
    for (auto _ : state) {
        auto c = compress_final(g);
        benchmark::DoNotOptimize(c.arc_count());
    }
}
BENCHMARK(CompressFinal)->Range(16, 128);

void LiftState(benchmark::State& state) {
    const auto inst = bpp_instance(64, 1000, 17);
    Label x(1, 137);
    for (auto _ : state) {
        auto l = lift_state(inst, x, 3, 0);
        benchmark::DoNotOptimize(l[0]);
    }
}
BENCHMARK(LiftState);

void PriceGraph(benchmark::State& state) {
    const auto inst = bpp_instance(static_cast<int>(state.range(0)), 1000, 19);
    const auto g = compress_final(build_step3(inst));
    std::vector<double> duals(inst.item_count());
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& d : duals) d = u(rng);
    for (auto _ : state) {
        auto p = price_min_reduced_cost(g, duals);
        benchmark::DoNotOptimize(p.reduced_cost);
    }
}
BENCHMARK(PriceGraph)->Range(16, 128);

void EnumeratePatterns(benchmark::State& state) {
    const auto inst = bpp_instance(10, 60, 29);
    const auto g = compress_final(build_step3(inst));
    for (auto _ : state) {
        auto pats = enumerate_patterns(g, 5'000'000);
        benchmark::DoNotOptimize(pats.size());
    }
}
BENCHMARK(EnumeratePatterns);

}  // namespace

BENCHMARK_MAIN();
