#include "vpflow/flowgraph.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <unordered_map>

#include "vpflow/errors.hpp"

namespace vpflow {

namespace {

constexpr int kLossItem = 0;
constexpr int kTargetSentinel = std::numeric_limits<int>::max();

std::vector<Coord> to_coords(const std::vector<std::int64_t>& v) {
    std::vector<Coord> out;
    out.reserve(v.size());
    for (std::int64_t x : v) {
        if (x < 0 || x > std::numeric_limits<Coord>::max())
            throw Error("coordinate " + std::to_string(x) + " out of graph label range");
        out.push_back(static_cast<Coord>(x));
    }
    return out;
}

std::vector<std::vector<Coord>> instance_weights(const VbpInstance& inst) {
    std::vector<std::vector<Coord>> w;
    w.reserve(inst.items.size());
    for (const auto& it : inst.items) w.push_back(to_coords(it.weights));
    return w;
}

// Interns labels; ids are assigned in first-seen order and remapped to a
// canonical order when the graph is finalized.
class LabelPool {
public:
    int intern(const Label& l) {
        auto [it, inserted] = ids_.try_emplace(l, static_cast<int>(labels_.size()));
        if (inserted) labels_.push_back(l);
        return it->second;
    }
    const Label& label(int id) const { return labels_[id]; }
    int size() const { return static_cast<int>(labels_.size()); }

private:
    std::map<Label, int> ids_;
    std::vector<Label> labels_;
};

// Assembles a canonical ArcFlowGraph from interned internal nodes plus a
// distinct target node. Arc endpoints may use kTargetSentinel to refer to
// the target. With `add_final_losses`, every internal node is connected
// to the target by a loss arc.
ArcFlowGraph finalize_graph(const LabelPool& pool, int source_id, Label target_label,
                            const std::set<std::array<int, 3>>& arcs, int item_count,
                            std::vector<std::vector<Coord>> item_weights,
                            bool add_final_losses = true) {
    const int n = pool.size();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pool.label(a) < pool.label(b); });

    ArcFlowGraph g;
    g.item_count = item_count;
    g.item_weights = std::move(item_weights);
    g.dim_count = static_cast<int>(target_label.size());
    std::vector<int> remap(n, -1);
    for (int pos = 0; pos < n; ++pos) {
        remap[order[pos]] = pos;
        g.labels.push_back(pool.label(order[pos]));
    }
    g.target = n;
    g.labels.push_back(std::move(target_label));
    g.source = remap[source_id];

    for (const auto& [tail, head, item] : arcs) {
        const int t = tail == kTargetSentinel ? g.target : remap[tail];
        const int h = head == kTargetSentinel ? g.target : remap[head];
        if (t == h) continue;
        g.arcs.push_back({t, h, item});
    }
    if (add_final_losses) {
        for (int v = 0; v < g.node_count(); ++v)
            if (v != g.source && v != g.target) g.arcs.push_back({v, g.target, kLossItem});
    }
    std::sort(g.arcs.begin(), g.arcs.end(), [](const GraphArc& a, const GraphArc& b) {
        return std::tie(a.tail, a.head, a.item) < std::tie(b.tail, b.head, b.item);
    });
    g.arcs.erase(std::unique(g.arcs.begin(), g.arcs.end(),
                             [](const GraphArc& a, const GraphArc& b) {
                                 return a.tail == b.tail && a.head == b.head && a.item == b.item;
                             }),
                 g.arcs.end());
    g.check_consistent();
    return g;
}

// Achievable subset sums as a bitset over 0..cap.
struct SumSet {
    int cap = 0;
    std::vector<std::uint64_t> words;

    explicit SumSet(int capacity = 0) : cap(capacity), words(capacity / 64 + 1, 0) {}

    void set_zero() { words[0] |= 1ull; }

    void trim() {
        const int top_bit = cap & 63;
        if (top_bit != 63) words[cap >> 6] &= (~0ull >> (63 - top_bit));
    }

    void or_into(SumSet& acc) const {
        for (std::size_t i = 0; i < words.size(); ++i) acc.words[i] |= words[i];
    }

    // acc |= (*this << shift), truncated at cap
    void shift_or_into(SumSet& acc, int shift) const {
        const int word_shift = shift >> 6;
        const int bit_shift = shift & 63;
        const int nw = static_cast<int>(words.size());
        for (int i = nw - 1; i >= 0; --i) {
            const std::uint64_t w = words[i];
            if (!w) continue;
            const int j = i + word_shift;
            if (j >= nw) continue;
            acc.words[j] |= bit_shift ? (w << bit_shift) : w;
            if (bit_shift && j + 1 < nw) acc.words[j + 1] |= w >> (64 - bit_shift);
        }
        acc.trim();
    }

    int max_le(int t) const {
        if (t < 0) return -1;
        t = std::min(t, cap);
        int w = t >> 6;
        std::uint64_t mask = (t & 63) == 63 ? ~0ull : ((1ull << ((t & 63) + 1)) - 1);
        for (; w >= 0; --w, mask = ~0ull) {
            const std::uint64_t bits = words[w] & mask;
            if (bits) return w * 64 + 63 - __builtin_clzll(bits);
        }
        return -1;
    }
};

// For each dimension d and rank i, the sums achievable in d with items of
// rank >= i at full demand bounds. One table per (dimension, suffix),
// shared across all lift queries of a build.
class SuffixSums {
public:
    SuffixSums(const VbpInstance& inst, const std::vector<Coord>& caps) {
        const int p = inst.dim_count;
        const int m = inst.item_count();
        per_dim_.resize(p);
        for (int d = 0; d < p; ++d) {
            auto& rows = per_dim_[d];
            rows.assign(m + 1, SumSet(caps[d]));
            rows[m].set_zero();
            for (int i = m - 1; i >= 0; --i) {
                const std::int64_t w = inst.items[i].weights[d];
                rows[i] = rows[i + 1];
                if (w > 0) {
                    const std::int64_t copies =
                        std::min<std::int64_t>(inst.items[i].demand, caps[d] / w);
                    SumSet shifted = rows[i + 1];
                    for (std::int64_t k = 1; k <= copies; ++k) {
                        SumSet next(caps[d]);
                        shifted.shift_or_into(next, static_cast<int>(w));
                        next.or_into(rows[i]);
                        shifted = std::move(next);
                    }
                }
            }
        }
    }

    // max sum <= budget in dimension d over items of rank >= i, with at
    // most copies_i copies of item i itself
    int max_fill(const VbpInstance& inst, int d, int i, std::int64_t copies_i, int budget) const {
        const std::int64_t w = inst.items[i].weights[d];
        const SumSet& tail = per_dim_[d][i + 1];
        if (w == 0) return std::max(0, tail.max_le(budget));
        const std::int64_t kmax = std::min<std::int64_t>(copies_i, budget / w);
        int best = 0;
        for (std::int64_t k = 0; k <= kmax; ++k) {
            const int used = static_cast<int>(k * w);
            const int rest = tail.max_le(budget - used);
            if (rest >= 0 && used + rest > best) best = used + rest;
        }
        return best;
    }

private:
    std::vector<std::vector<SumSet>> per_dim_;
};

struct StateKeyHash {
    std::size_t operator()(const std::vector<Coord>& key) const {
        std::size_t h = 1469598103934665603ull;
        for (Coord c : key) {
            h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(c));
            h *= 1099511628211ull;
        }
        return h;
    }
};

Label add_weights(const Label& x, const std::vector<std::int64_t>& w) {
    Label out = x;
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += static_cast<Coord>(w[d]);
    return out;
}

bool fits(const Label& x, const std::vector<std::int64_t>& w, const std::vector<Coord>& caps) {
    for (std::size_t d = 0; d < x.size(); ++d)
        if (x[d] + w[d] > caps[d]) return false;
    return true;
}

}  // namespace

std::vector<std::vector<int>> ArcFlowGraph::out_arcs() const {
    std::vector<std::vector<int>> out(node_count());
    for (int a = 0; a < arc_count(); ++a) out[arcs[a].tail].push_back(a);
    return out;
}

std::vector<std::vector<int>> ArcFlowGraph::in_arcs() const {
    std::vector<std::vector<int>> in(node_count());
    for (int a = 0; a < arc_count(); ++a) in[arcs[a].head].push_back(a);
    return in;
}

std::vector<int> ArcFlowGraph::topological_order() const {
    std::vector<int> indeg(node_count(), 0);
    for (const auto& a : arcs) ++indeg[a.head];
    const auto out = out_arcs();
    std::vector<int> queue, order;
    for (int v = 0; v < node_count(); ++v)
        if (indeg[v] == 0) queue.push_back(v);
    std::make_heap(queue.begin(), queue.end(), std::greater<>());
    while (!queue.empty()) {
        std::pop_heap(queue.begin(), queue.end(), std::greater<>());
        const int v = queue.back();
        queue.pop_back();
        order.push_back(v);
        for (int a : out[v]) {
            if (--indeg[arcs[a].head] == 0) {
                queue.push_back(arcs[a].head);
                std::push_heap(queue.begin(), queue.end(), std::greater<>());
            }
        }
    }
    if (static_cast<int>(order.size()) != node_count()) throw Error("graph contains a cycle");
    return order;
}

void ArcFlowGraph::check_consistent() const {
    topological_order();
    const auto out = out_arcs();
    const auto in = in_arcs();
    std::vector<char> seen(node_count(), 0);
    std::vector<int> stack{source};
    seen[source] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int a : out[v])
            if (!seen[arcs[a].head]) {
                seen[arcs[a].head] = 1;
                stack.push_back(arcs[a].head);
            }
    }
    for (int v = 0; v < node_count(); ++v)
        if (!seen[v]) throw Error("graph node unreachable from source");
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, target);
    seen[target] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int a : in[v])
            if (!seen[arcs[a].tail]) {
                seen[arcs[a].tail] = 1;
                stack.push_back(arcs[a].tail);
            }
    }
    for (int v = 0; v < node_count(); ++v)
        if (!seen[v]) throw Error("graph node cannot reach target");
}

Label lift_state(const VbpInstance& inst, const Label& x, int item, int copies) {
    const auto caps = to_coords(inst.capacities);
    SuffixSums sums(inst, caps);
    Label out = x;
    for (int d = 0; d < inst.dim_count; ++d) {
        const int fill =
            sums.max_fill(inst, d, item, inst.items[item].demand - copies, caps[d] - x[d]);
        out[d] = caps[d] - fill;
    }
    return out;
}

ArcFlowGraph build_step3(const VbpInstance& inst, const BuildLimits& limits) {
    inst.validate();
    if (!is_canonically_ordered(inst))
        throw Error("build_step3 requires items in canonical order");
    const int p = inst.dim_count;
    const int m = inst.item_count();
    const auto caps = to_coords(inst.capacities);
    SuffixSums sums(inst, caps);

    LabelPool pool;
    std::set<std::array<int, 3>> arcs;
    std::unordered_map<std::vector<Coord>, int, StateKeyHash> memo;

    enum Phase { kEnter, kAfterSkip, kAfterUse };
    struct Frame {
        Label x;
        int i, c;
        Phase phase;
        std::vector<Coord> key;
        int up_label = -1;
        bool has_up = false, has_use = false;
    };

    int ret = -1;  // label id returned by the last completed state
    std::vector<Frame> stack;
    stack.push_back({Label(p, 0), 0, 0, kEnter, {}, -1, false, false});
    while (!stack.empty()) {
        Frame& f = stack.back();
        switch (f.phase) {
            case kEnter: {
                for (int d = 0; d < p; ++d) {
                    const int fill = sums.max_fill(inst, d, f.i, inst.items[f.i].demand - f.c,
                                                   caps[d] - f.x[d]);
                    f.x[d] = caps[d] - fill;
                }
                f.key = f.x;
                f.key.push_back(f.i);
                f.key.push_back(f.c);
                if (auto it = memo.find(f.key); it != memo.end()) {
                    ret = it->second;
                    stack.pop_back();
                    break;
                }
                if (memo.size() >= limits.max_states)
                    throw ResourceError("state budget exceeded after expanding " +
                                        std::to_string(memo.size()) + " states");
                f.phase = kAfterSkip;
                if (f.i + 1 < m) {
                    f.has_up = true;
                    stack.push_back({f.x, f.i + 1, 0, kEnter, {}, -1, false, false});
                }
                break;
            }
            case kAfterSkip: {
                if (f.has_up) f.up_label = ret;
                f.phase = kAfterUse;
                if (f.c < inst.items[f.i].demand && fits(f.x, inst.items[f.i].weights, caps)) {
                    f.has_use = true;
                    stack.push_back({add_weights(f.x, inst.items[f.i].weights), f.i, f.c + 1,
                                     kEnter, {}, -1, false, false});
                }
                break;
            }
            case kAfterUse: {
                Label u(caps.begin(), caps.end());
                if (f.has_up) u = pool.label(f.up_label);
                int u_id;
                if (f.has_use) {
                    const int v_id = ret;
                    Label v = pool.label(v_id);
                    for (int d = 0; d < p; ++d)
                        u[d] = std::min<Coord>(
                            u[d], v[d] - static_cast<Coord>(inst.items[f.i].weights[d]));
                    u_id = pool.intern(u);
                    arcs.insert({u_id, v_id, f.i + 1});
                    if (f.has_up && u_id != f.up_label) arcs.insert({u_id, f.up_label, kLossItem});
                } else {
                    u_id = pool.intern(u);
                }
                memo.emplace(std::move(f.key), u_id);
                ret = u_id;
                stack.pop_back();
                break;
            }
        }
    }

    // The root's label is the source; pin it to the origin. No other node
    // can share it: every arc-touched label is the head of some arc, and
    // item arc heads exceed zero in at least one dimension.
    const int source_id = ret;
    std::vector<char> used(pool.size(), 0);
    used[source_id] = 1;
    for (const auto& a : arcs) used[a[0]] = used[a[1]] = 1;
    LabelPool final_pool;
    std::vector<int> remap(pool.size(), -1);
    const Label zero(p, 0);
    for (int id = 0; id < pool.size(); ++id) {
        if (!used[id]) continue;
        const Label& l = id == source_id ? zero : pool.label(id);
        if (id != source_id && l == zero)
            throw ConsistencyError("internal node collides with the source label");
        remap[id] = final_pool.intern(l);
    }
    std::set<std::array<int, 3>> final_arcs;
    for (const auto& a : arcs) final_arcs.insert({remap[a[0]], remap[a[1]], a[2]});
    return finalize_graph(final_pool, remap[source_id], Label(caps.begin(), caps.end()),
                          final_arcs, m, instance_weights(inst));
}

namespace {

// Uncompressed position graph: the arcs of each item are inserted as
// chains of at most b_i consecutive steps starting from every node that
// existed before the item was processed.
ArcFlowGraph build_step1(const VbpInstance& inst, const BuildLimits& limits) {
    const int p = inst.dim_count;
    const int m = inst.item_count();
    const auto caps = to_coords(inst.capacities);

    LabelPool pool;
    std::set<std::array<int, 3>> arcs;
    pool.intern(Label(p, 0));
    for (int i = 0; i < m; ++i) {
        const auto& w = inst.items[i].weights;
        const int existing = pool.size();
        for (int id = 0; id < existing; ++id) {
            Label x = pool.label(id);
            int prev = id;
            for (std::int64_t k = 0; k < inst.items[i].demand; ++k) {
                if (!fits(x, w, caps)) break;
                x = add_weights(x, w);
                const int cur = pool.intern(x);
                if (static_cast<std::uint64_t>(pool.size()) > limits.max_states)
                    throw ResourceError("state budget exceeded while building the position graph");
                arcs.insert({prev, cur, i + 1});
                prev = cur;
            }
        }
    }
    return finalize_graph(pool, 0, Label(caps.begin(), caps.end()), arcs, m,
                          instance_weights(inst));
}

// Level graph: one level per item, item arcs stay within their level,
// copies of a position in consecutive levels are linked by loss arcs.
// Final loss arcs only leave the last copy of each position; earlier
// copies reach the target through the level chain.
ArcFlowGraph build_step2(const ArcFlowGraph& s1, const VbpInstance& inst) {
    const int p = inst.dim_count;
    const int m = inst.item_count();

    std::map<Label, std::set<int>> levels;
    for (const auto& a : s1.arcs) {
        if (a.item == kLossItem) continue;
        levels[s1.labels[a.tail]].insert(a.item);
        levels[s1.labels[a.head]].insert(a.item);
    }

    LabelPool pool;
    std::set<std::array<int, 3>> arcs;
    auto level_node = [&](const Label& pos, int level) {
        Label l = pos;
        l.push_back(static_cast<Coord>(level));
        return pool.intern(l);
    };
    const Label zero(p, 0);
    const int source = level_node(zero, *levels.at(zero).begin());
    for (const auto& [pos, lvls] : levels) {
        int prev = -1;
        for (int l : lvls) {
            const int cur = level_node(pos, l);
            if (prev >= 0) arcs.insert({prev, cur, kLossItem});
            prev = cur;
        }
        if (prev != source) arcs.insert({prev, kTargetSentinel, kLossItem});
    }
    for (const auto& a : s1.arcs) {
        if (a.item == kLossItem) continue;
        arcs.insert({level_node(s1.labels[a.tail], a.item),
                     level_node(s1.labels[a.head], a.item), a.item});
    }
    Label target_label = to_coords(inst.capacities);
    target_label.push_back(static_cast<Coord>(m + 1));
    return finalize_graph(pool, source, std::move(target_label), arcs, m,
                          instance_weights(inst), /*add_final_losses=*/false);
}

// Shared by the two longest-path relabelings: relabel every non-target
// node, merge equal labels, drop self loops and duplicates, reattach the
// final loss arcs.
ArcFlowGraph relabel_merge(const ArcFlowGraph& g, const std::vector<Label>& new_label,
                           Label target_label) {
    LabelPool pool;
    std::vector<int> remap(g.node_count(), kTargetSentinel);
    for (int v = 0; v < g.node_count(); ++v)
        if (v != g.target) remap[v] = pool.intern(new_label[v]);
    std::set<std::array<int, 3>> arcs;
    for (const auto& a : g.arcs) {
        const int t = remap[a.tail];
        const int h = remap[a.head];
        if (t == h) {
            if (a.item != kLossItem)
                throw ConsistencyError("item arc collapsed to a self loop during relabeling");
            continue;
        }
        arcs.insert({t, h, a.item});
    }
    return finalize_graph(pool, remap[g.source], std::move(target_label), arcs, g.item_count,
                          g.item_weights);
}

Coord arc_weight(const ArcFlowGraph& g, const GraphArc& a, int d) {
    return a.item == kLossItem ? 0 : g.item_weights[a.item - 1][d];
}

// Target-side longest-path relabeling of the level graph; drops the level
// coordinate.
ArcFlowGraph apply_phi(const ArcFlowGraph& s2, const VbpInstance& inst) {
    const int p = inst.dim_count;
    const auto caps = to_coords(inst.capacities);
    const auto order = s2.topological_order();
    const auto out = s2.out_arcs();

    std::vector<Label> phi(s2.node_count());
    phi[s2.target] = Label(caps.begin(), caps.end());
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        if (v == s2.target) continue;
        Label l(p, std::numeric_limits<Coord>::max());
        for (int a : out[v]) {
            const Label& h = phi[s2.arcs[a].head];
            for (int d = 0; d < p; ++d)
                l[d] = std::min<Coord>(l[d], h[d] - arc_weight(s2, s2.arcs[a], d));
        }
        phi[v] = std::move(l);
    }
    phi[s2.source] = Label(p, 0);
    return relabel_merge(s2, phi, Label(caps.begin(), caps.end()));
}

}  // namespace

ReferencePipeline build_reference_pipeline(const VbpInstance& inst, const BuildLimits& limits) {
    inst.validate();
    if (!is_canonically_ordered(inst))
        throw Error("the reference pipeline requires items in canonical order");
    ReferencePipeline pipe;
    pipe.step1 = build_step1(inst, limits);
    pipe.step2 = build_step2(pipe.step1, inst);
    pipe.step3 = apply_phi(pipe.step2, inst);
    pipe.step4 = compress_final(pipe.step3);
    return pipe;
}

std::array<StageStats, 4> ReferencePipeline::stats() const {
    // The uncompressed stage is reported without the target node.
    return {StageStats{step1.node_count() - 1, step1.arc_count()},
            StageStats{step2.node_count(), step2.arc_count()},
            StageStats{step3.node_count(), step3.arc_count()},
            StageStats{step4.node_count(), step4.arc_count()}};
}

ArcFlowGraph compress_final(const ArcFlowGraph& g) {
    if (static_cast<int>(g.item_weights.size()) != g.item_count)
        throw Error("graph is missing item weights");
    for (const auto& w : g.item_weights)
        if (static_cast<int>(w.size()) != g.dim_count)
            throw Error("item weight width does not match the graph label width");
    const auto order = g.topological_order();
    const auto in = g.in_arcs();
    const int p = g.dim_count;

    std::vector<Label> psi(g.node_count());
    psi[g.source] = Label(p, 0);
    for (int v : order) {
        if (v == g.source || v == g.target) continue;
        Label l(p, 0);
        for (int a : in[v]) {
            const Label& t = psi[g.arcs[a].tail];
            for (int d = 0; d < p; ++d)
                l[d] = std::max<Coord>(l[d], t[d] + arc_weight(g, g.arcs[a], d));
        }
        psi[v] = std::move(l);
    }
    psi[g.target] = g.labels[g.target];
    return relabel_merge(g, psi, g.labels[g.target]);
}

std::set<Pattern> enumerate_patterns(const ArcFlowGraph& g, std::uint64_t max_paths) {
    std::set<Pattern> out;
    out.insert(Pattern(g.item_count, 0));  // zero flow: the empty pattern
    const auto adj = g.out_arcs();
    std::uint64_t paths = 0;

    struct Level {
        int node;
        std::size_t next;
    };
    std::vector<Level> stack{{g.source, 0}};
    Pattern counts(g.item_count, 0);
    auto undo_into_parent = [&]() {
        stack.pop_back();
        if (!stack.empty()) {
            const auto& prev = stack.back();
            const auto& a = g.arcs[adj[prev.node][prev.next - 1]];
            if (a.item != kLossItem) --counts[a.item - 1];
        }
    };
    while (!stack.empty()) {
        Level& top = stack.back();
        if (top.node == g.target) {
            if (++paths > max_paths)
                throw ResourceError("path budget exceeded while enumerating patterns");
            out.insert(counts);
            undo_into_parent();
            continue;
        }
        if (top.next < adj[top.node].size()) {
            const auto& a = g.arcs[adj[top.node][top.next++]];
            if (a.item != kLossItem) ++counts[a.item - 1];
            stack.push_back({a.head, 0});
        } else {
            undo_into_parent();
        }
    }
    return out;
}

PricedPattern price_min_reduced_cost(const ArcFlowGraph& g, std::span<const double> duals) {
    if (static_cast<int>(duals.size()) != g.item_count)
        throw Error("dual vector size does not match the item count");
    const auto order = g.topological_order();
    const auto out = g.out_arcs();
    std::vector<double> f(g.node_count(), 0.0);
    std::vector<int> best_arc(g.node_count(), -1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        if (v == g.target) continue;
        double best = -std::numeric_limits<double>::infinity();
        int arg = -1;
        for (int a : out[v]) {
            const auto& arc = g.arcs[a];
            const double price = arc.item == kLossItem ? 0.0 : duals[arc.item - 1];
            if (const double cand = f[arc.head] + price; cand > best) {
                best = cand;
                arg = a;
            }
        }
        f[v] = best;
        best_arc[v] = arg;
    }
    PricedPattern res;
    res.pattern.assign(g.item_count, 0);
    for (int v = g.source; v != g.target; v = g.arcs[best_arc[v]].head) {
        const auto& arc = g.arcs[best_arc[v]];
        if (arc.item != kLossItem) ++res.pattern[arc.item - 1];
    }
    res.reduced_cost = 1.0 - f[g.source];
    return res;
}

void write_graph(const ArcFlowGraph& g, std::ostream& out) {
    out << g.node_count() << " " << g.arc_count() << "\n";
    for (int v = 0; v < g.node_count(); ++v) {
        out << v;
        for (Coord c : g.labels[v]) out << " " << c;
        out << "\n";
    }
    for (const auto& a : g.arcs) out << a.tail << " " << a.head << " " << a.item << "\n";
    out << g.source << " " << g.target << "\n";
}

}  // namespace vpflow
