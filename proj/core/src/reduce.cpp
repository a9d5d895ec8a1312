#include "vpflow/reduce.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "vpflow/errors.hpp"

namespace vpflow {

void ConflictGraph::add_edge(int u, int v) {
    if (u == v) throw ValidationError("conflict graph: self-loop at vertex " + std::to_string(u + 1));
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
        throw ValidationError("conflict graph: vertex index out of range");
    edges.insert({std::min(u, v), std::max(u, v)});
}

bool ConflictGraph::has_edge(int u, int v) const {
    return edges.count({std::min(u, v), std::max(u, v)}) > 0;
}

int ConflictGraph::degree(int v) const {
    int d = 0;
    for (const auto& [a, b] : edges)
        if (a == v || b == v) ++d;
    return d;
}

std::vector<std::vector<int>> ConflictGraph::adjacency() const {
    std::vector<std::vector<int>> adj(vertex_count);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

ConflictGraph parse_dimacs(std::istream& in, const std::string& source_name) {
    ConflictGraph g;
    bool have_header = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string kind;
        if (!(ss >> kind)) continue;
        if (kind == "c") continue;
        if (kind == "p") {
            std::string fmt;
            int n = 0;
            long long e = 0;
            if (!(ss >> fmt >> n >> e) || n < 0)
                throw ParseError(source_name + ":" + std::to_string(line_no) +
                                 ": malformed problem line");
            g.vertex_count = n;
            have_header = true;
        } else if (kind == "e") {
            if (!have_header)
                throw ParseError(source_name + ":" + std::to_string(line_no) +
                                 ": edge before problem line");
            int u = 0, v = 0;
            if (!(ss >> u >> v))
                throw ParseError(source_name + ":" + std::to_string(line_no) +
                                 ": malformed edge line");
            try {
                g.add_edge(u - 1, v - 1);
            } catch (const ValidationError& err) {
                throw ParseError(source_name + ":" + std::to_string(line_no) + ": " + err.what());
            }
        }
        // other record types are ignored
    }
    if (!have_header) throw ParseError(source_name + ": missing DIMACS problem line");
    return g;
}

ConflictGraph parse_dimacs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file " + path.string());
    return parse_dimacs(in, path.string());
}

ReductionMap ReductionMap::plain_for(const VbpInstance& inst) {
    ReductionMap map;
    map.kind = ReductionKind::plain;
    for (int d = 0; d < inst.dim_count; ++d)
        map.dim_notes.push_back("input dimension " + std::to_string(d + 1));
    for (const auto& it : inst.items) map.item_sources.push_back("item " + it.external_id);
    map.binary_items.assign(inst.items.size(), false);
    return map;
}

namespace {

void bron_kerbosch(const std::vector<std::vector<int>>& adj, std::vector<int>& R,
                   std::vector<int> P, std::vector<int> X,
                   std::vector<std::vector<int>>& out) {
    if (P.empty() && X.empty()) {
        out.push_back(R);
        return;
    }
    // pivot: vertex of P ∪ X with most neighbours in P
    int pivot = -1, best = -1;
    for (const auto& pool : {P, X}) {
        for (int u : pool) {
            int cnt = 0;
            for (int v : P)
                if (std::binary_search(adj[u].begin(), adj[u].end(), v)) ++cnt;
            if (cnt > best) {
                best = cnt;
                pivot = u;
            }
        }
    }
    std::vector<int> candidates;
    for (int v : P)
        if (!std::binary_search(adj[pivot].begin(), adj[pivot].end(), v)) candidates.push_back(v);
    for (int v : candidates) {
        std::vector<int> P2, X2;
        for (int w : P)
            if (std::binary_search(adj[v].begin(), adj[v].end(), w)) P2.push_back(w);
        for (int w : X)
            if (std::binary_search(adj[v].begin(), adj[v].end(), w)) X2.push_back(w);
        R.push_back(v);
        bron_kerbosch(adj, R, std::move(P2), std::move(X2), out);
        R.pop_back();
        P.erase(std::find(P.begin(), P.end(), v));
        X.push_back(v);
    }
}

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const ConflictGraph& g) {
    const auto adj = g.adjacency();
    std::vector<int> P(g.vertex_count);
    for (int v = 0; v < g.vertex_count; ++v) P[v] = v;
    std::vector<std::vector<int>> out;
    std::vector<int> R;
    bron_kerbosch(adj, R, std::move(P), {}, out);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> clique_edge_cover(const ConflictGraph& g) {
    const auto cliques = maximal_cliques(g);
    std::set<std::pair<int, int>> uncovered = g.edges;
    std::vector<std::vector<int>> cover;
    while (!uncovered.empty()) {
        int best = -1;
        std::size_t best_gain = 0;
        for (int c = 0; c < static_cast<int>(cliques.size()); ++c) {
            std::size_t gain = 0;
            const auto& q = cliques[c];
            for (std::size_t i = 0; i < q.size(); ++i)
                for (std::size_t j = i + 1; j < q.size(); ++j)
                    if (uncovered.count({q[i], q[j]})) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        if (best < 0) throw Error("clique cover failed to make progress");
        const auto& q = cliques[best];
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = i + 1; j < q.size(); ++j) uncovered.erase({q[i], q[j]});
        cover.push_back(q);
    }
    std::sort(cover.begin(), cover.end());
    return cover;
}

std::pair<VbpInstance, ReductionMap> coloring_to_vbp(const ConflictGraph& g, ColoringMode mode) {
    if (g.vertex_count < 1) throw ValidationError("coloring reduction requires a non-empty graph");
    const int n = g.vertex_count;
    const auto adj = g.adjacency();

    std::vector<ItemType> items(n);
    for (int v = 0; v < n; ++v) {
        items[v].demand = 1;
        items[v].external_id = std::to_string(v + 1);
    }
    std::vector<std::int64_t> caps;
    ReductionMap map;
    map.kind = ReductionKind::coloring;
    map.conflicts = g;
    for (int v = 0; v < n; ++v) map.item_sources.push_back("vertex " + std::to_string(v + 1));
    map.binary_items.assign(n, false);

    auto push_dim = [&](std::int64_t cap, const std::string& note) {
        caps.push_back(cap);
        map.dim_notes.push_back(note);
        for (auto& it : items) it.weights.push_back(0);
        return static_cast<int>(caps.size()) - 1;
    };

    switch (mode) {
        case ColoringMode::adjacency:
            for (const auto& [u, v] : g.edges) {
                const int d = push_dim(1, "edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
                items[u].weights[d] = 1;
                items[v].weights[d] = 1;
            }
            break;
        case ColoringMode::degree:
            for (int v = 0; v < n; ++v) {
                const int deg = static_cast<int>(adj[v].size());
                if (deg == 0) continue;
                const int d = push_dim(deg, "degree of vertex " + std::to_string(v + 1));
                items[v].weights[d] = deg;
                for (int u : adj[v]) items[u].weights[d] = 1;
            }
            break;
        case ColoringMode::clique:
            for (const auto& q : clique_edge_cover(g)) {
                std::string label = "clique";
                for (int v : q) label += " " + std::to_string(v + 1);
                const int d = push_dim(1, label);
                for (int v : q) items[v].weights[d] = 1;
            }
            break;
    }

    // Isolated vertices would otherwise have an all-zero weight vector;
    // give each a private unit dimension so the item stays well-formed.
    for (int v = 0; v < n; ++v) {
        if (adj[v].empty()) {
            const int d = push_dim(1, "isolated vertex " + std::to_string(v + 1));
            items[v].weights[d] = 1;
        }
    }

    auto inst = make_instance(std::move(caps), std::move(items));
    return {std::move(inst), std::move(map)};
}

std::pair<VbpInstance, ReductionMap> timetable_to_vbp(int teachers, int classes, int venues,
                                                      const std::vector<Requirement>& reqs) {
    if (teachers < 1 || classes < 1 || venues < 1)
        throw ValidationError("timetable reduction requires positive entity counts");
    if (reqs.empty()) throw ValidationError("timetable reduction requires at least one requirement");

    std::map<std::tuple<int, int, int>, std::int64_t> merged;
    for (const auto& r : reqs) {
        if (r.class_id < 0 || r.class_id >= classes || r.teacher_id < 0 ||
            r.teacher_id >= teachers || r.venue_id < 0 || r.venue_id >= venues)
            throw ValidationError("requirement references an id outside the declared counts");
        if (r.demand < 1) throw ValidationError("requirement demand must be >= 1");
        merged[{r.class_id, r.teacher_id, r.venue_id}] += r.demand;
    }

    const int p = classes + teachers + venues;
    std::vector<std::int64_t> caps(p, 1);
    ReductionMap map;
    map.kind = ReductionKind::timetable;
    map.teachers = teachers;
    map.classes = classes;
    map.venues = venues;
    for (int k = 0; k < classes; ++k) map.dim_notes.push_back("class " + std::to_string(k + 1));
    for (int k = 0; k < teachers; ++k) map.dim_notes.push_back("teacher " + std::to_string(k + 1));
    for (int k = 0; k < venues; ++k) map.dim_notes.push_back("venue " + std::to_string(k + 1));

    std::vector<ItemType> items;
    for (const auto& [key, demand] : merged) {
        const auto [c, t, v] = key;
        ItemType it;
        it.weights.assign(p, 0);
        it.weights[c] = 1;
        it.weights[classes + t] = 1;
        it.weights[classes + teachers + v] = 1;
        it.demand = demand;
        it.external_id = "c" + std::to_string(c + 1) + "t" + std::to_string(t + 1) + "v" +
                         std::to_string(v + 1);
        items.push_back(std::move(it));
        map.item_sources.push_back(items.back().external_id);
        map.requirements.push_back({c, t, v, demand});
    }
    map.binary_items.assign(items.size(), false);

    auto inst = make_instance(std::move(caps), std::move(items));
    return {std::move(inst), std::move(map)};
}

std::tuple<int, int, int, std::vector<Requirement>> parse_timetable(std::istream& in,
                                                                    const std::string& source_name) {
    std::string line;
    int line_no = 0;
    int t = 0, c = 0, v = 0;
    bool have_header = false;
    std::vector<Requirement> reqs;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        if (!have_header) {
            if (!(ss >> t >> c >> v)) {
                if (ss.str().find_first_not_of(" \t\r\n") == std::string::npos) continue;
                throw ParseError(source_name + ":" + std::to_string(line_no) + ": expected 't c v'");
            }
            have_header = true;
            continue;
        }
        Requirement r;
        long long demand;
        if (!(ss >> r.class_id >> r.teacher_id >> r.venue_id >> demand)) {
            std::string rest;
            if (ss.clear(), std::getline(ss, rest), rest.find_first_not_of(" \t\r\n") == std::string::npos &&
                                                        line.find_first_not_of(" \t\r\n") == std::string::npos)
                continue;
            throw ParseError(source_name + ":" + std::to_string(line_no) +
                             ": expected 'class teacher venue demand'");
        }
        r.class_id -= 1;
        r.teacher_id -= 1;
        r.venue_id -= 1;
        r.demand = demand;
        reqs.push_back(r);
    }
    if (!have_header) throw ParseError(source_name + ": missing 't c v' header");
    return {t, c, v, std::move(reqs)};
}

std::tuple<int, int, int, std::vector<Requirement>> parse_timetable(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open timetable file " + path.string());
    return parse_timetable(in, path.string());
}

VbpInstance add_cardinality(const VbpInstance& inst, std::int64_t limit) {
    if (limit < 1) throw ValidationError("cardinality limit must be >= 1");
    VbpInstance out = inst;
    out.dim_count += 1;
    out.capacities.push_back(limit);
    for (auto& it : out.items) it.weights.push_back(1);
    out.validate();
    return out;
}

VbpInstance add_binary_patterns(const VbpInstance& inst) {
    VbpInstance out = inst;
    const int m = inst.item_count();
    out.dim_count += m;
    for (int i = 0; i < m; ++i) out.capacities.push_back(1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) out.items[j].weights.push_back(i == j ? 1 : 0);
    }
    out.validate();
    return out;
}

std::pair<VbpInstance, ReductionMap> add_conflicts(const VbpInstance& inst, const ConflictGraph& g,
                                                   bool binary) {
    if (g.vertex_count != inst.item_count())
        throw ValidationError("conflict graph vertex count must equal the item count");
    VbpInstance out = inst;
    ReductionMap map = ReductionMap::plain_for(inst);
    map.kind = binary ? ReductionKind::binary_conflict : ReductionKind::conflict;
    map.conflicts = g;

    const auto adj = g.adjacency();
    for (int v = 0; v < g.vertex_count; ++v) {
        const int deg = static_cast<int>(adj[v].size());
        if (deg == 0) continue;
        out.dim_count += 1;
        out.capacities.push_back(deg);
        map.dim_notes.push_back("conflict degree of item " + std::to_string(v + 1));
        for (int j = 0; j < out.item_count(); ++j) {
            std::int64_t w = 0;
            if (j == v)
                w = deg;
            else if (std::binary_search(adj[v].begin(), adj[v].end(), j))
                w = 1;
            out.items[j].weights.push_back(w);
        }
    }
    if (binary) {
        // degree rows already force at most one copy of a conflicting item
        // per pattern, so binary dimensions are added only for items
        // without conflict edges
        for (int v = 0; v < g.vertex_count; ++v) {
            if (!adj[v].empty()) {
                map.binary_items[v] = true;
                continue;
            }
            out.dim_count += 1;
            out.capacities.push_back(1);
            map.dim_notes.push_back("binary use of item " + std::to_string(v + 1));
            for (int j = 0; j < out.item_count(); ++j)
                out.items[j].weights.push_back(j == v ? 1 : 0);
            map.binary_items[v] = true;
        }
    }
    out.validate();
    return {std::move(out), std::move(map)};
}

void note_cardinality(ReductionMap& map, const VbpInstance& result, std::int64_t limit) {
    map.cardinality_limit = limit;
    map.dim_notes.push_back("cardinality limit " + std::to_string(limit));
    if (map.kind == ReductionKind::plain) map.kind = ReductionKind::cardinality;
    (void)result;
}

void note_binary_patterns(ReductionMap& map, const VbpInstance& result) {
    const int m = result.item_count();
    for (int i = 0; i < m; ++i)
        map.dim_notes.push_back("binary use of item " + std::to_string(i + 1));
    map.binary_items.assign(m, true);
    if (map.kind == ReductionKind::plain || map.kind == ReductionKind::cardinality)
        map.kind = ReductionKind::binary;
}

}  // namespace vpflow
