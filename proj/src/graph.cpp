#include "dynerg/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dynerg {

namespace {

// Lexicographically ordered vertex pairs (i,j), i<j, over v local vertices.
// Bit k of an edge mask corresponds to pairs(v)[k].
const std::vector<Edge>& pairs_table(int v) {
    static std::vector<std::vector<Edge>> tables = [] {
        std::vector<std::vector<Edge>> t(kCanonicalizationCap + 1);
        for (int n = 0; n <= kCanonicalizationCap; ++n)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) t[n].push_back({i, j});
        return t;
    }();
    return tables.at(v);
}

int pair_index(int v, int i, int j) {
    if (i > j) std::swap(i, j);
    // Position of (i,j) in lexicographic order: pairs starting below i, then offset.
    // sum_{a<i}(v-1-a) + (j-i-1)
    return i * (2 * v - i - 1) / 2 + (j - i - 1);
}

std::uint32_t remap_mask(std::uint32_t mask, int v, const std::vector<int>& perm) {
    std::uint32_t out = 0;
    const auto& ps = pairs_table(v);
    while (mask) {
        int k = std::countr_zero(mask);
        mask &= mask - 1;
        out |= 1u << pair_index(v, perm[ps[k].first], perm[ps[k].second]);
    }
    return out;
}

// "A < B" under lexicographic edge-list order: the lower differing pair index
// present in A makes A's sorted edge list lexicographically smaller.
bool mask_less(std::uint32_t a, std::uint32_t b) {
    std::uint32_t x = a ^ b;
    if (x == 0) return false;
    return (a & (x & ~(x - 1))) != 0;
}

struct LocalGraph {
    int v = 0;
    std::uint32_t mask = 0;
};

LocalGraph to_local(const LabeledGraph& g) {
    int v = g.vertex_count();
    if (v > kCanonicalizationCap)
        throw std::invalid_argument("graph exceeds the " +
                                    std::to_string(kCanonicalizationCap) +
                                    "-vertex canonicalization cap");
    LocalGraph lg{v, 0};
    const auto& verts = g.vertices();
    auto idx = [&](int label) {
        return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), label) -
                                verts.begin());
    };
    for (const auto& [u, w] : g.edges()) lg.mask |= 1u << pair_index(v, idx(u), idx(w));
    return lg;
}

std::uint32_t canonical_mask(const LocalGraph& g) {
    std::vector<int> perm(g.v);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint32_t best = remap_mask(g.mask, g.v, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        std::uint32_t m = remap_mask(g.mask, g.v, perm);
        if (mask_less(m, best)) best = m;
    }
    return best;
}

std::int64_t automorphisms_of(const LocalGraph& g) {
    std::vector<int> perm(g.v);
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t count = 0;
    do {
        if (remap_mask(g.mask, g.v, perm) == g.mask) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

Pattern pattern_from_mask(int v, std::uint32_t mask) {
    Pattern p;
    p.n_vertices = v;
    const auto& ps = pairs_table(v);
    while (mask) {
        int k = std::countr_zero(mask);
        mask &= mask - 1;
        p.edges.push_back({ps[k].first + 1, ps[k].second + 1});
    }
    std::sort(p.edges.begin(), p.edges.end());
    return p;
}

}  // namespace

LabeledGraph::LabeledGraph(std::vector<int> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    if (!vertices_.empty() && vertices_.front() < 1)
        throw std::invalid_argument("vertex labels must be positive");
    for (auto& [u, v] : edges_) {
        if (u == v) throw std::invalid_argument("self-loop rejected");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (const auto& [u, v] : edges_)
        if (!has_vertex(u) || !has_vertex(v))
            throw std::invalid_argument("edge endpoint not in vertex set");
}

LabeledGraph LabeledGraph::from_edges(std::vector<Edge> edges) {
    std::vector<int> verts;
    for (const auto& [u, v] : edges) {
        verts.push_back(u);
        verts.push_back(v);
    }
    return LabeledGraph(std::move(verts), std::move(edges));
}

bool LabeledGraph::has_vertex(int v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool LabeledGraph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

bool Pattern::operator<(const Pattern& o) const {
    if (n_vertices != o.n_vertices) return n_vertices < o.n_vertices;
    if (edges.size() != o.edges.size()) return edges.size() < o.edges.size();
    return edges < o.edges;
}

std::string Pattern::to_string() const {
    std::ostringstream out;
    out << "V" << n_vertices << "{";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i) out << ",";
        out << edges[i].first << "-" << edges[i].second;
    }
    out << "}";
    return out.str();
}

Pattern canonical_form(const LabeledGraph& g) {
    if (g.edge_count() == 0)
        throw std::invalid_argument("no pattern for edgeless graph");
    LocalGraph lg = to_local(g);
    return pattern_from_mask(lg.v, canonical_mask(lg));
}

LabeledGraph pattern_graph(const Pattern& p) {
    std::vector<int> verts(p.n_vertices);
    std::iota(verts.begin(), verts.end(), 1);
    return LabeledGraph(std::move(verts), p.edges);
}

std::int64_t automorphism_count(const LabeledGraph& g) {
    if (g.vertex_count() == 0) return 1;
    return automorphisms_of(to_local(g));
}

std::int64_t automorphism_count(const Pattern& p) {
    return automorphism_count(pattern_graph(p));
}

std::int64_t subgraph_pattern_count(const LabeledGraph& H, const Pattern& g) {
    const int vg = g.n_vertices;
    const int vh = H.vertex_count();
    if (vg > vh) return 0;

    // Injective maps V(g) -> V(H) carrying every edge of g onto an edge of H,
    // counted then divided by A(g) (each subgraph is hit by exactly A(g) maps).
    // Placement order puts constrained vertices (with already-placed neighbors)
    // first to prune early; isolated vertices land at the end.
    std::vector<std::vector<int>> nbrs(vg + 1);
    for (const auto& [a, b] : g.edges) {
        nbrs[a].push_back(b);
        nbrs[b].push_back(a);
    }
    std::vector<int> order;
    std::vector<bool> placed(vg + 1, false);
    while (static_cast<int>(order.size()) < vg) {
        int best = -1, best_score = -1;
        for (int x = 1; x <= vg; ++x) {
            if (placed[x]) continue;
            int score = 0;
            for (int y : nbrs[x])
                if (placed[y]) ++score;
            // Prefer constrained vertices, then higher degree.
            int key = score * 100 + static_cast<int>(nbrs[x].size());
            if (key > best_score) {
                best_score = key;
                best = x;
            }
        }
        order.push_back(best);
        placed[best] = true;
    }

    const auto& hverts = H.vertices();
    std::vector<int> image(vg + 1, 0);
    std::vector<bool> used(hverts.size(), false);
    std::int64_t maps = 0;
    auto extend = [&](auto&& self, std::size_t depth) -> void {
        if (depth == order.size()) {
            ++maps;
            return;
        }
        int x = order[depth];
        for (std::size_t i = 0; i < hverts.size(); ++i) {
            if (used[i]) continue;
            int cand = hverts[i];
            bool ok = true;
            for (int y : nbrs[x]) {
                if (image[y] != 0 && !H.has_edge(cand, image[y])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            used[i] = true;
            image[x] = cand;
            self(self, depth + 1);
            image[x] = 0;
            used[i] = false;
        }
    };
    extend(extend, 0);

    std::int64_t aut = automorphism_count(g);
    if (maps % aut != 0)
        throw std::logic_error("embedding count not divisible by automorphism count");
    return maps / aut;
}

std::set<Pattern> subgraph_patterns(const LabeledGraph& H) {
    if (H.edge_count() == 0) return {};
    const auto& es = H.edges();
    const int m = H.edge_count();
    if (m >= 31) throw std::invalid_argument("too many edges for subset enumeration");
    std::set<Pattern> out;
    for (std::uint32_t sel = 1; sel < (1u << m); ++sel) {
        std::vector<Edge> sub;
        for (int k = 0; k < m; ++k)
            if (sel & (1u << k)) sub.push_back(es[k]);
        out.insert(canonical_form(LabeledGraph::from_edges(std::move(sub))));
    }
    return out;
}

std::set<Pattern> common_subgraph_patterns(const LabeledGraph& H, const LabeledGraph& H_star) {
    if (H.edge_count() == 0 || H_star.edge_count() == 0)
        throw std::invalid_argument("common subgraph patterns need >= 1 edge on both sides");
    std::set<Pattern> a = subgraph_patterns(H);
    std::set<Pattern> b = subgraph_patterns(H_star);
    std::set<Pattern> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

BigInt graph_count_in_complete(const LabeledGraph& H, std::int64_t N) {
    const int v = H.vertex_count();
    if (N < v) return 0;
    BigInt ways = falling_factorial(N, v);
    BigInt aut = automorphism_count(H);
    if (ways % aut != 0) throw std::logic_error("orbit size does not divide placements");
    return ways / aut;
}

LabeledGraph graph_union(const LabeledGraph& a, const LabeledGraph& b) {
    std::vector<int> verts = a.vertices();
    verts.insert(verts.end(), b.vertices().begin(), b.vertices().end());
    std::vector<Edge> edges = a.edges();
    edges.insert(edges.end(), b.edges().begin(), b.edges().end());
    return LabeledGraph(std::move(verts), std::move(edges));
}

LabeledGraph graph_intersection(const LabeledGraph& a, const LabeledGraph& b) {
    std::vector<int> verts;
    std::set_intersection(a.vertices().begin(), a.vertices().end(), b.vertices().begin(),
                          b.vertices().end(), std::back_inserter(verts));
    std::vector<Edge> edges;
    std::set_intersection(a.edges().begin(), a.edges().end(), b.edges().begin(),
                          b.edges().end(), std::back_inserter(edges));
    return LabeledGraph(std::move(verts), std::move(edges));
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"edge",  "wedge",  "triangle",
                                                   "path4", "cycle4", "K4"};
    return names;
}

bool is_preset_name(const std::string& name) {
    const auto& ns = preset_names();
    return std::find(ns.begin(), ns.end(), name) != ns.end();
}

LabeledGraph parse_graph(const std::string& text) {
    if (text == "edge") return LabeledGraph::from_edges({{1, 2}});
    if (text == "wedge") return LabeledGraph::from_edges({{1, 2}, {2, 3}});
    if (text == "triangle") return LabeledGraph::from_edges({{1, 2}, {1, 3}, {2, 3}});
    if (text == "path4") return LabeledGraph::from_edges({{1, 2}, {2, 3}, {3, 4}});
    if (text == "cycle4") return LabeledGraph::from_edges({{1, 2}, {2, 3}, {3, 4}, {1, 4}});
    if (text == "K4")
        return LabeledGraph::from_edges({{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});

    std::istringstream in(text);
    std::string tag;
    int n = 0;
    if (!(in >> tag >> n) || tag != "V" || n < 1)
        throw std::invalid_argument("graph text must start with 'V <n>' or name a preset");
    std::vector<int> verts(n);
    std::iota(verts.begin(), verts.end(), 1);
    std::vector<int> endpoints;
    std::string token;
    while (in >> token) {
        std::size_t pos = 0;
        int value = 0;
        try {
            value = std::stoi(token, &pos);
        } catch (...) {
            pos = 0;
        }
        if (pos != token.size())
            throw std::invalid_argument("bad token in graph text: " + token);
        if (value < 1 || value > n)
            throw std::invalid_argument("edge endpoint out of declared vertex range");
        endpoints.push_back(value);
    }
    if (endpoints.size() % 2 != 0)
        throw std::invalid_argument("dangling edge endpoint in graph text");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < endpoints.size(); i += 2)
        edges.push_back({endpoints[i], endpoints[i + 1]});
    return LabeledGraph(std::move(verts), std::move(edges));
}

}  // namespace dynerg
