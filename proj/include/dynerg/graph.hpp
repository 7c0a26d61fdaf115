#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynerg/rational.hpp"

namespace dynerg {

using Edge = std::pair<int, int>;  // unordered pair stored as (u,v) with u < v

// Finite simple graph on integer-labeled vertices (labels >= 1). Isolated
// vertices are representable: the vertex set is stored explicitly.
class LabeledGraph {
  public:
    LabeledGraph() = default;
    LabeledGraph(std::vector<int> vertices, std::vector<Edge> edges);

    // Vertex set = all edge endpoints.
    static LabeledGraph from_edges(std::vector<Edge> edges);

    const std::vector<int>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    bool has_vertex(int v) const;
    bool has_edge(int u, int v) const;

    bool operator==(const LabeledGraph& o) const {
        return vertices_ == o.vertices_ && edges_ == o.edges_;
    }

  private:
    std::vector<int> vertices_;  // sorted, unique
    std::vector<Edge> edges_;    // sorted, u < v, endpoints present in vertices_
};

// Isomorphism class of a graph with >= 1 edge: a canonical representative on
// labels 1..n_vertices. n_vertices may exceed the number of edge endpoints
// (patterns with isolated vertices).
struct Pattern {
    int n_vertices = 0;
    std::vector<Edge> edges;  // canonical edge list, 1-based, lexicographically sorted

    int n_edges() const { return static_cast<int>(edges.size()); }
    bool operator==(const Pattern& o) const {
        return n_vertices == o.n_vertices && edges == o.edges;
    }
    bool operator<(const Pattern& o) const;
    std::string to_string() const;  // e.g. "V3{1-2,1-3,2-3}"
};

// Largest vertex count accepted by the exhaustive canonicalizer.
inline constexpr int kCanonicalizationCap = 8;

// Projection onto the isomorphism class: exhaustive minimum over all vertex
// permutations, ties broken lexicographically on the sorted edge list.
// Rejects edgeless graphs ("no pattern for edgeless graph").
Pattern canonical_form(const LabeledGraph& g);

// Canonical representative as a LabeledGraph on vertices 1..n.
LabeledGraph pattern_graph(const Pattern& p);

// Number of vertex permutations preserving the edge set.
std::int64_t automorphism_count(const LabeledGraph& g);
std::int64_t automorphism_count(const Pattern& p);

// S(H,g): number of subgraphs (vertex subset, edge subset) of H whose pattern
// is g. A pattern with isolated vertices is counted over all vertex-set
// completions of its edge support.
std::int64_t subgraph_pattern_count(const LabeledGraph& H, const Pattern& g);

// All isolated-vertex-free patterns realizable as subgraphs of H.
std::set<Pattern> subgraph_patterns(const LabeledGraph& H);

// CS(H,H*): isolated-vertex-free patterns realizable as subgraphs of both.
std::set<Pattern> common_subgraph_patterns(const LabeledGraph& H, const LabeledGraph& H_star);

// |G_N(H)| = N!/((N-V(H))! * A(H)): labeled copies of H inside K_N.
// Returns 0 when N < V(H).
BigInt graph_count_in_complete(const LabeledGraph& H, std::int64_t N);

LabeledGraph graph_union(const LabeledGraph& a, const LabeledGraph& b);
LabeledGraph graph_intersection(const LabeledGraph& a, const LabeledGraph& b);

// Text format: first line "V <n>" (vertices 1..n), then one "<u> <v>" line per
// edge. Named presets (edge, wedge, triangle, path4, cycle4, K4) are accepted
// anywhere a graph is expected.
LabeledGraph parse_graph(const std::string& text);
const std::vector<std::string>& preset_names();
bool is_preset_name(const std::string& name);

}  // namespace dynerg
