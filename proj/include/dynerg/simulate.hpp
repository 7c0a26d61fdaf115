#pragma once

#include <cstdint>
#include <vector>

#include "dynerg/edge_process.hpp"
#include "dynerg/graph.hpp"
#include "dynerg/theory.hpp"

namespace dynerg {

struct SimConfig {
    long n_vertices = 0;
    std::vector<LabeledGraph> motifs;
    std::vector<double> grid;  // sorted sample times within [0, horizon]
    EdgeDynamics dynamics;
    long replications = 1;
    std::uint64_t seed = 0;
    long recount_every = 0;  // full recount verification every k flips; 0 = off

    // Throws std::invalid_argument on structural problems and RegimeError when
    // a motif violates the vanishing-density requirement (offender named).
    void validate() const;
};

// Counts per motif per grid time for one replication.
struct CountSeries {
    std::vector<std::vector<std::int64_t>> raw;  // [motif][grid]
    std::vector<std::vector<double>> expected;
    std::vector<std::vector<double>> normalized;
};

// Adjacency plus incrementally maintained motif counts.
class GraphState {
  public:
    GraphState(long n, std::vector<LabeledGraph> motifs);

    long vertex_count() const { return n_; }
    std::size_t motif_count() const { return motifs_.size(); }
    bool has_edge(int u, int v) const;
    std::int64_t count(std::size_t motif_index) const { return counts_[motif_index]; }

    // Signed count change for one motif; updates that motif's tally only.
    // Vertices are 0-based; the adjacency itself is left for commit_flip.
    std::int64_t delta_count_on_flip(int u, int v, std::size_t motif_index, int new_value);
    void commit_flip(int u, int v, int new_value);
    // Convenience: all motifs, then commit.
    void apply_flip(int u, int v, int new_value);

    // Brute-force recount of one motif from the adjacency (verification hook).
    std::int64_t recount(std::size_t motif_index) const;

  private:
    struct AnchorRep {
        std::vector<int> order;  // motif vertex placement order; [0]=a, [1]=b
        std::vector<std::vector<int>> prior_neighbors;  // per order slot
        std::int64_t orbit_size = 0;
    };
    struct MotifPlan {
        LabeledGraph graph;
        std::int64_t automorphisms = 0;
        std::vector<AnchorRep> reps;  // directed-edge orbit representatives
    };

    std::int64_t anchored_embeddings(const MotifPlan& plan, int u, int v) const;

    long n_ = 0;
    std::vector<MotifPlan> motifs_;
    std::vector<std::int64_t> counts_;
    std::vector<std::uint64_t> adj_;  // n x n bit matrix, row-major
};

// One replication: sample all edge trajectories, sweep the merged flip stream,
// snapshot counts at grid times (right-continuous), normalize via the theory
// module. Deterministic in (config.seed, replication_index).
CountSeries simulate_counts(const SimConfig& config, long replication_index);

// Recompute expected/normalized rows of a series from its raw counts.
void normalize_series(CountSeries& series, const SimConfig& config);

// All replications, optionally in parallel; results indexed by replication.
std::vector<CountSeries> run_replications(const SimConfig& config, int threads);

}  // namespace dynerg
