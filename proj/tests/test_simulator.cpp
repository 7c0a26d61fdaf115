#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dynerg/simulate.hpp"

using namespace dynerg;

namespace {

std::vector<LabeledGraph> motif_set(std::initializer_list<const char*> names) {
    std::vector<LabeledGraph> out;
    for (const char* name : names) out.push_back(parse_graph(name));
    return out;
}

SimConfig small_config() {
    return SimConfig{12,
                     motif_set({"edge", "triangle"}),
                     {0.0, 0.25, 0.6, 1.0},
                     EdgeDynamics(1.0, 1.0, ScalingRegime::constant_one(), 1.0),
                     4,
                     2024,
                     0};
}

LabeledGraph snapshot_graph(long n, const std::vector<std::vector<int>>& states) {
    std::vector<int> verts(static_cast<std::size_t>(n));
    std::iota(verts.begin(), verts.end(), 1);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (states[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)])
                edges.push_back({u + 1, v + 1});
    return LabeledGraph(verts, edges);
}

}  // namespace

TEST_CASE("config validation") {
    SimConfig config = small_config();
    CHECK_NOTHROW(config.validate());

    SimConfig bad = small_config();
    bad.grid = {};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small_config();
    bad.grid = {0.5, 0.2};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small_config();
    bad.grid = {0.0, 2.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small_config();
    bad.motifs.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small_config();
    bad.replications = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small_config();
    bad.motifs.push_back(LabeledGraph({1, 2, 3}, {}));
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    // A motif whose density does not vanish is a regime incompatibility.
    SimConfig dense_triangle = small_config();
    dense_triangle.dynamics = EdgeDynamics(1.0, 1.0, ScalingRegime::power_law("1"), 1.0);
    CHECK_THROWS_AS(dense_triangle.validate(), RegimeError);

    // Tally overflow guard: K4 counts at N = 2e5 exceed 2^62.
    SimConfig huge = small_config();
    huge.n_vertices = 200000;
    huge.motifs = motif_set({"K4"});
    CHECK_THROWS_AS(huge.validate(), std::invalid_argument);
}

TEST_CASE("incremental counts match full recounts under random toggling") {
    const long n = 8;
    GraphState state(n, motif_set({"edge", "wedge", "triangle", "path4", "cycle4"}));
    RngStream rng = RngStream::keyed(5, 4, 3, 2);
    for (int op = 0; op < 300; ++op) {
        const int u = static_cast<int>(rng.uniform01() * n);
        int v = static_cast<int>(rng.uniform01() * n);
        if (u == v) v = (v + 1) % n;
        state.apply_flip(std::min(u, v), std::max(u, v), state.has_edge(u, v) ? 0 : 1);
        for (std::size_t m = 0; m < state.motif_count(); ++m)
            REQUIRE(state.count(m) == state.recount(m));
    }
}

TEST_CASE("complete-graph counts after inserting every edge") {
    const long n = 6;
    GraphState state(n, motif_set({"edge", "wedge", "triangle", "K4"}));
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
    for (const auto& [u, v] : pairs) state.apply_flip(u, v, 1);
    CHECK(state.count(0) == 15);
    CHECK(state.count(1) == 60);
    CHECK(state.count(2) == 20);
    CHECK(state.count(3) == 15);
    // Tear down in a different order; counts return to zero.
    RngStream rng = RngStream::keyed(1, 1, 1, 1);
    for (std::size_t i = pairs.size(); i > 1; --i)
        std::swap(pairs[i - 1],
                  pairs[static_cast<std::size_t>(rng.uniform01() * static_cast<double>(i))]);
    for (const auto& [u, v] : pairs) state.apply_flip(u, v, 0);
    for (std::size_t m = 0; m < state.motif_count(); ++m) CHECK(state.count(m) == 0);
}

TEST_CASE("delta plus commit equals apply") {
    GraphState a(7, motif_set({"wedge", "triangle"}));
    GraphState b(7, motif_set({"wedge", "triangle"}));
    RngStream rng = RngStream::keyed(8, 8, 8, 8);
    for (int op = 0; op < 60; ++op) {
        const int u = static_cast<int>(rng.uniform01() * 7);
        int v = static_cast<int>(rng.uniform01() * 7);
        if (u == v) v = (v + 1) % 7;
        const int uu = std::min(u, v), vv = std::max(u, v);
        const int next = a.has_edge(uu, vv) ? 0 : 1;
        a.apply_flip(uu, vv, next);
        for (std::size_t m = 0; m < b.motif_count(); ++m) b.delta_count_on_flip(uu, vv, m, next);
        b.commit_flip(uu, vv, next);
        for (std::size_t m = 0; m < b.motif_count(); ++m) CHECK(a.count(m) == b.count(m));
    }
    CHECK_THROWS_AS(a.delta_count_on_flip(0, 1, 0, a.has_edge(0, 1) ? 1 : 0), std::logic_error);
}

TEST_CASE("counts at grid times equal the counts of the sampled trajectories") {
    SimConfig config = small_config();
    const long rep = 3;
    const CountSeries series = simulate_counts(config, rep);

    const long n = config.n_vertices;
    std::vector<std::vector<Trajectory>> traj(static_cast<std::size_t>(n),
                                              std::vector<Trajectory>(static_cast<std::size_t>(n)));
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            RngStream rng = RngStream::keyed(config.seed, static_cast<std::uint64_t>(rep),
                                             static_cast<std::uint64_t>(u),
                                             static_cast<std::uint64_t>(v));
            traj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] =
                sample_trajectory(config.dynamics, n, rng);
        }
    }
    for (std::size_t g = 0; g < config.grid.size(); ++g) {
        const double t = config.grid[g];
        std::vector<std::vector<int>> states(static_cast<std::size_t>(n),
                                             std::vector<int>(static_cast<std::size_t>(n), 0));
        long edges = 0;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                const int s = traj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)].state_at(t);
                states[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = s;
                edges += s;
            }
        CHECK(series.raw[0][g] == edges);
        const LabeledGraph snap = snapshot_graph(n, states);
        const std::int64_t triangles =
            snap.edge_count() == 0
                ? 0
                : subgraph_pattern_count(snap, canonical_form(parse_graph("triangle")));
        CHECK(series.raw[1][g] == triangles);
    }
}

TEST_CASE("periodic recount verification accepts a correct run") {
    SimConfig config = small_config();
    config.recount_every = 7;
    CHECK_NOTHROW(simulate_counts(config, 0));
    config.recount_every = 1;
    CHECK_NOTHROW(simulate_counts(config, 1));
}

TEST_CASE("replications are deterministic and thread-count invariant") {
    SimConfig config = small_config();
    config.n_vertices = 15;
    config.replications = 10;

    const CountSeries once = simulate_counts(config, 2);
    const CountSeries twice = simulate_counts(config, 2);
    CHECK(once.raw == twice.raw);
    CHECK(once.normalized == twice.normalized);

    const auto serial = run_replications(config, 1);
    const auto parallel = run_replications(config, 3);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t r = 0; r < serial.size(); ++r) {
        CHECK(serial[r].raw == parallel[r].raw);
        CHECK(serial[r].expected == parallel[r].expected);
        CHECK(serial[r].normalized == parallel[r].normalized);
    }
}

TEST_CASE("normalization divides centered counts by the motif's N power") {
    SimConfig config = small_config();
    const CountSeries series = simulate_counts(config, 0);
    const double n = static_cast<double>(config.n_vertices);
    const double p = stationary_probability(config.dynamics, config.n_vertices);
    const double expected_edges = n * (n - 1) / 2 * p;
    // Dense regime: the edge normalizer exponent is 1, the triangle's is 2.
    for (std::size_t g = 0; g < config.grid.size(); ++g) {
        CHECK(series.expected[0][g] == doctest::Approx(expected_edges));
        CHECK(series.normalized[0][g] ==
              doctest::Approx((static_cast<double>(series.raw[0][g]) - expected_edges) / n));
        const double expected_triangles = expected_count(config.motifs[1], config.n_vertices, p);
        CHECK(series.normalized[1][g] ==
              doctest::Approx((static_cast<double>(series.raw[1][g]) - expected_triangles) /
                              (n * n)));
    }
}
