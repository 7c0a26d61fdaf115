#include "dynerg/simulate.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "dynerg/scaling.hpp"

namespace dynerg {

void SimConfig::validate() const {
    if (n_vertices < 1) throw std::invalid_argument("vertex count must be >= 1");
    if (motifs.empty()) throw std::invalid_argument("motif list must not be empty");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (recount_every < 0) throw std::invalid_argument("recount interval must be >= 0");
    if (grid.empty()) throw std::invalid_argument("grid must not be empty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("grid times must be sorted");
    if (grid.front() < 0.0 || grid.back() > dynamics.horizon)
        throw std::invalid_argument("grid times must lie within [0, horizon]");
    for (const LabeledGraph& H : motifs) {
        if (H.edge_count() == 0) throw std::invalid_argument("motifs need >= 1 edge");
        if (H.vertex_count() > 6)
            throw std::invalid_argument("motifs capped at 6 vertices");
        if (auto g = assumption3_offender(H, dynamics.regime))
            throw RegimeError("motif subgraph " + g->to_string() +
                              " has a non-vanishing density under this scaling");
        if (graph_count_in_complete(H, n_vertices) > BigInt(1) << 62)
            throw std::invalid_argument("motif count would overflow 64-bit tallies");
    }
}

namespace {

std::vector<std::pair<int, int>> zero_based_edges(const LabeledGraph& H) {
    const auto& verts = H.vertices();
    auto idx = [&](int label) {
        return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), label) -
                                verts.begin());
    };
    std::vector<std::pair<int, int>> out;
    for (const auto& [a, b] : H.edges()) {
        int ia = idx(a), ib = idx(b);
        out.push_back({std::min(ia, ib), std::max(ia, ib)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

GraphState::GraphState(long n, std::vector<LabeledGraph> motifs) : n_(n) {
    if (n < 1) throw std::invalid_argument("vertex count must be >= 1");
    const std::size_t words = (static_cast<std::size_t>(n) + 63) / 64;
    adj_.assign(static_cast<std::size_t>(n) * words, 0);
    counts_.assign(motifs.size(), 0);

    for (LabeledGraph& H : motifs) {
        MotifPlan plan;
        plan.graph = std::move(H);
        const int k = plan.graph.vertex_count();
        const auto edges = zero_based_edges(plan.graph);
        auto is_edge = [&](int a, int b) {
            if (a > b) std::swap(a, b);
            return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
        };

        // Explicit automorphisms of the index graph.
        std::vector<std::vector<int>> autos;
        std::vector<int> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            bool ok = true;
            for (const auto& [a, b] : edges)
                if (!is_edge(perm[a], perm[b])) {
                    ok = false;
                    break;
                }
            if (ok) autos.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        plan.automorphisms = static_cast<std::int64_t>(autos.size());

        // Orbits of the automorphism group on directed edges.
        std::vector<std::pair<int, int>> directed;
        for (const auto& [a, b] : edges) {
            directed.push_back({a, b});
            directed.push_back({b, a});
        }
        std::sort(directed.begin(), directed.end());
        std::vector<bool> seen(directed.size(), false);
        for (std::size_t d = 0; d < directed.size(); ++d) {
            if (seen[d]) continue;
            std::set<std::pair<int, int>> orbit;
            for (const auto& sigma : autos)
                orbit.insert({sigma[directed[d].first], sigma[directed[d].second]});
            for (const auto& el : orbit) {
                auto it = std::lower_bound(directed.begin(), directed.end(), el);
                seen[static_cast<std::size_t>(it - directed.begin())] = true;
            }

            AnchorRep rep;
            rep.orbit_size = static_cast<std::int64_t>(orbit.size());
            const auto [a, b] = directed[d];
            rep.order = {a, b};
            std::vector<bool> placed(k, false);
            placed[a] = placed[b] = true;
            while (static_cast<int>(rep.order.size()) < k) {
                int best = -1, best_score = -1;
                for (int cand = 0; cand < k; ++cand) {
                    if (placed[cand]) continue;
                    int links = 0, degree = 0;
                    for (int other = 0; other < k; ++other) {
                        if (other == cand || !is_edge(cand, other)) continue;
                        ++degree;
                        if (placed[other]) ++links;
                    }
                    const int score = links * 100 + degree;
                    if (score > best_score) {
                        best_score = score;
                        best = cand;
                    }
                }
                placed[best] = true;
                rep.order.push_back(best);
            }
            rep.prior_neighbors.assign(rep.order.size(), {});
            for (std::size_t slot = 2; slot < rep.order.size(); ++slot)
                for (std::size_t prev = 0; prev < slot; ++prev)
                    if (is_edge(rep.order[slot], rep.order[prev]))
                        rep.prior_neighbors[slot].push_back(static_cast<int>(prev));
            plan.reps.push_back(std::move(rep));
        }
        motifs_.push_back(std::move(plan));
    }
}

bool GraphState::has_edge(int u, int v) const {
    const std::size_t words = (static_cast<std::size_t>(n_) + 63) / 64;
    return (adj_[static_cast<std::size_t>(u) * words + static_cast<std::size_t>(v) / 64] >>
            (v % 64)) &
           1u;
}

std::int64_t GraphState::anchored_embeddings(const MotifPlan& plan, int u, int v) const {
    const int k = plan.graph.vertex_count();
    const std::size_t words = (static_cast<std::size_t>(n_) + 63) / 64;
    std::int64_t weighted = 0;
    std::vector<int> image(static_cast<std::size_t>(k), -1);
    std::vector<std::uint64_t> meet(words);
    for (const AnchorRep& rep : plan.reps) {
        image[0] = u;
        image[1] = v;
        std::int64_t found = 0;
        auto rec = [&](auto&& self, int slot) -> void {
            const auto& priors = rep.prior_neighbors[static_cast<std::size_t>(slot)];
            if (slot == k - 1) {
                // Last slot: intersect prior-neighbor rows, discount placed images.
                std::int64_t hits;
                if (priors.empty()) {
                    hits = n_ - slot;
                } else {
                    const std::uint64_t* first =
                        adj_.data() + static_cast<std::size_t>(image[priors[0]]) * words;
                    std::copy(first, first + words, meet.begin());
                    for (std::size_t pi = 1; pi < priors.size(); ++pi) {
                        const std::uint64_t* row =
                            adj_.data() + static_cast<std::size_t>(image[priors[pi]]) * words;
                        for (std::size_t w = 0; w < words; ++w) meet[w] &= row[w];
                    }
                    hits = 0;
                    for (std::size_t w = 0; w < words; ++w)
                        hits += std::popcount(meet[w]);
                    for (int s = 0; s < slot; ++s)
                        if ((meet[static_cast<std::size_t>(image[s]) / 64] >>
                             (image[s] % 64)) &
                            1u)
                            --hits;
                }
                found += hits;
                return;
            }
            for (int cand = 0; cand < static_cast<int>(n_); ++cand) {
                bool ok = true;
                for (int s = 0; s < slot && ok; ++s) ok = image[s] != cand;
                for (std::size_t pi = 0; pi < priors.size() && ok; ++pi)
                    ok = has_edge(image[priors[pi]], cand);
                if (!ok) continue;
                image[slot] = cand;
                self(self, slot + 1);
            }
        };
        if (k == 2)
            found = 1;
        else
            rec(rec, 2);
        weighted += rep.orbit_size * found;
    }
    if (weighted % plan.automorphisms != 0)
        throw std::logic_error("anchored embedding count not divisible by automorphisms");
    return weighted / plan.automorphisms;
}

std::int64_t GraphState::delta_count_on_flip(int u, int v, std::size_t motif_index,
                                             int new_value) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v)
        throw std::invalid_argument("flip endpoints out of range");
    if (static_cast<int>(has_edge(u, v)) == new_value)
        throw std::logic_error("flip to the value already present");
    const std::int64_t magnitude = anchored_embeddings(motifs_[motif_index], u, v);
    const std::int64_t delta = new_value ? magnitude : -magnitude;
    counts_[motif_index] += delta;
    return delta;
}

void GraphState::commit_flip(int u, int v, int new_value) {
    if (static_cast<int>(has_edge(u, v)) == new_value)
        throw std::logic_error("flip to the value already present");
    const std::size_t words = (static_cast<std::size_t>(n_) + 63) / 64;
    adj_[static_cast<std::size_t>(u) * words + static_cast<std::size_t>(v) / 64] ^=
        1ull << (v % 64);
    adj_[static_cast<std::size_t>(v) * words + static_cast<std::size_t>(u) / 64] ^=
        1ull << (u % 64);
}

void GraphState::apply_flip(int u, int v, int new_value) {
    for (std::size_t m = 0; m < motifs_.size(); ++m) delta_count_on_flip(u, v, m, new_value);
    commit_flip(u, v, new_value);
}

std::int64_t GraphState::recount(std::size_t motif_index) const {
    std::vector<int> verts(static_cast<std::size_t>(n_));
    std::iota(verts.begin(), verts.end(), 1);
    std::vector<Edge> edges;
    for (int u = 0; u < static_cast<int>(n_); ++u)
        for (int v = u + 1; v < static_cast<int>(n_); ++v)
            if (has_edge(u, v)) edges.push_back({u + 1, v + 1});
    const LabeledGraph current(std::move(verts), std::move(edges));
    return subgraph_pattern_count(current, canonical_form(motifs_[motif_index].graph));
}

CountSeries simulate_counts(const SimConfig& config, long replication_index) {
    config.validate();
    const long n = config.n_vertices;
    const std::size_t n_motifs = config.motifs.size();
    const std::size_t n_grid = config.grid.size();

    struct FlipEvent {
        double time;
        int u, v;
        bool operator<(const FlipEvent& o) const {
            return std::tie(time, u, v) < std::tie(o.time, o.u, o.v);
        }
    };
    std::vector<FlipEvent> events;
    std::vector<std::pair<int, int>> initial_edges;
    for (int u = 0; u < static_cast<int>(n); ++u) {
        for (int v = u + 1; v < static_cast<int>(n); ++v) {
            RngStream rng = RngStream::keyed(config.seed,
                                             static_cast<std::uint64_t>(replication_index),
                                             static_cast<std::uint64_t>(u),
                                             static_cast<std::uint64_t>(v));
            const Trajectory traj = sample_trajectory(config.dynamics, n, rng);
            if (traj.initial_state) initial_edges.push_back({u, v});
            for (double t : traj.flip_times) events.push_back({t, u, v});
        }
    }
    std::sort(events.begin(), events.end());

    GraphState state(n, config.motifs);
    for (const auto& [u, v] : initial_edges) state.apply_flip(u, v, 1);

    CountSeries series;
    series.raw.assign(n_motifs, std::vector<std::int64_t>(n_grid, 0));
    std::size_t next_grid = 0;
    auto snapshot_until = [&](double limit) {
        while (next_grid < n_grid && config.grid[next_grid] < limit) {
            for (std::size_t m = 0; m < n_motifs; ++m)
                series.raw[m][next_grid] = state.count(m);
            ++next_grid;
        }
    };
    long processed = 0;
    for (const FlipEvent& ev : events) {
        snapshot_until(ev.time);
        state.apply_flip(ev.u, ev.v, state.has_edge(ev.u, ev.v) ? 0 : 1);
        ++processed;
        if (config.recount_every > 0 && processed % config.recount_every == 0)
            for (std::size_t m = 0; m < n_motifs; ++m)
                if (state.recount(m) != state.count(m))
                    throw std::logic_error("incremental count diverged from full recount");
    }
    snapshot_until(config.dynamics.horizon + 1.0);

    normalize_series(series, config);
    return series;
}

void normalize_series(CountSeries& series, const SimConfig& config) {
    const std::size_t n_motifs = config.motifs.size();
    const std::size_t n_grid = config.grid.size();
    if (series.raw.size() != n_motifs)
        throw std::invalid_argument("series does not match motif list");
    series.expected.assign(n_motifs, std::vector<double>(n_grid, 0.0));
    series.normalized.assign(n_motifs, std::vector<double>(n_grid, 0.0));
    const double p = stationary_probability(config.dynamics, config.n_vertices);
    for (std::size_t m = 0; m < n_motifs; ++m) {
        const double mean = expected_count(config.motifs[m], config.n_vertices, p);
        const double divisor =
            normalizer(config.motifs[m], config.n_vertices, config.dynamics.regime);
        for (std::size_t g = 0; g < n_grid; ++g) {
            series.expected[m][g] = mean;
            series.normalized[m][g] =
                (static_cast<double>(series.raw[m][g]) - mean) / divisor;
        }
    }
}

std::vector<CountSeries> run_replications(const SimConfig& config, int threads) {
    config.validate();
    const long reps = config.replications;
    std::vector<CountSeries> results(static_cast<std::size_t>(reps));
    if (threads < 1) threads = 1;
    threads = static_cast<int>(std::min<long>(threads, reps));

    if (threads == 1) {
        for (long r = 0; r < reps; ++r)
            results[static_cast<std::size_t>(r)] = simulate_counts(config, r);
        return results;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const long lo = reps * t / threads;
        const long hi = reps * (t + 1) / threads;
        pool.emplace_back([&, lo, hi]() {
            try {
                for (long r = lo; r < hi; ++r)
                    results[static_cast<std::size_t>(r)] = simulate_counts(config, r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace dynerg
