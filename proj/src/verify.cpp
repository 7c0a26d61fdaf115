#include "dynerg/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <compare>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dynerg/edge_process.hpp"
#include "dynerg/graph.hpp"
#include "dynerg/rational.hpp"
#include "dynerg/rng.hpp"
#include "dynerg/scaling.hpp"
#include "dynerg/simulate.hpp"
#include "dynerg/stats.hpp"
#include "dynerg/theory.hpp"

namespace dynerg {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Criterion 1: brute-force combinatorics, written independently of the library
// code paths (bitmask patterns, explicit permutation/subset enumeration).

struct BruteKey {
    int k = 0;          // vertex count
    unsigned mask = 0;  // edge bitset over pairs (i<j), row-major
    auto operator<=>(const BruteKey&) const = default;
};

int brute_pair_bit(int k, int i, int j) {
    if (i > j) std::swap(i, j);
    int bit = 0;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b, ++bit)
            if (a == i && b == j) return bit;
    throw std::logic_error("pair out of range");
}

unsigned brute_permute(int k, unsigned mask, const std::vector<int>& perm) {
    unsigned out = 0;
    int bit = 0;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b, ++bit)
            if (mask & (1u << bit)) out |= 1u << brute_pair_bit(k, perm[a], perm[b]);
    return out;
}

BruteKey brute_canonical(int k, unsigned mask) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    unsigned best = ~0u;
    do {
        best = std::min(best, brute_permute(k, mask, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return BruteKey{k, best};
}

bool brute_connected(int k, unsigned mask) {
    std::vector<int> comp(static_cast<std::size_t>(k));
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return comp[static_cast<std::size_t>(x)] == x
                   ? x
                   : comp[static_cast<std::size_t>(x)] = find(comp[static_cast<std::size_t>(x)]);
    };
    int bit = 0;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b, ++bit)
            if (mask & (1u << bit)) comp[static_cast<std::size_t>(find(a))] = find(b);
    for (int v = 1; v < k; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

long brute_automorphisms(int k, unsigned mask) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    long count = 0;
    do {
        if (brute_permute(k, mask, perm) == mask) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

// Patterns of all nonempty edge subsets, keyed by canonical support pattern.
std::map<BruteKey, long> brute_subgraph_tally(int k, unsigned mask) {
    std::map<BruteKey, long> tally;
    for (unsigned sub = mask; sub != 0; sub = (sub - 1) & mask) {
        std::vector<int> support;
        std::vector<std::pair<int, int>> edges;
        int bit = 0;
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b, ++bit)
                if (sub & (1u << bit)) {
                    edges.emplace_back(a, b);
                    for (int v : {a, b})
                        if (std::find(support.begin(), support.end(), v) == support.end())
                            support.push_back(v);
                }
        std::sort(support.begin(), support.end());
        const int r = static_cast<int>(support.size());
        auto local = [&](int v) {
            return static_cast<int>(std::lower_bound(support.begin(), support.end(), v) -
                                    support.begin());
        };
        unsigned submask = 0;
        for (const auto& [a, b] : edges) submask |= 1u << brute_pair_bit(r, local(a), local(b));
        ++tally[brute_canonical(r, submask)];
    }
    return tally;
}

// Distinct copies of the pattern inside the complete graph on N vertices,
// counted by materializing every injective placement's edge set.
std::size_t brute_copies_in_complete(int k, unsigned mask, int N) {
    std::vector<std::pair<int, int>> edges;
    int bit = 0;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b, ++bit)
            if (mask & (1u << bit)) edges.emplace_back(a, b);
    std::set<std::vector<std::pair<int, int>>> copies;
    std::vector<int> image(static_cast<std::size_t>(k), -1);
    std::vector<bool> used(static_cast<std::size_t>(N), false);
    std::function<void(int)> place = [&](int slot) {
        if (slot == k) {
            std::vector<std::pair<int, int>> realized;
            for (const auto& [a, b] : edges) {
                int u = image[static_cast<std::size_t>(a)], v = image[static_cast<std::size_t>(b)];
                realized.emplace_back(std::min(u, v), std::max(u, v));
            }
            std::sort(realized.begin(), realized.end());
            copies.insert(std::move(realized));
            return;
        }
        for (int cand = 0; cand < N; ++cand) {
            if (used[static_cast<std::size_t>(cand)]) continue;
            used[static_cast<std::size_t>(cand)] = true;
            image[static_cast<std::size_t>(slot)] = cand;
            place(slot + 1);
            used[static_cast<std::size_t>(cand)] = false;
        }
    };
    place(0);
    return copies.size();
}

BruteKey brute_key_of(const Pattern& p) {
    unsigned mask = 0;
    for (const auto& [a, b] : p.edges) mask |= 1u << brute_pair_bit(p.n_vertices, a - 1, b - 1);
    return brute_canonical(p.n_vertices, mask);
}

LabeledGraph graph_of_key(const BruteKey& key) {
    std::vector<int> verts(static_cast<std::size_t>(key.k));
    std::iota(verts.begin(), verts.end(), 1);
    std::vector<Edge> edges;
    int bit = 0;
    for (int a = 0; a < key.k; ++a)
        for (int b = a + 1; b < key.k; ++b, ++bit)
            if (key.mask & (1u << bit)) edges.push_back({a + 1, b + 1});
    return LabeledGraph(std::move(verts), std::move(edges));
}

CriterionResult criterion_combinatorics(const VerifyOptions& options) {
    CriterionResult r{1, "exact combinatorics vs brute force", true, 0, ""};
    // Every connected graph on 2..5 vertices, one representative per shape.
    std::vector<BruteKey> shapes;
    for (int k = 2; k <= 5; ++k) {
        const int n_pairs = k * (k - 1) / 2;
        std::set<BruteKey> seen;
        for (unsigned mask = 1; mask < (1u << n_pairs); ++mask) {
            if (!brute_connected(k, mask)) continue;
            const BruteKey canon = brute_canonical(k, mask);
            if (seen.insert(canon).second) shapes.push_back(canon);
        }
    }
    std::size_t checks = 0;
    bool injected = options.inject_oracle_mismatch;
    for (const BruteKey& shape : shapes) {
        const LabeledGraph H = graph_of_key(shape);
        long brute_aut = brute_automorphisms(shape.k, shape.mask);
        if (injected) {
            ++brute_aut;  // oracle perturbation hook
            injected = false;
        }
        if (automorphism_count(H) != brute_aut) {
            r.pass = false;
            r.details = "automorphism mismatch on " + canonical_form(H).to_string() +
                        ": library " + std::to_string(automorphism_count(H)) +
                        ", brute force " + std::to_string(brute_aut);
            return r;
        }
        ++checks;

        const std::map<BruteKey, long> brute_tally = brute_subgraph_tally(shape.k, shape.mask);
        std::map<BruteKey, long> lib_tally;
        for (const Pattern& g : subgraph_patterns(H))
            lib_tally[brute_key_of(g)] = static_cast<long>(subgraph_pattern_count(H, g));
        if (lib_tally != brute_tally) {
            r.pass = false;
            r.details = "subgraph tally mismatch on " + canonical_form(H).to_string();
            return r;
        }
        checks += brute_tally.size();

        std::set<BruteKey> lib_cs;
        for (const Pattern& g : common_subgraph_patterns(H, H)) lib_cs.insert(brute_key_of(g));
        std::set<BruteKey> brute_cs;
        for (const auto& [key, n] : brute_tally) brute_cs.insert(key);
        if (lib_cs != brute_cs) {
            r.pass = false;
            r.details = "common-subgraph set mismatch on " + canonical_form(H).to_string();
            return r;
        }
        ++checks;

        for (int N = shape.k; N <= 10; ++N) {
            const std::size_t brute = brute_copies_in_complete(shape.k, shape.mask, N);
            if (graph_count_in_complete(H, N) != BigInt(brute)) {
                r.pass = false;
                r.details = "copy count in complete graph mismatch on " +
                            canonical_form(H).to_string() + " at N=" + std::to_string(N);
                return r;
            }
            ++checks;
        }
    }
    r.details = std::to_string(shapes.size()) + " connected shapes, " +
                std::to_string(checks) + " exact comparisons, all equal";
    return r;
}

// ---------------------------------------------------------------------------
// Criterion 2: the two pairing-constant computations agree as exact rationals.

CriterionResult criterion_pairing_constant(const VerifyOptions&) {
    CriterionResult r{2, "pairing constant: enumeration vs closed form", true, 0, ""};
    const LabeledGraph edge = parse_graph("edge");
    const LabeledGraph wedge = parse_graph("wedge");
    const LabeledGraph triangle = parse_graph("triangle");
    struct Case {
        const LabeledGraph* H;
        const LabeledGraph* H_star;
        Rational alpha;
    };
    const std::vector<Case> cases = {
        {&edge, &edge, Rational(3, 10)},      {&wedge, &wedge, Rational(3, 10)},
        {&triangle, &triangle, Rational(3, 10)}, {&triangle, &triangle, Rational(1, 2)},
        {&wedge, &triangle, Rational(3, 10)}, {&wedge, &triangle, Rational(1, 2)},
    };
    std::size_t identities = 0;
    for (const Case& c : cases) {
        const ScalingRegime regime(c.alpha);
        if (!equioptimal(*c.H, *c.H_star, regime)) {
            r.pass = false;
            r.details = "expected an equioptimal pair at alpha=" + to_fraction_string(c.alpha);
            return r;
        }
        for (const Pattern& g : optimal_common_subgraphs(*c.H, *c.H_star, regime)) {
            const Rational by_enum =
                pairing_constant(*c.H, *c.H_star, g, PairingMode::enumerate);
            const Rational by_formula =
                pairing_constant(*c.H, *c.H_star, g, PairingMode::closed_form, &regime);
            if (by_enum != by_formula) {
                r.pass = false;
                r.details = "constant mismatch for pattern " + g.to_string() + " at alpha=" +
                            to_fraction_string(c.alpha) + ": enumerate " +
                            to_fraction_string(by_enum) + " vs closed form " +
                            to_fraction_string(by_formula);
                return r;
            }
            ++identities;
        }
    }
    r.details = std::to_string(identities) + " exact identities across " +
                std::to_string(cases.size()) + " graph pairs";
    return r;
}

// ---------------------------------------------------------------------------
// Criterion 3: wedge/triangle scaling example, exact rational comparisons.

CriterionResult criterion_scaling_example(const VerifyOptions&) {
    CriterionResult r{3, "wedge and triangle scaling example", true, 0, ""};
    const Pattern edge_p = canonical_form(parse_graph("edge"));
    const Pattern tri_p = canonical_form(parse_graph("triangle"));
    const LabeledGraph wedge = parse_graph("wedge");
    const LabeledGraph triangle = parse_graph("triangle");

    auto fail = [&](const std::string& what) {
        r.pass = false;
        r.details = what;
        return r;
    };

    const std::vector<Rational> alphas = {Rational(3, 10), Rational(1, 2), Rational(7, 10)};
    for (const Rational& alpha : alphas) {
        const ExampleReport rep = example_report(alpha, 1.0, 1.0);
        if (rep.f_exponent_wedge != 2 * alpha - 3 || rep.f_exponent_triangle != 3 * alpha - 3)
            return fail("decay exponent mismatch at alpha=" + to_fraction_string(alpha));
        if (rep.opt_exponent_wedge != alpha - 2 ||
            rep.opt_exponent_triangle != std::max(Rational(alpha - 2), Rational(3 * alpha - 3)))
            return fail("optimal exponent mismatch at alpha=" + to_fraction_string(alpha));
        if (rep.normalizer_exponent_wedge != 2 - 3 * alpha / 2 ||
            rep.normalizer_exponent_triangle !=
                std::max(Rational(2 - 5 * alpha / 2), Rational(Rational(3, 2) - 3 * alpha / 2)))
            return fail("normalizer exponent mismatch at alpha=" + to_fraction_string(alpha));

        std::vector<Pattern> expected_tri_ocs;
        if (alpha < Rational(1, 2)) expected_tri_ocs = {edge_p};
        else if (alpha == Rational(1, 2)) expected_tri_ocs = {edge_p, tri_p};
        else expected_tri_ocs = {tri_p};
        std::sort(expected_tri_ocs.begin(), expected_tri_ocs.end());
        std::vector<Pattern> got = rep.ocs_triangle;
        std::sort(got.begin(), got.end());
        if (got != expected_tri_ocs)
            return fail("triangle optimal set mismatch at alpha=" + to_fraction_string(alpha));
        if (rep.ocs_wedge != std::vector<Pattern>{edge_p})
            return fail("wedge optimal set mismatch at alpha=" + to_fraction_string(alpha));
    }

    // Limit coefficients a*sqrt(b): wedge->edge sqrt(2), triangle->edge sqrt(2)/2,
    // triangle->triangle sqrt(6)/6.
    const RadicalCoefficient c1 = limit_coefficient(wedge, edge_p);
    const RadicalCoefficient c2 = limit_coefficient(triangle, edge_p);
    const RadicalCoefficient c3 = limit_coefficient(triangle, tri_p);
    if (!(c1 == RadicalCoefficient{Rational(1), BigInt(2)}))
        return fail("wedge coefficient is " + c1.to_string() + ", expected sqrt(2)");
    if (!(c2 == RadicalCoefficient{Rational(1, 2), BigInt(2)}))
        return fail("triangle/edge coefficient is " + c2.to_string() + ", expected sqrt(2)/2");
    if (!(c3 == RadicalCoefficient{Rational(1, 6), BigInt(6)}))
        return fail("triangle/triangle coefficient is " + c3.to_string() + ", expected sqrt(6)/6");

    r.details = "exponents, optimal sets, normalizers and coefficients match exactly at "
                "alpha = 3/10, 1/2, 7/10";
    return r;
}

// ---------------------------------------------------------------------------
// Shared simulation harness for criteria 4 and 5.

struct SimStudy {
    MomentAccumulator acc;
    Eigen::MatrixXd reference;      // exact finite-N covariance, normalized
    CovarianceComparison cov_check; // empirical vs reference
    std::size_t n_grid = 0;
};

SimStudy run_study(const SimConfig& sim, int threads, double z_threshold) {
    const std::size_t m = sim.motifs.size();
    const std::size_t n_grid = sim.grid.size();
    const std::size_t dim = m * n_grid;
    MomentAccumulator acc(dim);
    std::vector<double> flat(dim);
    for (const CountSeries& series : run_replications(sim, threads)) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t g = 0; g < n_grid; ++g) flat[i * n_grid + g] = series.normalized[i][g];
        acc.accumulate(flat);
    }
    Eigen::MatrixXd reference(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            reference(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                normalized_exact_covariance(sim.motifs[a / n_grid], sim.motifs[b / n_grid],
                                            sim.n_vertices, sim.dynamics, sim.grid[a % n_grid],
                                            sim.grid[b % n_grid]);
    CovarianceComparison cmp = compare_covariance(acc, reference, z_threshold);
    return SimStudy{std::move(acc), std::move(reference), std::move(cmp), n_grid};
}

CriterionResult criterion_dense_clt(const VerifyOptions& options) {
    CriterionResult r{4, "dense-regime CLT at N=100", true, 0, ""};
    SimConfig sim{100,
                  {parse_graph("edge"), parse_graph("triangle")},
                  {0.0, 0.5, 1.0},
                  EdgeDynamics(1.0, 1.0, ScalingRegime(Rational(0)), 1.0),
                  5000,
                  options.seed,
                  0};
    sim.validate();
    const SimStudy study = run_study(sim, options.threads, 5.0);
    const std::size_t dim = study.acc.dimension();

    double max_mean_z = 0.0, max_skew = 0.0, max_kurt_dev = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
        const double se = study.acc.mean_se(a);
        max_mean_z = std::max(max_mean_z, se > 0 ? std::abs(study.acc.mean(a)) / se
                                                 : std::abs(study.acc.mean(a)));
        max_skew = std::max(max_skew, std::abs(study.acc.skewness(a)));
        max_kurt_dev = std::max(max_kurt_dev, std::abs(study.acc.kurtosis(a) - 3.0));
    }
    // Coordinates are motif-major over the grid: edge@{0,1/2,1}, triangle@{0,1/2,1}.
    const double corr_half = study.acc.correlation(1, 4);

    const bool mean_ok = max_mean_z < 5.0;
    const bool cov_ok = study.cov_check.pass;
    const bool corr_ok = corr_half >= 0.95;
    const bool shape_ok = max_skew < 0.15 && max_kurt_dev < 0.3;
    r.pass = mean_ok && cov_ok && corr_ok && shape_ok;
    std::ostringstream d;
    d << "mean max|z|=" << fmt(max_mean_z) << " (<5), covariance max|z|="
      << fmt(study.cov_check.max_abs_z) << " (<5), edge-triangle corr at t=1/2 = "
      << fmt(corr_half) << " (>=0.95), max|skew|=" << fmt(max_skew)
      << " (<0.15), max|kurt-3|=" << fmt(max_kurt_dev) << " (<0.3), 5000 replications";
    r.details = d.str();
    return r;
}

CriterionResult criterion_sparse_covariance(const VerifyOptions& options) {
    CriterionResult r{5, "sparse-regime covariance", true, 0, ""};
    std::ostringstream d;
    bool cov_ok = true;
    double corr_measured = 0.0;
    const std::vector<Rational> alphas = {Rational(3, 10), Rational(7, 10)};
    const std::vector<long> sizes = {100, 200};
    int run_index = 0;
    for (const Rational& alpha : alphas) {
        for (long N : sizes) {
            SimConfig sim{N,
                          {parse_graph("edge"), parse_graph("triangle")},
                          {0.0, 0.5, 1.0},
                          EdgeDynamics(1.0, 1.0, ScalingRegime(alpha), 1.0),
                          2000,
                          options.seed + 1000 * static_cast<std::uint64_t>(++run_index),
                          0};
            sim.validate();
            const SimStudy study = run_study(sim, options.threads, 5.0);
            cov_ok = cov_ok && study.cov_check.pass;
            d << "alpha=" << to_fraction_string(alpha) << " N=" << N << ": cov max|z|="
              << fmt(study.cov_check.max_abs_z) << (study.cov_check.pass ? " ok" : " FAIL")
              << "; ";
            if (alpha == Rational(7, 10) && N == 200)
                corr_measured = study.acc.correlation(1, 4);
        }
    }

    const bool corr_ok = std::abs(corr_measured) < 0.1;
    r.pass = cov_ok && corr_ok;
    d << "edge-triangle corr at t=1/2, alpha=7/10, N=200: measured " << fmt(corr_measured)
      << " against target |corr|<0.1";
    if (!corr_ok) {
        // Quantify how far out of reach the target is for the exact model.
        const ScalingRegime regime(Rational(7, 10));
        const EdgeDynamics dyn(1.0, 1.0, regime, 1.0);
        const LabeledGraph edge = parse_graph("edge");
        const LabeledGraph triangle = parse_graph("triangle");
        auto exact_corr = [&](long N) {
            const double c = normalized_exact_covariance(edge, triangle, N, dyn, 0.5, 0.5);
            const double ve = normalized_exact_covariance(edge, edge, N, dyn, 0.5, 0.5);
            const double vt = normalized_exact_covariance(triangle, triangle, N, dyn, 0.5, 0.5);
            return c / std::sqrt(ve * vt);
        };
        long N_cross = 200;
        while (exact_corr(N_cross) >= 0.1 && N_cross < (1L << 40)) N_cross *= 2;
        d << "; exact-model correlation at N=200 is " << fmt(exact_corr(200))
          << ", decays like N^(-1/5) and first drops below 0.1 only near N~" << N_cross
          << ", so the target is out of reach at this scale";
    }
    r.details = d.str();
    return r;
}

CriterionResult criterion_convergence(const VerifyOptions&) {
    CriterionResult r{6, "finite-N covariance converges to the limit", true, 0, ""};
    const LabeledGraph edge = parse_graph("edge");
    const LabeledGraph triangle = parse_graph("triangle");
    const std::vector<LabeledGraph> motifs = {edge, triangle};
    const std::vector<double> grid = {0.0, 0.5, 1.0};
    const std::vector<Rational> alphas = {Rational(0), Rational(3, 10), Rational(7, 10)};
    struct Offender {
        Rational alpha;
        std::size_t i, j;
        double s, t, dev50, dev400;
    };
    double worst_ratio = 0.0;
    std::size_t pairs = 0;
    std::vector<Offender> regressing;
    for (const Rational& alpha : alphas) {
        const ScalingRegime regime(alpha);
        const EdgeDynamics dyn(1.0, 1.0, regime, 1.0);
        const LimitingCovariance sigma(motifs, regime, dyn);
        for (std::size_t i = 0; i < motifs.size(); ++i)
            for (std::size_t j = 0; j < motifs.size(); ++j)
                for (double s : grid)
                    for (double t : grid) {
                        const double lim = sigma(i, j, s, t);
                        const double dev50 = std::abs(
                            normalized_exact_covariance(motifs[i], motifs[j], 50, dyn, s, t) -
                            lim);
                        const double dev400 = std::abs(
                            normalized_exact_covariance(motifs[i], motifs[j], 400, dyn, s, t) -
                            lim);
                        ++pairs;
                        if (dev50 < 1e-15 && dev400 < 1e-15) continue;  // already exact
                        if (!(dev400 < dev50))
                            regressing.push_back({alpha, i, j, s, t, dev50, dev400});
                        else
                            worst_ratio = std::max(worst_ratio, dev400 / dev50);
                    }
    }
    if (regressing.empty()) {
        r.details = std::to_string(pairs) + " coordinate pairs over 3 regimes; deviation at "
                    "N=400 is at most " + fmt(worst_ratio) + " of the deviation at N=50";
        return r;
    }

    // Honest failure: trace the deviation curve of the first offender so the
    // verdict records whether convergence is absent or merely non-monotone
    // across the tested window.
    r.pass = false;
    const Offender& off = regressing.front();
    const ScalingRegime regime(off.alpha);
    const EdgeDynamics dyn(1.0, 1.0, regime, 1.0);
    const LimitingCovariance sigma(motifs, regime, dyn);
    const double lim = sigma(off.i, off.j, off.s, off.t);
    double peak_dev = 0.0, final_dev = 0.0;
    long peak_n = 0, recover_n = 0, final_n = 0;
    for (long n = 50; n <= 3276800; n *= 2) {
        const double dev = std::abs(
            normalized_exact_covariance(motifs[off.i], motifs[off.j], n, dyn, off.s, off.t) -
            lim);
        if (dev > peak_dev) {
            peak_dev = dev;
            peak_n = n;
        }
        if (recover_n == 0 && n > 50 && dev < off.dev50) recover_n = n;
        final_dev = dev;
        final_n = n;
    }
    r.details = std::to_string(regressing.size()) + " of " + std::to_string(pairs) +
                " cells regress from N=50 to N=400; first: motifs (" + std::to_string(off.i) +
                "," + std::to_string(off.j) + ") at (s,t)=(" + fmt(off.s) + "," + fmt(off.t) +
                "), alpha=" + to_fraction_string(off.alpha) + ", |dev| " + fmt(off.dev50) +
                " at N=50 vs " + fmt(off.dev400) + " at N=400. The deviation peaks at " +
                fmt(peak_dev) + " near N=" + std::to_string(peak_n) +
                (recover_n > 0
                     ? ", drops back below the N=50 level from N=" + std::to_string(recover_n)
                     : ", and has not returned to the N=50 level by N=" +
                           std::to_string(final_n)) +
                ", and reaches " + fmt(final_dev) + " at N=" + std::to_string(final_n) +
                ": a subdominant overlap class decays slowly enough that the N=50 vs N=400 "
                "window sits astride its peak";
    return r;
}

CriterionResult criterion_switch_bounds(const VerifyOptions& options) {
    CriterionResult r{7, "switch-probability bounds", true, 0, ""};
    const ScalingRegime regime(Rational(1, 2));
    const EdgeDynamics dyn(1.0, 1.0, regime, 1.0);
    const std::vector<long> sizes = {10, 100, 1000};

    // Analytic single-switch probabilities against the linear-in-gap bound.
    double worst_single = 0.0;
    for (long N : sizes) {
        for (int a = 0; a < 20; ++a) {
            for (int b = a + 1; b < 20; ++b) {
                const double rt = a / 19.0, st = b / 19.0;
                const double lhs = switch_probability(dyn, N, rt, st);
                const double bound = single_switch_bound(dyn, N, rt, st);
                worst_single = std::max(worst_single, lhs / bound);
                if (lhs > bound) {
                    r.pass = false;
                    r.details = "single-switch bound violated at N=" + std::to_string(N) +
                                ", (r,s)=(" + fmt(rt) + "," + fmt(st) + "): " + fmt(lhs) +
                                " > " + fmt(bound);
                    return r;
                }
            }
        }
    }

    // Monte Carlo double-switch frequencies against the quadratic-in-gap bound.
    const long samples = 1000000;
    const std::vector<double> times = {0.0, 0.25, 0.5, 0.75, 1.0};
    double worst_margin = -1e300;  // (freq - bound) / sigma, most adverse
    for (long N : sizes) {
        std::vector<std::array<int, 3>> triples;
        for (std::size_t a = 0; a < times.size(); ++a)
            for (std::size_t b = a + 1; b < times.size(); ++b)
                for (std::size_t c = b + 1; c < times.size(); ++c)
                    triples.push_back({static_cast<int>(a), static_cast<int>(b),
                                       static_cast<int>(c)});
        std::vector<long> hits(triples.size(), 0);
        RngStream rng = RngStream::keyed(options.seed, 7777, static_cast<std::uint64_t>(N), 0);
        for (long sample = 0; sample < samples; ++sample) {
            const Trajectory traj = sample_trajectory(dyn, N, rng);
            std::array<int, 5> state{};
            for (std::size_t k = 0; k < times.size(); ++k) state[k] = traj.state_at(times[k]);
            for (std::size_t k = 0; k < triples.size(); ++k) {
                const auto& [a, b, c] = triples[k];
                if (state[static_cast<std::size_t>(a)] != state[static_cast<std::size_t>(b)] &&
                    state[static_cast<std::size_t>(b)] != state[static_cast<std::size_t>(c)])
                    ++hits[k];
            }
        }
        for (std::size_t k = 0; k < triples.size(); ++k) {
            const auto& [a, b, c] = triples[k];
            const double freq = static_cast<double>(hits[k]) / static_cast<double>(samples);
            const double bound = double_switch_bound(dyn, N, times[static_cast<std::size_t>(a)],
                                                     times[static_cast<std::size_t>(c)]);
            const double sigma =
                std::sqrt(std::max(freq * (1.0 - freq), 1.0 / static_cast<double>(samples)) /
                          static_cast<double>(samples));
            worst_margin = std::max(worst_margin, (freq - bound) / sigma);
            if (freq > bound + 4.0 * sigma) {
                r.pass = false;
                r.details = "double-switch bound violated at N=" + std::to_string(N) +
                            ", times (" + fmt(times[static_cast<std::size_t>(a)]) + "," +
                            fmt(times[static_cast<std::size_t>(b)]) + "," +
                            fmt(times[static_cast<std::size_t>(c)]) + "): frequency " +
                            fmt(freq) + " > bound " + fmt(bound) + " + 4*" + fmt(sigma);
                return r;
            }
        }
    }
    std::ostringstream d;
    d << "single-switch bound holds on all 20x20 grids (max LHS/bound = " << fmt(worst_single)
      << "); double-switch frequencies at " << samples
      << " samples stay below the bound (worst normalized margin " << fmt(worst_margin) << ")";
    r.details = d.str();
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_criteria(const VerifyOptions& options) {
    using Runner = CriterionResult (*)(const VerifyOptions&);
    const std::vector<Runner> runners = {
        &criterion_combinatorics,     &criterion_pairing_constant, &criterion_scaling_example,
        &criterion_dense_clt,         &criterion_sparse_covariance, &criterion_convergence,
        &criterion_switch_bounds,
    };
    std::vector<CriterionResult> results;
    for (std::size_t k = 0; k < runners.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult result;
        try {
            result = runners[k](options);
        } catch (const std::exception& e) {
            result.id = static_cast<int>(k) + 1;
            result.name = "criterion " + std::to_string(k + 1);
            result.pass = false;
            result.details = std::string("exception: ") + e.what();
        }
        result.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(result));
    }
    return results;
}

std::string format_criterion_line(const CriterionResult& result) {
    std::ostringstream line;
    line << (result.pass ? "PASS" : "FAIL") << "  " << result.id << "  " << result.name
         << "  (" << fmt(result.seconds) << " s)  " << result.details;
    return line.str();
}

}  // namespace dynerg
