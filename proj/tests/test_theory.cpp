#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "dynerg/theory.hpp"

using namespace dynerg;

namespace {

// Test-local brute force: all copies of H inside the complete graph on
// {1..N}, materialized as sorted edge lists.
std::set<std::vector<Edge>> brute_copies(const LabeledGraph& H, int N) {
    const int k = H.vertex_count();
    const auto& verts = H.vertices();
    std::set<std::vector<Edge>> copies;
    std::vector<int> image(static_cast<std::size_t>(k), 0);
    std::vector<bool> used(static_cast<std::size_t>(N) + 1, false);
    std::function<void(int)> place = [&](int slot) {
        if (slot == k) {
            std::vector<Edge> realized;
            for (const auto& [a, b] : H.edges()) {
                const auto ia = static_cast<std::size_t>(
                    std::lower_bound(verts.begin(), verts.end(), a) - verts.begin());
                const auto ib = static_cast<std::size_t>(
                    std::lower_bound(verts.begin(), verts.end(), b) - verts.begin());
                const int u = image[ia], v = image[ib];
                realized.push_back({std::min(u, v), std::max(u, v)});
            }
            std::sort(realized.begin(), realized.end());
            copies.insert(std::move(realized));
            return;
        }
        for (int cand = 1; cand <= N; ++cand) {
            if (used[static_cast<std::size_t>(cand)]) continue;
            used[static_cast<std::size_t>(cand)] = true;
            image[static_cast<std::size_t>(slot)] = cand;
            place(slot + 1);
            used[static_cast<std::size_t>(cand)] = false;
        }
    };
    place(0);
    return copies;
}

// Sum over copy pairs of the exact stationary moment, minus the product of
// expectations: independent edges with covariance kappa on shared edges.
double brute_covariance(const LabeledGraph& H_i, const LabeledGraph& H_j, int N,
                        const EdgeDynamics& dyn, double s, double t) {
    const double p = stationary_probability(dyn, N);
    const double kappa = edge_covariance(dyn, N, s, t);
    const auto copies_i = brute_copies(H_i, N);
    const auto copies_j = brute_copies(H_j, N);
    const int ei = H_i.edge_count(), ej = H_j.edge_count();
    double total = 0.0;
    for (const auto& a : copies_i) {
        for (const auto& b : copies_j) {
            std::vector<Edge> shared;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(shared));
            const int k = static_cast<int>(shared.size());
            total += std::pow(kappa + p * p, k) * std::pow(p, ei - k) * std::pow(p, ej - k) -
                     std::pow(p, ei + ej);
        }
    }
    return total;
}

}  // namespace

TEST_CASE("overlap classes of small motif pairs") {
    const LabeledGraph edge = parse_graph("edge");
    const LabeledGraph wedge = parse_graph("wedge");
    const LabeledGraph triangle = parse_graph("triangle");

    const auto ee = overlap_classes(edge, edge);
    REQUIRE(ee.size() == 1);
    CHECK(ee[0].joint_vertex_count == 2);
    CHECK(ee[0].shared_edges == 1);
    CHECK(ee[0].pair_constant == Rational(1, 2));

    const auto et = overlap_classes(edge, triangle);
    REQUIRE(et.size() == 1);
    CHECK(et[0].joint_vertex_count == 3);
    CHECK(et[0].shared_edges == 1);
    CHECK(et[0].pair_constant == Rational(1, 2));

    auto tt = overlap_classes(triangle, triangle);
    REQUIRE(tt.size() == 2);
    std::sort(tt.begin(), tt.end(), [](const OverlapClass& a, const OverlapClass& b) {
        return a.shared_edges < b.shared_edges;
    });
    CHECK(tt[0].pattern == Pattern{2, {{1, 2}}});
    CHECK(tt[0].joint_vertex_count == 4);
    CHECK(tt[0].pair_constant == Rational(1, 2));
    CHECK(tt[1].pattern == canonical_form(triangle));
    CHECK(tt[1].joint_vertex_count == 3);
    CHECK(tt[1].pair_constant == Rational(1, 6));

    // Two wedges can share an edge, an edge plus the third vertex, or coincide.
    auto ww = overlap_classes(wedge, wedge);
    REQUIRE(ww.size() == 3);
    std::sort(ww.begin(), ww.end(), [](const OverlapClass& a, const OverlapClass& b) {
        return a.pattern < b.pattern;
    });
    CHECK(ww[0].pattern == Pattern{2, {{1, 2}}});
    CHECK(ww[0].joint_vertex_count == 4);
    CHECK(ww[0].pair_constant == Rational(2));
    CHECK(ww[1].pattern == Pattern{3, {{1, 2}}});  // shared edge + shared isolated vertex
    CHECK(ww[1].joint_vertex_count == 3);
    CHECK(ww[1].pair_constant == Rational(1));
    CHECK(ww[2].pattern == canonical_form(wedge));
    CHECK(ww[2].joint_vertex_count == 3);
    CHECK(ww[2].pair_constant == Rational(1, 2));
}

TEST_CASE("expected counts") {
    const LabeledGraph edge = parse_graph("edge");
    const LabeledGraph triangle = parse_graph("triangle");
    CHECK(expected_count(edge, 10, 0.5) == doctest::Approx(22.5));
    CHECK(expected_count(triangle, 10, 0.5) == doctest::Approx(15.0));
    CHECK(expected_count(triangle, 2, 0.5) == doctest::Approx(0.0));
    CHECK(expected_count_pairs(triangle, 10) == BigInt(120));
    CHECK_THROWS_AS(expected_count(edge, 10, 1.5), std::invalid_argument);
}

TEST_CASE("exact covariance matches the brute-force pair sum at N=7") {
    const int N = 7;
    const EdgeDynamics dyn(1.3, 0.7, ScalingRegime::power_law("1/2"), 1.0);
    const std::vector<LabeledGraph> motifs = {
        parse_graph("edge"), parse_graph("wedge"), parse_graph("triangle"),
        parse_graph("V 4\n1 2\n3 4")};  // includes a disconnected motif
    for (std::size_t i = 0; i < motifs.size(); ++i) {
        for (std::size_t j = i; j < motifs.size(); ++j) {
            for (const auto& [s, t] : std::vector<std::pair<double, double>>{{0.3, 0.8},
                                                                             {0.5, 0.5}}) {
                const double brute = brute_covariance(motifs[i], motifs[j], N, dyn, s, t);
                const double fast = exact_covariance(motifs[i], motifs[j], N, dyn, s, t);
                CHECK(fast == doctest::Approx(brute).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("exact covariance properties") {
    const EdgeDynamics dyn(1.0, 1.0, ScalingRegime::constant_one(), 1.0);
    const LabeledGraph edge = parse_graph("edge");
    const LabeledGraph triangle = parse_graph("triangle");
    CHECK(exact_covariance(edge, triangle, 30, dyn, 0.2, 0.9) ==
          doctest::Approx(exact_covariance(triangle, edge, 30, dyn, 0.9, 0.2)));
    CHECK(exact_covariance(triangle, triangle, 30, dyn, 0.4, 0.4) > 0);
    CHECK_THROWS_AS(exact_covariance(triangle, triangle, 2, dyn, 0.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("normalizer exponents") {
    const LabeledGraph edge = parse_graph("edge");
    const LabeledGraph wedge = parse_graph("wedge");
    const LabeledGraph triangle = parse_graph("triangle");
    // Dense regime: V - 1.
    const ScalingRegime dense = ScalingRegime::constant_one();
    CHECK(normalizer_exponent(edge, dense) == Rational(1));
    CHECK(normalizer_exponent(wedge, dense) == Rational(2));
    CHECK(normalizer_exponent(triangle, dense) == Rational(2));
    for (const Rational& alpha : {Rational(3, 10), Rational(1, 2), Rational(7, 10)}) {
        const ScalingRegime regime(alpha);
        CHECK(normalizer_exponent(wedge, regime) == 2 - 3 * alpha / 2);
        CHECK(normalizer_exponent(triangle, regime) ==
              std::max(Rational(2 - 5 * alpha / 2), Rational(Rational(3, 2) - 3 * alpha / 2)));
    }
    CHECK(normalizer(edge, 100, dense) == doctest::Approx(100.0));
}

TEST_CASE("limit coefficients a*sqrt(b) with squarefree b") {
    const LabeledGraph wedge = parse_graph("wedge");
    const LabeledGraph triangle = parse_graph("triangle");
    const Pattern edge_p = canonical_form(parse_graph("edge"));
    const Pattern tri_p = canonical_form(triangle);
    const RadicalCoefficient cw = limit_coefficient(wedge, edge_p);
    CHECK(cw.a == Rational(1));
    CHECK(cw.b == BigInt(2));
    CHECK(cw.value() == doctest::Approx(std::sqrt(2.0)));
    const RadicalCoefficient cte = limit_coefficient(triangle, edge_p);
    CHECK(cte.a == Rational(1, 2));
    CHECK(cte.b == BigInt(2));
    const RadicalCoefficient ctt = limit_coefficient(triangle, tri_p);
    CHECK(ctt.a == Rational(1, 6));
    CHECK(ctt.b == BigInt(6));
    CHECK(ctt.value() == doctest::Approx(std::sqrt(6.0) / 6.0));
    const RadicalCoefficient cww = limit_coefficient(wedge, canonical_form(wedge));
    CHECK(cww.a == Rational(1, 2));
    CHECK(cww.b == BigInt(2));
}

TEST_CASE("limiting covariance kernel values and zero structure") {
    const LabeledGraph edge = parse_graph("edge");
    const LabeledGraph triangle = parse_graph("triangle");

    // Single motif, sparse regime: Sigma(s,t) = kappa*(s,t)/2 for the edge.
    {
        const ScalingRegime regime(Rational(1, 2));
        const EdgeDynamics dyn(1.0, 1.0, regime, 1.0);
        const LimitingCovariance sigma({edge}, regime, dyn);
        CHECK(sigma(0, 0, 0.0, 0.3) == doctest::Approx(0.5 * std::exp(-0.3)));
        CHECK(sigma(0, 0, 0.7, 0.7) == doctest::Approx(0.5));
    }

    // Non-equioptimal pair: the cross kernel vanishes identically.
    {
        const ScalingRegime regime(Rational(7, 10));
        const EdgeDynamics dyn(1.0, 1.0, regime, 1.0);
        const LimitingCovariance sigma({edge, triangle}, regime, dyn);
        CHECK(sigma.identically_zero(0, 1));
        CHECK(!sigma.identically_zero(0, 0));
        CHECK(!sigma.identically_zero(1, 1));
        CHECK(sigma(0, 1, 0.2, 0.9) == 0.0);
        CHECK(sigma(1, 0, 0.9, 0.2) == 0.0);
    }

    // Equioptimal pair: shared dominant pattern makes the cross kernel positive.
    {
        const ScalingRegime regime(Rational(3, 10));
        const EdgeDynamics dyn(1.0, 1.0, regime, 1.0);
        const LimitingCovariance sigma({edge, triangle}, regime, dyn);
        CHECK(!sigma.identically_zero(0, 1));
        CHECK(sigma(0, 1, 0.5, 0.5) > 0);
        CHECK(sigma(0, 1, 0.2, 0.6) == doctest::Approx(sigma(1, 0, 0.6, 0.2)));
    }

    // A motif violating the vanishing-density requirement is rejected.
    {
        const ScalingRegime regime(Rational(1));
        const EdgeDynamics dyn(1.0, 1.0, regime, 1.0);
        CHECK_THROWS_AS(LimitingCovariance({triangle}, regime, dyn), std::invalid_argument);
    }
}

TEST_CASE("limiting covariance matrices are positive semidefinite") {
    const std::vector<LabeledGraph> motifs = {parse_graph("edge"), parse_graph("wedge"),
                                              parse_graph("triangle")};
    const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (const Rational& alpha : {Rational(0), Rational(3, 10), Rational(1, 2)}) {
        const ScalingRegime regime(alpha);
        const EdgeDynamics dyn(1.0, 2.0, regime, 1.0);
        const LimitingCovariance sigma(motifs, regime, dyn);
        const std::size_t dim = motifs.size() * grid.size();
        Eigen::MatrixXd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    sigma(a / grid.size(), b / grid.size(), grid[a % grid.size()],
                          grid[b % grid.size()]);
        CHECK(m.isApprox(m.transpose(), 1e-12));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        CHECK(solver.eigenvalues().minCoeff() > -1e-9 * std::max(1.0, m.norm()));
    }
}

TEST_CASE("normalized finite-N covariance approaches the limit kernel") {
    const ScalingRegime regime(Rational(1, 2));
    const EdgeDynamics dyn(1.0, 1.0, regime, 1.0);
    const LabeledGraph edge = parse_graph("edge");
    const LabeledGraph triangle = parse_graph("triangle");
    const LimitingCovariance sigma({edge, triangle}, regime, dyn);
    for (int which = 0; which < 2; ++which) {
        const LabeledGraph& H = which == 0 ? edge : triangle;
        const double lim = sigma(static_cast<std::size_t>(which), static_cast<std::size_t>(which),
                                 0.25, 0.75);
        double prev = 1e300;
        for (long N : {50L, 100L, 200L, 400L}) {
            const double dev =
                std::abs(normalized_exact_covariance(H, H, N, dyn, 0.25, 0.75) - lim);
            CHECK(dev < prev);
            prev = dev;
        }
    }
}

TEST_CASE("worked example report") {
    CHECK_THROWS_AS(example_report(Rational(0), 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(example_report(Rational(1), 1.0, 1.0), std::invalid_argument);
    const ExampleReport low = example_report(Rational(3, 10), 1.0, 1.0);
    CHECK(low.correlation_regime == "perfectly correlated");
    CHECK(low.ocs_triangle.size() == 1);
    CHECK(low.kernel_triangle.size() == 1);
    CHECK(low.kernel_triangle[0].p_power == 2);
    CHECK(low.kernel_triangle[0].kappa_power == 1);
    CHECK(low.limit_probability == doctest::Approx(1.0));
    CHECK(low.limit_decay_rate == doctest::Approx(1.0));
    const ExampleReport mid = example_report(Rational(1, 2), 1.0, 1.0);
    CHECK(mid.correlation_regime == "positively but not perfectly correlated");
    CHECK(mid.ocs_triangle.size() == 2);
    CHECK(mid.kernel_triangle.size() == 2);
    const ExampleReport high = example_report(Rational(7, 10), 1.0, 1.0);
    CHECK(high.correlation_regime == "independent");
    CHECK(high.ocs_triangle.size() == 1);
    CHECK(high.kernel_triangle[0].kappa_power == 3);
}
