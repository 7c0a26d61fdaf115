#include "dynerg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dynerg {

namespace {

// Edges of H as index pairs into its sorted vertex list.
std::vector<std::pair<int, int>> indexed_edges(const LabeledGraph& H) {
    const auto& verts = H.vertices();
    auto idx = [&](int label) {
        return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), label) -
                                verts.begin());
    };
    std::vector<std::pair<int, int>> out;
    out.reserve(H.edges().size());
    for (const auto& [a, b] : H.edges()) out.push_back({idx(a), idx(b)});
    return out;
}

}  // namespace

std::vector<OverlapClass> overlap_classes(const LabeledGraph& H_i, const LabeledGraph& H_j) {
    const int vi = H_i.vertex_count();
    const int vj = H_j.vertex_count();
    const auto edges_i = indexed_edges(H_i);
    const auto edges_j = indexed_edges(H_j);

    std::vector<std::vector<bool>> adj_i(vi, std::vector<bool>(vi, false));
    for (const auto& [a, b] : edges_i) adj_i[a][b] = adj_i[b][a] = true;

    // Count partial injections psi: D -> V(H_i), D subseteq V(H_j), grouped by
    // the exact intersection pattern (shared vertices, shared edges).
    std::map<Pattern, BigInt> class_counts;
    std::vector<int> members;   // D as index list
    std::vector<int> image;     // psi(members[r])
    std::vector<bool> used(vi, false);

    auto record = [&]() {
        std::vector<Edge> shared;
        const int d = static_cast<int>(members.size());
        for (const auto& [a, b] : edges_j) {
            int ra = -1, rb = -1;
            for (int r = 0; r < d; ++r) {
                if (members[r] == a) ra = r;
                if (members[r] == b) rb = r;
            }
            if (ra < 0 || rb < 0) continue;
            if (adj_i[image[ra]][image[rb]])
                shared.push_back({std::min(ra, rb) + 1, std::max(ra, rb) + 1});
        }
        if (shared.empty()) return;  // no shared edge: independent factors, zero covariance
        std::vector<int> verts(d);
        for (int r = 0; r < d; ++r) verts[r] = r + 1;
        // Isolated shared vertices stay in the vertex list, so they stay in the key.
        class_counts[canonical_form(LabeledGraph(std::move(verts), std::move(shared)))] += 1;
    };

    auto extend = [&](auto&& self, int next_min) -> void {
        record();
        for (int a = next_min; a < vj; ++a) {
            members.push_back(a);
            for (int t = 0; t < vi; ++t) {
                if (used[t]) continue;
                used[t] = true;
                image.push_back(t);
                self(self, a + 1);
                image.pop_back();
                used[t] = false;
            }
            members.pop_back();
        }
    };
    extend(extend, 0);

    const BigInt aut_product = BigInt(automorphism_count(H_i)) * automorphism_count(H_j);
    std::vector<OverlapClass> out;
    out.reserve(class_counts.size());
    for (const auto& [pattern, count] : class_counts) {
        OverlapClass oc;
        oc.pattern = pattern;
        oc.joint_vertex_count = vi + vj - pattern.n_vertices;
        oc.shared_edges = pattern.n_edges();
        oc.pair_constant = Rational(count, aut_product);
        out.push_back(std::move(oc));
    }
    return out;
}

BigInt expected_count_pairs(const LabeledGraph& H, long N) {
    return graph_count_in_complete(H, N);
}

double expected_count(const LabeledGraph& H, long N, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability out of range");
    return to_double(Rational(graph_count_in_complete(H, N))) *
           std::pow(p, H.edge_count());
}

double exact_covariance(const LabeledGraph& H_i, const LabeledGraph& H_j, long N,
                        const EdgeDynamics& dyn, double s, double t) {
    const long vmax = std::max(H_i.vertex_count(), H_j.vertex_count());
    if (N < vmax) throw std::invalid_argument("N below motif order");
    const double p = stationary_probability(dyn, N);
    const double kappa = edge_covariance(dyn, N, s, t);
    const double pp = p * p;
    const int ei = H_i.edge_count();
    const int ej = H_j.edge_count();

    double total = 0.0;
    for (const OverlapClass& oc : overlap_classes(H_i, H_j)) {
        const double pairs = to_double(
            Rational(falling_factorial(N, oc.joint_vertex_count)) * oc.pair_constant);
        const int k = oc.shared_edges;
        const double bracket = std::pow(kappa + pp, k) - std::pow(pp, k);
        total += pairs * std::pow(p, ei - k) * std::pow(p, ej - k) * bracket;
    }
    return total;
}

Rational normalizer_exponent(const LabeledGraph& H, const ScalingRegime& regime) {
    const Rational opt = optimal_exponent(H, H, regime).value;
    return opt / 2 - f_exponent(H, regime).value;
}

double normalizer(const LabeledGraph& H, long N, const ScalingRegime& regime) {
    return std::pow(static_cast<double>(N), to_double(normalizer_exponent(H, regime)));
}

double normalized_exact_covariance(const LabeledGraph& H_i, const LabeledGraph& H_j, long N,
                                   const EdgeDynamics& dyn, double s, double t) {
    return exact_covariance(H_i, H_j, N, dyn, s, t) /
           (normalizer(H_i, N, dyn.regime) * normalizer(H_j, N, dyn.regime));
}

double RadicalCoefficient::value() const {
    return to_double(a) * std::sqrt(to_double(Rational(b)));
}

std::string RadicalCoefficient::to_string() const {
    std::string out = to_fraction_string(a);
    if (b != 1) out += "*sqrt(" + b.str() + ")";
    return out;
}

RadicalCoefficient limit_coefficient(const LabeledGraph& H, const Pattern& g) {
    // sqrt(A(g)) S(H,g) / A(H) with the radical reduced to squarefree b.
    std::int64_t n = automorphism_count(g);
    std::int64_t outside = 1, inside = 1;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        for (int r = 0; r < e / 2; ++r) outside *= d;
        if (e % 2) inside *= d;
    }
    inside *= n;
    RadicalCoefficient rc;
    rc.a = Rational(BigInt(outside) * subgraph_pattern_count(H, g),
                    BigInt(automorphism_count(H)));
    rc.b = inside;
    return rc;
}

LimitingCovariance::LimitingCovariance(const std::vector<LabeledGraph>& motifs,
                                       const ScalingRegime& regime, const EdgeDynamics& dyn)
    : m_(motifs.size()), lim_(limit_functions(dyn)) {
    for (const LabeledGraph& H : motifs)
        if (!assumption3_holds(H, regime))
            throw std::invalid_argument(
                "regime incompatibility: motif has a non-vanishing subgraph density");
    if (!(lim_.p_star > 0)) throw std::invalid_argument("limit probability must be positive");

    terms_.assign(m_ * m_, {});
    for (std::size_t i = 0; i < m_; ++i) {
        const auto ocs_i = optimal_common_subgraphs(motifs[i], motifs[i], regime);
        for (std::size_t j = 0; j < m_; ++j) {
            if (!equioptimal(motifs[i], motifs[j], regime)) continue;
            const auto ocs = optimal_common_subgraphs(motifs[i], motifs[j], regime);
            auto& dst = terms_[i * m_ + j];
            for (const Pattern& g : ocs) {
                Rational c = Rational(automorphism_count(g)) *
                             subgraph_pattern_count(motifs[i], g) *
                             subgraph_pattern_count(motifs[j], g);
                c /= Rational(automorphism_count(motifs[i])) * automorphism_count(motifs[j]);
                dst.push_back(Term{to_double(c), motifs[i].edge_count() - g.n_edges(),
                                   motifs[j].edge_count() - g.n_edges(), g.n_edges()});
            }
        }
    }
}

double LimitingCovariance::operator()(std::size_t i, std::size_t j, double s,
                                      double t) const {
    if (i >= m_ || j >= m_) throw std::out_of_range("motif index");
    double total = 0.0;
    for (const Term& term : terms_[i * m_ + j]) {
        total += term.coeff * std::pow(lim_.p_star, term.p_power_s) *
                 std::pow(lim_.p_star, term.p_power_t) *
                 std::pow(lim_.kappa(s, t), term.kappa_power);
    }
    return total;
}

bool LimitingCovariance::identically_zero(std::size_t i, std::size_t j) const {
    if (i >= m_ || j >= m_) throw std::out_of_range("motif index");
    return terms_[i * m_ + j].empty();
}

ExampleReport example_report(const Rational& alpha, double lambda_on, double lambda_off) {
    if (!(alpha > 0 && alpha < 1))
        throw std::invalid_argument("example report needs alpha in (0,1)");
    const ScalingRegime regime{alpha};
    const LabeledGraph wedge = parse_graph("wedge");
    const LabeledGraph triangle = parse_graph("triangle");

    ExampleReport rep;
    rep.alpha = alpha;
    rep.f_exponent_wedge = f_exponent(wedge, regime).value;
    rep.f_exponent_triangle = f_exponent(triangle, regime).value;
    rep.opt_exponent_wedge = optimal_exponent(wedge, wedge, regime).value;
    rep.opt_exponent_triangle = optimal_exponent(triangle, triangle, regime).value;
    rep.normalizer_exponent_wedge = normalizer_exponent(wedge, regime);
    rep.normalizer_exponent_triangle = normalizer_exponent(triangle, regime);

    auto as_vector = [](const std::set<Pattern>& s) {
        return std::vector<Pattern>(s.begin(), s.end());
    };
    rep.ocs_wedge = as_vector(optimal_common_subgraphs(wedge, wedge, regime));
    rep.ocs_triangle = as_vector(optimal_common_subgraphs(triangle, triangle, regime));
    rep.ocs_pair = as_vector(optimal_common_subgraphs(wedge, triangle, regime));

    auto kernel_terms = [&](const LabeledGraph& H, const std::vector<Pattern>& ocs) {
        std::vector<KernelTerm> out;
        for (const Pattern& g : ocs)
            out.push_back(KernelTerm{limit_coefficient(H, g), g,
                                     H.edge_count() - g.n_edges(), g.n_edges()});
        return out;
    };
    rep.kernel_wedge = kernel_terms(wedge, rep.ocs_wedge);
    rep.kernel_triangle = kernel_terms(triangle, rep.ocs_triangle);

    const EdgeDynamics dyn(lambda_on, lambda_off, regime, 1.0);
    const LimitFunctions lim = limit_functions(dyn);
    rep.limit_probability = lim.p_star;
    rep.limit_decay_rate = lim.decay_rate;

    const Rational half(1, 2);
    if (alpha < half)
        rep.correlation_regime = "perfectly correlated";
    else if (alpha == half)
        rep.correlation_regime = "positively but not perfectly correlated";
    else
        rep.correlation_regime = "independent";
    return rep;
}

}  // namespace dynerg
