#include "dynerg/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace dynerg {

ScalingRegime::ScalingRegime(Rational a) : alpha(std::move(a)) {
    if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
}

ScalingRegime ScalingRegime::power_law(const std::string& alpha_text) {
    return ScalingRegime(parse_rational(alpha_text));
}

double ScalingRegime::rho(double n) const {
    if (is_constant_one()) return 1.0;
    return std::pow(n, -to_double(alpha));
}

ScalingExponent f_exponent(int n_vertices, int n_edges, const ScalingRegime& regime) {
    if (n_vertices < 1) throw std::invalid_argument("exponent needs >= 1 vertex");
    return ScalingExponent{Rational(-n_vertices) + regime.alpha * n_edges};
}

ScalingExponent f_exponent(const LabeledGraph& g, const ScalingRegime& regime) {
    return f_exponent(g.vertex_count(), g.edge_count(), regime);
}

ScalingExponent f_exponent(const Pattern& g, const ScalingRegime& regime) {
    return f_exponent(g.n_vertices, g.n_edges(), regime);
}

bool assumption3_holds(const LabeledGraph& H, const ScalingRegime& regime) {
    return !assumption3_offender(H, regime).has_value();
}

std::optional<Pattern> assumption3_offender(const LabeledGraph& H,
                                            const ScalingRegime& regime) {
    if (H.edge_count() == 0)
        throw std::invalid_argument("assumption check needs >= 1 edge");
    for (const Pattern& g : subgraph_patterns(H))
        if (f_exponent(g, regime).value >= 0) return g;
    return std::nullopt;
}

namespace {

void require_assumption3(const LabeledGraph& H, const ScalingRegime& regime) {
    if (!assumption3_holds(H, regime))
        throw std::invalid_argument(
            "regime incompatibility: a subgraph pattern has nonvanishing density limit");
}

}  // namespace

ScalingExponent optimal_exponent(const LabeledGraph& H, const LabeledGraph& H_star,
                                 const ScalingRegime& regime) {
    const auto cs = common_subgraph_patterns(H, H_star);
    Rational best;
    bool first = true;
    for (const Pattern& g : cs) {
        Rational e = f_exponent(g, regime).value;
        if (first || e > best) {
            best = e;
            first = false;
        }
    }
    if (first) throw std::logic_error("empty common subgraph pattern set");
    return ScalingExponent{best};
}

std::set<Pattern> optimal_common_subgraphs(const LabeledGraph& H, const LabeledGraph& H_star,
                                           const ScalingRegime& regime) {
    require_assumption3(H, regime);
    require_assumption3(H_star, regime);
    const Rational best = optimal_exponent(H, H_star, regime).value;
    std::set<Pattern> out;
    for (const Pattern& g : common_subgraph_patterns(H, H_star))
        if (f_exponent(g, regime).value == best) out.insert(g);
    return out;
}

bool equioptimal(const LabeledGraph& H, const LabeledGraph& H_star,
                 const ScalingRegime& regime) {
    require_assumption3(H, regime);
    require_assumption3(H_star, regime);
    const Rational joint = optimal_exponent(H, H_star, regime).value;
    return joint == optimal_exponent(H, H, regime).value &&
           joint == optimal_exponent(H_star, H_star, regime).value;
}

namespace detail {

namespace {

struct Copy {
    std::uint32_t vmask = 0;  // vertex subset of [n]
    std::uint64_t emask = 0;  // edge subset over pairs of [n], lexicographic bit order
};

int pair_bit(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

// All labeled copies of H whose vertices lie inside {0,...,n-1}.
std::vector<Copy> copies_in_complete(const LabeledGraph& H, int n) {
    const int v = H.vertex_count();
    const auto& verts = H.vertices();
    std::vector<Copy> out;
    std::set<std::pair<std::uint32_t, std::uint64_t>> seen;
    std::vector<int> image(v, -1);
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == v) {
            Copy c;
            for (int i = 0; i < v; ++i) c.vmask |= 1u << image[i];
            for (const auto& [a, b] : H.edges()) {
                int ia = static_cast<int>(std::lower_bound(verts.begin(), verts.end(), a) -
                                          verts.begin());
                int ib = static_cast<int>(std::lower_bound(verts.begin(), verts.end(), b) -
                                          verts.begin());
                c.emask |= 1ull << pair_bit(n, image[ia], image[ib]);
            }
            if (seen.insert({c.vmask, c.emask}).second) out.push_back(c);
            return;
        }
        for (int cand = 0; cand < n; ++cand) {
            if (used[cand]) continue;
            used[cand] = true;
            image[depth] = cand;
            self(self, depth + 1);
            used[cand] = false;
        }
    };
    rec(rec, 0);
    return out;
}

LabeledGraph copy_to_graph(const Copy& c, int n) {
    std::vector<int> verts;
    for (int i = 0; i < n; ++i)
        if (c.vmask & (1u << i)) verts.push_back(i + 1);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (c.emask & (1ull << pair_bit(n, i, j))) edges.push_back({i + 1, j + 1});
    return LabeledGraph(std::move(verts), std::move(edges));
}

}  // namespace

BigInt intersection_pair_count(const LabeledGraph& H, const LabeledGraph& H_star,
                               const Pattern& g, int n) {
    const auto copies_h = copies_in_complete(H, n);
    const auto copies_s = copies_in_complete(H_star, n);
    BigInt count = 0;
    std::map<std::pair<std::uint32_t, std::uint64_t>, bool> memo;
    for (const Copy& a : copies_h) {
        for (const Copy& b : copies_s) {
            Copy inter{a.vmask & b.vmask, a.emask & b.emask};
            if (inter.emask == 0) continue;  // patternless intersection, weight 0 here
            auto key = std::make_pair(inter.vmask, inter.emask);
            auto it = memo.find(key);
            bool match;
            if (it != memo.end()) {
                match = it->second;
            } else {
                match = canonical_form(copy_to_graph(inter, n)) == g;
                memo.emplace(key, match);
            }
            if (match) ++count;
        }
    }
    return count;
}

}  // namespace detail

Rational pairing_constant(const LabeledGraph& H, const LabeledGraph& H_star, const Pattern& g,
                          PairingMode mode, const ScalingRegime* regime_for_closed_form) {
    if (mode == PairingMode::closed_form) {
        if (regime_for_closed_form == nullptr)
            throw std::invalid_argument("closed-form pairing constant needs a scaling regime");
        if (!equioptimal(H, H_star, *regime_for_closed_form))
            throw std::invalid_argument(
                "closed-form pairing constant requires an equioptimal pair");
        const auto ocs = optimal_common_subgraphs(H, H_star, *regime_for_closed_form);
        if (ocs.find(g) == ocs.end())
            throw std::invalid_argument(
                "closed-form pairing constant requires g in the optimal common set");
        Rational num = Rational(automorphism_count(g)) * subgraph_pattern_count(H, g) *
                       subgraph_pattern_count(H_star, g);
        return num / (Rational(automorphism_count(H)) * automorphism_count(H_star));
    }

    const auto cs = common_subgraph_patterns(H, H_star);
    if (cs.find(g) == cs.end())
        throw std::invalid_argument("pairing constant needs g common to both graphs");
    const int n = H.vertex_count() + H_star.vertex_count() - g.n_vertices;
    if (n > 10)
        throw std::invalid_argument("enumerate mode capped at 10 joint vertices");
    BigInt pairs = detail::intersection_pair_count(H, H_star, g, n);
    BigInt fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    return Rational(pairs, fact);
}

}  // namespace dynerg
