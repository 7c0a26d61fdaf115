#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynerg/graph.hpp"
#include "dynerg/rational.hpp"

namespace dynerg {

// Edge-density control sequence: rho_N = N^{-alpha} with alpha a nonnegative
// exact rational; alpha = 0 is the constant-one (dense) regime.
struct ScalingRegime {
    Rational alpha = 0;

    ScalingRegime() = default;
    explicit ScalingRegime(Rational a);
    static ScalingRegime constant_one() { return ScalingRegime(Rational(0)); }
    static ScalingRegime power_law(const std::string& alpha_text);

    bool is_constant_one() const { return alpha == 0; }
    std::string kind() const { return is_constant_one() ? "constant-one" : "power-law"; }
    double rho(double n) const;  // N^{-alpha}
};

// Exact decay exponent e with F_N(g) = N^e under the regime: e = -V(g) + alpha*E(g).
struct ScalingExponent {
    Rational value;

    // Limit of N^value: "0", "1" or "inf".
    std::string limit_class() const {
        if (value < 0) return "0";
        if (value == 0) return "1";
        return "inf";
    }
    bool operator==(const ScalingExponent& o) const { return value == o.value; }
};

ScalingExponent f_exponent(int n_vertices, int n_edges, const ScalingRegime& regime);
ScalingExponent f_exponent(const LabeledGraph& g, const ScalingRegime& regime);
ScalingExponent f_exponent(const Pattern& g, const ScalingRegime& regime);

// True iff every isolated-vertex-free subgraph pattern of H (H itself included)
// has a strictly negative exponent; isolated-vertex variants follow a fortiori.
bool assumption3_holds(const LabeledGraph& H, const ScalingRegime& regime);

// Some subgraph pattern of H whose density does not vanish, if any.
std::optional<Pattern> assumption3_offender(const LabeledGraph& H,
                                            const ScalingRegime& regime);

// Raised when a motif set is incompatible with the scaling regime.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exponent of F^opt over the common subgraph patterns of (H, H*).
ScalingExponent optimal_exponent(const LabeledGraph& H, const LabeledGraph& H_star,
                                 const ScalingRegime& regime);

// OCS(H,H*): the subset of CS(H,H*) attaining the exact maximum exponent
// (all exact-rational ties included). Requires assumption3 on both graphs.
std::set<Pattern> optimal_common_subgraphs(const LabeledGraph& H, const LabeledGraph& H_star,
                                           const ScalingRegime& regime);

// True iff the pairwise optimal exponent equals each graph's own optimal exponent.
bool equioptimal(const LabeledGraph& H, const LabeledGraph& H_star,
                 const ScalingRegime& regime);

enum class PairingMode { enumerate, closed_form };

// C(H,H*,g): normalized count of pairs (g1,g2) of copies of H and H* inside
// K_n (n = V(H)+V(H*)-V(g)) whose intersection has pattern g, weighted 1/n!.
// enumerate mode evaluates that definition by brute force (n capped at 10);
// closed_form mode returns A(g)S(H,g)S(H*,g)/(A(H)A(H*)) and requires the
// identity's hypotheses: H and H* equioptimal and g in OCS(H,H*).
Rational pairing_constant(const LabeledGraph& H, const LabeledGraph& H_star, const Pattern& g,
                          PairingMode mode,
                          const ScalingRegime* regime_for_closed_form = nullptr);

namespace detail {
// Raw pair count with intersection pattern exactly g (isolated vertices in g
// respected), over copies inside K_n; used by enumerate mode and cross-checks.
BigInt intersection_pair_count(const LabeledGraph& H, const LabeledGraph& H_star,
                               const Pattern& g, int n);
}  // namespace detail

}  // namespace dynerg
