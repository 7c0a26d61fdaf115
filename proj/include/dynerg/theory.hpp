#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dynerg/edge_process.hpp"
#include "dynerg/graph.hpp"
#include "dynerg/rational.hpp"
#include "dynerg/scaling.hpp"

namespace dynerg {

// One intersection type of ordered embedding pairs (copy of H_i, copy of H_j).
// The pattern records the exact shared subgraph, isolated shared vertices
// included, so the per-class pair count is exact at every finite N.
struct OverlapClass {
    Pattern pattern;         // shared vertices + shared edges, >= 1 shared edge
    int joint_vertex_count;  // V(H_i) + V(H_j) - V(pattern)
    int shared_edges;        // E(pattern)
    Rational pair_constant;  // ordered pair count at N is (N)_joint * pair_constant
};

std::vector<OverlapClass> overlap_classes(const LabeledGraph& H_i, const LabeledGraph& H_j);

// N! p^E / ((N-V)! A); 0 when N < V.
double expected_count(const LabeledGraph& H, long N, double p);
BigInt expected_count_pairs(const LabeledGraph& H, long N);  // (N)_V / A exactly

// Cov(X_{N,i}(s), X_{N,j}(t)) for the stationary dynamics, exact overlap sum.
double exact_covariance(const LabeledGraph& H_i, const LabeledGraph& H_j, long N,
                        const EdgeDynamics& dyn, double s, double t);

// Normalized counts divide centered counts by N^d, d = opt_exponent/2 - own_exponent.
Rational normalizer_exponent(const LabeledGraph& H, const ScalingRegime& regime);
double normalizer(const LabeledGraph& H, long N, const ScalingRegime& regime);
double normalized_exact_covariance(const LabeledGraph& H_i, const LabeledGraph& H_j, long N,
                                   const EdgeDynamics& dyn, double s, double t);

// a * sqrt(b) with b squarefree; the limit-coefficient sqrt(A(g)) S(H,g) / A(H).
struct RadicalCoefficient {
    Rational a;
    BigInt b;
    double value() const;
    std::string to_string() const;  // "a*sqrt(b)" reduced
    bool operator==(const RadicalCoefficient& o) const { return a == o.a && b == o.b; }
};
RadicalCoefficient limit_coefficient(const LabeledGraph& H, const Pattern& g);

// Limiting covariance kernels Sigma_{i,j}(s,t) of the normalized count vector.
class LimitingCovariance {
  public:
    LimitingCovariance(const std::vector<LabeledGraph>& motifs, const ScalingRegime& regime,
                       const EdgeDynamics& dyn);
    std::size_t size() const { return m_; }
    double operator()(std::size_t i, std::size_t j, double s, double t) const;
    bool identically_zero(std::size_t i, std::size_t j) const;

  private:
    struct Term {
        double coeff;      // exact rational product, evaluated once
        int p_power_s;     // E(H_i) - E(g)
        int p_power_t;     // E(H_j) - E(g)
        int kappa_power;   // E(g)
    };
    std::size_t m_ = 0;
    LimitFunctions lim_;
    std::vector<std::vector<Term>> terms_;
};

// Wedge/triangle worked example: exponents, optimal sets, coefficients, kernels.
struct KernelTerm {
    RadicalCoefficient coefficient;
    Pattern pattern;
    int p_power;      // E(H) - E(g)
    int kappa_power;  // E(g)
};
struct ExampleReport {
    Rational alpha;
    Rational f_exponent_wedge;
    Rational f_exponent_triangle;
    Rational opt_exponent_wedge;
    Rational opt_exponent_triangle;
    Rational normalizer_exponent_wedge;
    Rational normalizer_exponent_triangle;
    std::vector<Pattern> ocs_wedge;
    std::vector<Pattern> ocs_triangle;
    std::vector<Pattern> ocs_pair;
    std::vector<KernelTerm> kernel_wedge;
    std::vector<KernelTerm> kernel_triangle;
    double limit_probability;
    double limit_decay_rate;
    std::string correlation_regime;
};
ExampleReport example_report(const Rational& alpha, double lambda_on, double lambda_off);

}  // namespace dynerg
