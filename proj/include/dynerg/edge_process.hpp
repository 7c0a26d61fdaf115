#pragma once

#include <vector>

#include "dynerg/rng.hpp"
#include "dynerg/scaling.hpp"

namespace dynerg {

// Stationary two-state exponential alternating process for one vertex pair.
// lambda_off_base is scaled by regime.rho(N); lambda_on is N-free.
struct EdgeDynamics {
    double lambda_on;        // exit rate from the present state
    double lambda_off_base;  // base exit rate from the absent state
    ScalingRegime regime;
    double horizon;  // T

    EdgeDynamics(double lambda_on_, double lambda_off_base_, ScalingRegime regime_,
                 double horizon_);

    double lambda_off(double n) const { return regime.rho(n) * lambda_off_base; }
    double relax_rate(double n) const { return lambda_on + lambda_off(n); }
};

// Stationary presence probability p_N = lambda_off,N / (lambda_on + lambda_off,N).
double stationary_probability(const EdgeDynamics& dyn, long n);

// kappa_N(s,t) = p(1-p) exp(-(lambda_on + lambda_off,N)|t-s|).
double edge_covariance(const EdgeDynamics& dyn, long n, double s, double t);

// Limits of p_N / rho_N and kappa_N / rho_N.
struct LimitFunctions {
    double p_star;
    double amplitude;   // kappa_star(t,t)
    double decay_rate;  // exponential decay in |s-t|
    double kappa(double s, double t) const;
};
LimitFunctions limit_functions(const EdgeDynamics& dyn);

struct Trajectory {
    int initial_state = 0;           // state on [0, first flip)
    std::vector<double> flip_times;  // strictly increasing, in (0, horizon]

    int state_at(double t) const;                  // cadlag evaluation
    int flips_within(double a, double b) const;    // flips in (a, b]
};

// Stationary start, exponential holding times, truncated at the horizon.
Trajectory sample_trajectory(const EdgeDynamics& dyn, long n, RngStream& rng);

// Exact switching probabilities of the stationary chain.
double switch_probability(const EdgeDynamics& dyn, long n, double r, double s);
double double_switch_probability(const EdgeDynamics& dyn, long n, double r, double s,
                                 double t);

// Flip-probability bound constant (p_star(0) + 2) P e^{PT} with
// P = max(lambda_on, lambda_off_base) bounding every sojourn density.
double assumption_constant(const EdgeDynamics& dyn);
double single_switch_bound(const EdgeDynamics& dyn, long n, double r, double s);
double double_switch_bound(const EdgeDynamics& dyn, long n, double r, double t);

}  // namespace dynerg
