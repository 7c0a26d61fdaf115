#include "dynerg/edge_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynerg {

EdgeDynamics::EdgeDynamics(double lambda_on_, double lambda_off_base_, ScalingRegime regime_,
                           double horizon_)
    : lambda_on(lambda_on_),
      lambda_off_base(lambda_off_base_),
      regime(std::move(regime_)),
      horizon(horizon_) {
    if (!(lambda_on > 0) || !(lambda_off_base > 0))
        throw std::invalid_argument("switching rates must be positive");
    if (!(horizon > 0)) throw std::invalid_argument("horizon must be positive");
}

double stationary_probability(const EdgeDynamics& dyn, long n) {
    if (n < 1) throw std::invalid_argument("vertex count must be >= 1");
    const double off = dyn.lambda_off(static_cast<double>(n));
    return off / (dyn.lambda_on + off);
}

double edge_covariance(const EdgeDynamics& dyn, long n, double s, double t) {
    const double p = stationary_probability(dyn, n);
    const double gamma = dyn.relax_rate(static_cast<double>(n));
    return p * (1.0 - p) * std::exp(-gamma * std::abs(t - s));
}

double LimitFunctions::kappa(double s, double t) const {
    return amplitude * std::exp(-decay_rate * std::abs(t - s));
}

LimitFunctions limit_functions(const EdgeDynamics& dyn) {
    LimitFunctions lf;
    if (!dyn.regime.is_constant_one() && dyn.regime.alpha > 0) {
        // rho_N -> 0: p_N/rho_N -> lambda_off/lambda_on, relaxation rate -> lambda_on.
        lf.p_star = dyn.lambda_off_base / dyn.lambda_on;
        lf.amplitude = lf.p_star;
        lf.decay_rate = dyn.lambda_on;
    } else {
        // N-free process: the limit is the exact finite form.
        lf.p_star = dyn.lambda_off_base / (dyn.lambda_on + dyn.lambda_off_base);
        lf.amplitude = lf.p_star * (1.0 - lf.p_star);
        lf.decay_rate = dyn.lambda_on + dyn.lambda_off_base;
    }
    return lf;
}

int Trajectory::state_at(double t) const {
    auto it = std::upper_bound(flip_times.begin(), flip_times.end(), t);
    auto flips = static_cast<long>(it - flip_times.begin());
    return initial_state ^ static_cast<int>(flips & 1);
}

int Trajectory::flips_within(double a, double b) const {
    auto lo = std::upper_bound(flip_times.begin(), flip_times.end(), a);
    auto hi = std::upper_bound(flip_times.begin(), flip_times.end(), b);
    return static_cast<int>(hi - lo);
}

Trajectory sample_trajectory(const EdgeDynamics& dyn, long n, RngStream& rng) {
    const double p = stationary_probability(dyn, n);
    const double off_rate = dyn.lambda_off(static_cast<double>(n));
    Trajectory traj;
    traj.initial_state = rng.bernoulli(p) ? 1 : 0;
    int state = traj.initial_state;
    double t = 0.0;
    for (;;) {
        t += rng.exponential(state ? dyn.lambda_on : off_rate);
        if (t > dyn.horizon) break;
        traj.flip_times.push_back(t);
        state ^= 1;
    }
    return traj;
}

double switch_probability(const EdgeDynamics& dyn, long n, double r, double s) {
    const double p = stationary_probability(dyn, n);
    const double gamma = dyn.relax_rate(static_cast<double>(n));
    return 2.0 * p * (1.0 - p) * (1.0 - std::exp(-gamma * std::abs(s - r)));
}

double double_switch_probability(const EdgeDynamics& dyn, long n, double r, double s,
                                 double t) {
    if (!(r <= s && s <= t)) throw std::invalid_argument("times must satisfy r <= s <= t");
    const double p = stationary_probability(dyn, n);
    const double gamma = dyn.relax_rate(static_cast<double>(n));
    // Markov two-step: both transition branches carry the same factor product.
    return p * (1.0 - p) * (1.0 - std::exp(-gamma * (s - r))) *
           (1.0 - std::exp(-gamma * (t - s)));
}

double assumption_constant(const EdgeDynamics& dyn) {
    const double density_bound = std::max(dyn.lambda_on, dyn.lambda_off_base);
    const double p_star0 = limit_functions(dyn).p_star;
    return (p_star0 + 2.0) * density_bound * std::exp(density_bound * dyn.horizon);
}

double single_switch_bound(const EdgeDynamics& dyn, long n, double r, double s) {
    return assumption_constant(dyn) * dyn.regime.rho(static_cast<double>(n)) *
           std::abs(s - r);
}

double double_switch_bound(const EdgeDynamics& dyn, long n, double r, double t) {
    const double d = std::abs(t - r);
    return assumption_constant(dyn) * dyn.regime.rho(static_cast<double>(n)) * d * d;
}

}  // namespace dynerg
