#include <doctest.h>

#include <cmath>

#include "dynerg/edge_process.hpp"

using namespace dynerg;

namespace {

EdgeDynamics symmetric_dense() {
    return EdgeDynamics(1.0, 1.0, ScalingRegime::constant_one(), 1.0);
}

}  // namespace

TEST_CASE("dynamics validation") {
    CHECK_THROWS_AS(EdgeDynamics(0.0, 1.0, ScalingRegime::constant_one(), 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(EdgeDynamics(1.0, -1.0, ScalingRegime::constant_one(), 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(EdgeDynamics(1.0, 1.0, ScalingRegime::constant_one(), 0.0),
                    std::invalid_argument);
}

TEST_CASE("stationary probability") {
    CHECK(stationary_probability(symmetric_dense(), 50) == doctest::Approx(0.5));
    const EdgeDynamics skew(10.0, 1.0, ScalingRegime::constant_one(), 1.0);
    CHECK(stationary_probability(skew, 50) == doctest::Approx(1.0 / 11.0));
    // Sparse scaling: lambda_off is damped by rho = N^{-1/2}.
    const EdgeDynamics sparse(1.0, 1.0, ScalingRegime::power_law("1/2"), 1.0);
    CHECK(sparse.lambda_off(100) == doctest::Approx(0.1));
    CHECK(stationary_probability(sparse, 100) == doctest::Approx(1.0 / 11.0));
    CHECK(sparse.relax_rate(100) == doctest::Approx(1.1));
}

TEST_CASE("edge covariance kernel") {
    const EdgeDynamics dyn = symmetric_dense();
    const double p = stationary_probability(dyn, 10);
    CHECK(edge_covariance(dyn, 10, 0.4, 0.4) == doctest::Approx(p * (1 - p)));
    CHECK(edge_covariance(dyn, 10, 0.2, 0.7) == doctest::Approx(edge_covariance(dyn, 10, 0.7, 0.2)));
    // Exponential decay with rate lambda_on + lambda_off.
    const double ratio = edge_covariance(dyn, 10, 0.0, 0.6) / edge_covariance(dyn, 10, 0.0, 0.3);
    CHECK(ratio == doctest::Approx(std::exp(-2.0 * 0.3)));
}

TEST_CASE("limit functions in both regimes") {
    const EdgeDynamics sparse(2.0, 3.0, ScalingRegime::power_law("1/2"), 1.0);
    const LimitFunctions ls = limit_functions(sparse);
    CHECK(ls.p_star == doctest::Approx(1.5));       // lambda_off_base / lambda_on
    CHECK(ls.decay_rate == doctest::Approx(2.0));   // lambda_on only
    CHECK(ls.kappa(0.0, 0.5) == doctest::Approx(1.5 * std::exp(-1.0)));

    const EdgeDynamics dense(2.0, 3.0, ScalingRegime::constant_one(), 1.0);
    const LimitFunctions ld = limit_functions(dense);
    CHECK(ld.p_star == doctest::Approx(0.6));
    CHECK(ld.decay_rate == doctest::Approx(5.0));
    CHECK(ld.kappa(0.3, 0.3) == doctest::Approx(0.24));

    // kappa_N / rho_N approaches the limit kernel as N grows.
    const double n_huge = 1e10;
    const double scaled = edge_covariance(sparse, static_cast<long>(n_huge), 0.1, 0.4) /
                          sparse.regime.rho(n_huge);
    CHECK(scaled == doctest::Approx(ls.kappa(0.1, 0.4)).epsilon(1e-4));
}

TEST_CASE("trajectory evaluation is right-continuous") {
    Trajectory traj;
    traj.initial_state = 1;
    traj.flip_times = {0.5, 1.5};
    CHECK(traj.state_at(0.0) == 1);
    CHECK(traj.state_at(0.499) == 1);
    CHECK(traj.state_at(0.5) == 0);   // flips take effect at the flip time
    CHECK(traj.state_at(1.0) == 0);
    CHECK(traj.state_at(1.5) == 1);
    CHECK(traj.state_at(2.0) == 1);
    CHECK(traj.flips_within(0.0, 0.5) == 1);
    CHECK(traj.flips_within(0.5, 1.5) == 1);
    CHECK(traj.flips_within(0.0, 2.0) == 2);
    CHECK(traj.flips_within(0.6, 1.4) == 0);
}

TEST_CASE("exact switch probabilities") {
    const EdgeDynamics dyn = symmetric_dense();  // p = 1/2, relax rate 2
    const double expected_single = 0.5 * (1.0 - std::exp(-1.0));
    CHECK(switch_probability(dyn, 100, 0.0, 0.5) == doctest::Approx(expected_single));
    const double expected_double = 0.25 * (1.0 - std::exp(-1.0)) * (1.0 - std::exp(-1.0));
    CHECK(double_switch_probability(dyn, 100, 0.0, 0.5, 1.0) == doctest::Approx(expected_double));
    // Stationarity: only gaps matter.
    CHECK(switch_probability(dyn, 100, 0.1, 0.6) ==
          doctest::Approx(switch_probability(dyn, 100, 0.3, 0.8)));
    CHECK_THROWS_AS(double_switch_probability(dyn, 100, 0.5, 0.2, 1.0), std::invalid_argument);
}

TEST_CASE("sampled trajectories reproduce the analytic law") {
    const EdgeDynamics dyn(1.0, 1.0, ScalingRegime::power_law("1/2"), 1.0);
    const long n = 25;  // rho = 0.2, p = 1/6
    const double p = stationary_probability(dyn, n);
    const long samples = 200000;
    RngStream rng = RngStream::keyed(99, 1, 2, 3);
    double initial_sum = 0, final_sum = 0, flips_sum = 0, switch_sum = 0, double_sum = 0;
    for (long k = 0; k < samples; ++k) {
        const Trajectory traj = sample_trajectory(dyn, n, rng);
        initial_sum += traj.initial_state;
        final_sum += traj.state_at(1.0);
        flips_sum += static_cast<double>(traj.flip_times.size());
        switch_sum += (traj.state_at(0.2) != traj.state_at(0.7)) ? 1.0 : 0.0;
        double_sum +=
            (traj.state_at(0.1) != traj.state_at(0.5) && traj.state_at(0.5) != traj.state_at(0.9))
                ? 1.0
                : 0.0;
    }
    const double inv = 1.0 / static_cast<double>(samples);
    const double se_p = std::sqrt(p * (1 - p) * inv);
    CHECK(std::abs(initial_sum * inv - p) < 5 * se_p);
    CHECK(std::abs(final_sum * inv - p) < 5 * se_p);  // stationarity at the horizon
    // Expected flip count: integrate the exit rate of the stationary state.
    const double flip_rate = p * dyn.lambda_on + (1 - p) * dyn.lambda_off(n);
    CHECK(flips_sum * inv == doctest::Approx(flip_rate).epsilon(0.02));
    const double ps = switch_probability(dyn, n, 0.2, 0.7);
    CHECK(std::abs(switch_sum * inv - ps) < 5 * std::sqrt(ps * (1 - ps) * inv));
    const double pd = double_switch_probability(dyn, n, 0.1, 0.5, 0.9);
    CHECK(std::abs(double_sum * inv - pd) < 5 * std::sqrt(pd * (1 - pd) * inv));
}

TEST_CASE("switch-probability bounds hold with the documented constant") {
    const EdgeDynamics dyn(1.0, 1.0, ScalingRegime::power_law("1/2"), 1.0);
    // p_star(0) = 1 and P = 1 here, so the constant is 3e.
    CHECK(assumption_constant(dyn) == doctest::Approx(3.0 * std::exp(1.0)));
    for (long n : {10L, 1000L}) {
        for (int a = 0; a < 6; ++a) {
            for (int b = a + 1; b < 6; ++b) {
                const double r = a / 5.0, s = b / 5.0;
                CHECK(switch_probability(dyn, n, r, s) <= single_switch_bound(dyn, n, r, s));
                CHECK(double_switch_probability(dyn, n, r, (r + s) / 2, s) <=
                      double_switch_bound(dyn, n, r, s));
            }
        }
    }
}
