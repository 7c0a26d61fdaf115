#pragma once

#include <cmath>
#include <cstdint>

namespace dynerg {

// splitmix64 step: advances the state and returns a mixed 64-bit value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ — small, fast, platform-deterministic generator. Every stream is
// derived from a (seed, counter...) key via splitmix64, so trajectories are
// reproducible independently of scheduling order.
class RngStream {
  public:
    RngStream() : RngStream(0) {}
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    // Counter-keyed stream: mixes each key word through splitmix64 in turn.
    static RngStream keyed(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0,
                           std::uint64_t k3 = 0) {
        std::uint64_t sm = seed;
        std::uint64_t h = splitmix64(sm);
        sm = h ^ (k1 * 0x9e3779b97f4a7c15ULL);
        h = splitmix64(sm);
        sm = h ^ (k2 * 0xbf58476d1ce4e5b9ULL);
        h = splitmix64(sm);
        sm = h ^ (k3 * 0x94d049bb133111ebULL);
        RngStream r;
        for (auto& w : r.s_) w = splitmix64(sm);
        return r;
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1), never exactly 0 or 1 — safe for log().
    double uniform01_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Exponential holding time with the given rate; strictly positive.
    double exponential(double rate) { return -std::log(uniform01_open()) / rate; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller (used only by tests / calibration).
    double normal() {
        double u1 = uniform01_open(), u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    std::uint64_t s_[4] = {};
};

}  // namespace dynerg
