#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sddpg {

// xoshiro256++ with splitmix64 seeding. Self-contained so that streams are
// bit-identical across compilers and standard libraries; the full generator
// state is four words, which keeps checkpointing trivial.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) { return next() % n; }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; stateless beyond the word stream.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::array<std::uint64_t, 4> save_state() const { return state_; }
    void restore_state(const std::array<std::uint64_t, 4>& s) { state_ = s; }

    // Deterministic stream derivation: hash of (seed, tags...). Used to give
    // every batch item / episode its own independent stream so parallel and
    // serial execution draw identical randomness.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                             std::uint64_t d = 0) {
        std::uint64_t x = a;
        x = splitmix64(x) ^ (b + 0x9e3779b97f4a7c15ULL);
        x = splitmix64(x) ^ (c + 0xbf58476d1ce4e5b9ULL);
        x = splitmix64(x) ^ (d + 0x94d049bb133111ebULL);
        return splitmix64(x);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace sddpg
