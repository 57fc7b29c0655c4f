// rng.hpp: Deterministic random streams. All randomness in the library flows
// through this engine so that identical seeds reproduce identical runs, and
// parallel trials can derive independent sub-streams via split().

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace mlea {

// splitmix64 step function (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Splittable generator. Child streams are derived as
// splitmix64(parent_seed ^ golden * (index + 1)), which keeps sub-streams
// reproducible regardless of how much the parent has been consumed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform on {0, 1, ..., n-1}. Modulo bias is below 2^-32 for n < 2^32.
    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    // Standard normal via Box-Muller; second value cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    // Independent stream number `index` under this generator's seed.
    Rng split(std::uint64_t index) const {
        std::uint64_t s = state_ ^ (0x9E3779B97F4A7C15ull * (index + 1));
        return Rng(splitmix64(s));
    }

  private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace mlea
