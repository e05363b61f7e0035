#pragma once

#include <cstdint>
#include <random>

namespace samstream {

// Seeded random source with portable draw semantics: the mt19937_64 engine is
// pinned by the standard, and the uniform/normal transforms are implemented
// here instead of relying on the implementation-defined std distributions, so
// identical seeds give identical streams on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller (one spare cached).
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace samstream
