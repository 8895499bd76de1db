#pragma once

#include <cstdint>
#include <random>

namespace coneforge {

// Deterministic RNG used by every stochastic step. Draws raw 64-bit words
// from std::mt19937_64 (whose output sequence is fixed by the standard) and
// maps them to doubles by hand, so results are bit-identical across
// platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Derive an independent stream; used for per-chunk seeding so parallel
    // and sequential evaluation agree.
    Rng split(std::uint64_t stream) {
        std::uint64_t z = next_u64() + 0x9e3779b97f4a7c15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace coneforge
