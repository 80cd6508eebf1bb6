#pragma once

#include <cstdint>
#include <random>

namespace awsalm {

// Deterministic RNG with explicit value mappings.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the
// standard; the uniform/normal/Poisson mappings are implemented here because
// the std::<random> distributions are implementation-defined. Reproducibility
// contract: same seed -> same values, on any conforming compiler.
//
// Independent streams are derived by hashing (seed, tag, index...) so that
// per-frame / per-droplet work can run in any order or in parallel without
// sharing generator state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Sub-stream derivation. Tags keep streams for different purposes
    // (rendering noise, switching, seeding, ...) disjoint.
    static Rng stream(std::uint64_t seed, std::uint64_t tag,
                      std::uint64_t a = 0, std::uint64_t b = 0);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via the polar (Marsaglia) method, no pair caching.
    double normal();

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    // Poisson by Knuth's product method; adequate for the rates used here
    // (per-step replenishment and one-off seeding counts).
    std::uint64_t poisson(double lambda);

private:
    std::mt19937_64 engine_;
};

// SplitMix64 step; used for stream derivation and config hashing.
std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a over a byte string; stable across platforms.
std::uint64_t fnv1a_hash(const void* data, std::size_t n,
                         std::uint64_t h = 0xcbf29ce484222325ull);

}  // namespace awsalm
