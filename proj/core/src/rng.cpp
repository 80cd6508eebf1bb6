#include "awsalm/rng.hpp"

#include <cmath>

namespace awsalm {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a_hash(const void* data, std::size_t n, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t tag,
                std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= tag * 0x9e3779b97f4a7c15ull;
    h ^= splitmix64(s);
    s ^= a + 0xd1b54a32d192ed03ull;
    h ^= splitmix64(s);
    s ^= b + 0x8cb92ba72f3d8dd7ull;
    h ^= splitmix64(s);
    return Rng(h);
}

double Rng::normal() {
    // Polar method: rejection keeps the mapping exact without trig calls.
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

std::uint64_t Rng::poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    // Chunk large rates so exp(-lambda) never underflows.
    std::uint64_t count = 0;
    while (lambda > 500.0) {
        count += poisson(500.0);
        lambda -= 500.0;
    }
    const double limit = std::exp(-lambda);
    double prod = uniform();
    while (prod > limit) {
        ++count;
        prod *= uniform();
    }
    return count;
}

}  // namespace awsalm
