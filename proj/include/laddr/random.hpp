#pragma once

#include <cstdint>

namespace laddr {

// splitmix64: used to derive independent substream seeds from one user seed.
inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t item) {
    uint64_t s = base;
    uint64_t a = splitmix64(s);
    s ^= stream * 0xD1342543DE82EF95ull;
    uint64_t b = splitmix64(s);
    s ^= item * 0xAF251AF3B0F025B5ull;
    uint64_t c = splitmix64(s);
    return a ^ (b << 1) ^ c;
}

// Uniform double in [0, 1) from a 64-bit generator. Implemented directly so
// results do not depend on the standard library's distribution internals.
template <class Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class Rng>
double uniform_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

} // namespace laddr
