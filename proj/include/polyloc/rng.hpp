#pragma once

#include <cstdint>

#include "polyloc/lattice.hpp"

namespace polyloc {

// splitmix64 finalizer; the only mixing primitive used anywhere
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t zigzag64(long long v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

// Counter-based stream: the draw for a site is a pure function of
// (seed, domain, coordinates), independent of evaluation order.
inline std::uint64_t site_bits(std::uint64_t seed, std::uint64_t domain, const Site& s) {
    std::uint64_t k = mix64(seed ^ domain);
    for (int i = 0; i < s.dim(); ++i)
        k = mix64(k ^ (zigzag64(s[i]) + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1)));
    return mix64(k);
}

// scalar counter stream for non-lattice draws (calibration, synthetic trials)
inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t domain, std::uint64_t i) {
    return mix64(mix64(seed ^ domain) ^ mix64(i));
}

inline double bits_to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
}

inline constexpr std::uint64_t kDomainPotential = 0x706f74656e746961ULL;  // "potentia"
inline constexpr std::uint64_t kDomainBernoulli = 0x6265726e6f756c6cULL;  // "bernoull"

}  // namespace polyloc
