#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pactree {

using BitVec = std::vector<uint8_t>;

inline bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

inline int log2_exact(std::size_t x) {
    if (!is_power_of_two(x)) throw std::invalid_argument("length must be a power of two");
    int n = 0;
    while ((std::size_t{1} << n) < x) ++n;
    return n;
}

inline int popcount_u32(uint32_t x) { return __builtin_popcount(x); }

// x = u * P^(x)n over GF(2), P = [[1,0],[1,1]]. Involution: applying twice gives u back.
inline BitVec polar_transform(const BitVec& u) {
    const std::size_t N = u.size();
    if (!is_power_of_two(N)) throw std::invalid_argument("polar_transform: length must be a power of two");
    BitVec x = u;
    for (std::size_t h = 1; h < N; h <<= 1)
        for (std::size_t b = 0; b < N; b += 2 * h)
            for (std::size_t j = b; j < b + h; ++j)
                x[j] ^= x[j + h];
    return x;
}

inline int hamming_weight(const BitVec& v) {
    int w = 0;
    for (uint8_t b : v) w += (b != 0);
    return w;
}

// deterministic 64-bit mixer, used to derive independent per-frame streams
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace pactree
