#pragma once

#include <bit>
#include <cctype>

#include "common.hpp"

namespace pactree {

// Rate-1 convolutional pre-transform. State is a bit word with the newest
// input at bit 0; taps are g0..gm with g0 = 1.
struct GeneratorPolynomial {
    BitVec coeffs;      // g0..gm
    int memory = 0;     // m
    uint64_t taps = 0;  // bit j set iff g_j = 1

    int constraint_length() const { return memory + 1; }
};

using ConvState = uint64_t;

inline GeneratorPolynomial make_generator(const BitVec& coeffs) {
    if (coeffs.empty() || coeffs.front() != 1)
        throw std::invalid_argument("generator polynomial needs g0 = 1");
    if (coeffs.size() > 64) throw std::invalid_argument("generator polynomial too long");
    GeneratorPolynomial g;
    g.coeffs = coeffs;
    g.memory = static_cast<int>(coeffs.size()) - 1;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        if (coeffs[j]) g.taps |= (uint64_t{1} << j);
    return g;
}

// "133" -> [1,0,1,1,0,1,1]: octal digits, MSB-first binary expansion with
// leading zeros stripped, so the impulse response equals the tap listing.
inline GeneratorPolynomial parse_octal(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty generator polynomial");
    std::string t = text;
    if (t.size() > 2 && t[0] == '0' && (t[1] == 'o' || t[1] == 'O')) t = t.substr(2);
    BitVec bits;
    for (char c : t) {
        if (c < '0' || c > '7') throw std::invalid_argument("non-octal digit in generator polynomial");
        int d = c - '0';
        bits.push_back(static_cast<uint8_t>((d >> 2) & 1));
        bits.push_back(static_cast<uint8_t>((d >> 1) & 1));
        bits.push_back(static_cast<uint8_t>(d & 1));
    }
    std::size_t first = 0;
    while (first + 1 < bits.size() && bits[first] == 0) ++first;
    bits.erase(bits.begin(), bits.begin() + first);
    if (bits.front() != 1) throw std::invalid_argument("generator polynomial is zero");
    return make_generator(bits);
}

// One encoder step: u = v*g0 + sum_j g_j*state[j-1], state shifts v in at the front.
inline uint8_t conv_1b_trans(uint8_t v, ConvState& state, const GeneratorPolynomial& g) {
    uint64_t w = (state << 1) | (v & 1u);
    uint8_t u = static_cast<uint8_t>(std::popcount(w & g.taps) & 1);
    state = (g.memory > 0) ? (w & ((uint64_t{1} << g.memory) - 1)) : 0;
    return u;
}

inline BitVec conv_trans(const BitVec& v, const GeneratorPolynomial& g) {
    BitVec u(v.size());
    ConvState state = 0;
    for (std::size_t i = 0; i < v.size(); ++i) u[i] = conv_1b_trans(v[i], state, g);
    return u;
}

// Upper-triangular Toeplitz matrix equivalent of conv_trans; row i carries g
// starting at column i.
inline std::vector<BitVec> toeplitz_matrix(const GeneratorPolynomial& g, std::size_t N) {
    std::vector<BitVec> G(N, BitVec(N, 0));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < g.coeffs.size() && i + j < N; ++j)
            G[i][i + j] = g.coeffs[j];
    return G;
}

} // namespace pactree
