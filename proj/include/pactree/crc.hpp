#pragma once

#include "common.hpp"

namespace pactree {

// CRC with all-zero init/final. The hex literal names the low-order
// coefficients with an implicit x^r term: 0xA6 with r=8 gives
// g(x) = x^8 + x^7 + x^5 + x^2 + x.
struct CrcSpec {
    int width = 0;
    BitVec poly;  // r+1 coefficients, degree-first: poly[0] is x^r (always 1)

    static CrcSpec from_hex(uint64_t low_bits, int width) {
        CrcSpec s;
        s.width = width;
        s.poly.assign(width + 1, 0);
        s.poly[0] = 1;
        for (int b = 0; b < width; ++b)
            s.poly[width - b] = static_cast<uint8_t>((low_bits >> b) & 1);
        return s;
    }

    static CrcSpec from_binary_string(const std::string& bits) {
        CrcSpec s;
        s.poly.reserve(bits.size());
        for (char c : bits) {
            if (c != '0' && c != '1') throw std::invalid_argument("bad CRC polynomial string");
            s.poly.push_back(static_cast<uint8_t>(c - '0'));
        }
        if (s.poly.empty() || s.poly[0] != 1)
            throw std::invalid_argument("CRC polynomial must start with 1");
        s.width = static_cast<int>(s.poly.size()) - 1;
        return s;
    }
};

// Remainder of d(x) * x^r mod g(x); streaming long division, first message
// bit is the highest power.
inline BitVec crc_compute(const BitVec& data, const CrcSpec& spec) {
    const int r = spec.width;
    BitVec reg(r, 0);
    auto shift_in = [&](uint8_t bit) {
        uint8_t out = reg.empty() ? bit : reg[0];
        for (int k = 0; k + 1 < r; ++k) reg[k] = reg[k + 1];
        if (r > 0) reg[r - 1] = bit;
        if (out) {
            for (int k = 0; k < r; ++k) reg[k] ^= spec.poly[k + 1];
        }
    };
    for (uint8_t b : data) shift_in(b);
    for (int k = 0; k < r; ++k) shift_in(0);
    return reg;
}

inline bool crc_check(const BitVec& data_with_crc, const CrcSpec& spec) {
    const int r = spec.width;
    if (static_cast<int>(data_with_crc.size()) < r)
        throw std::invalid_argument("crc_check: input shorter than CRC width");
    BitVec data(data_with_crc.begin(), data_with_crc.end() - r);
    BitVec rem = crc_compute(data, spec);
    for (int k = 0; k < r; ++k)
        if (rem[k] != data_with_crc[data.size() + k]) return false;
    return true;
}

} // namespace pactree
