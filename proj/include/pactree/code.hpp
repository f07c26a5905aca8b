#pragma once

#include <optional>

#include "common.hpp"
#include "construction.hpp"
#include "conv.hpp"
#include "crc.hpp"

namespace pactree {

// One PAC/polar code: profile + convolutional generator + optional CRC.
// message_length() is the payload K; when a CRC is attached the profile
// carries K + r positions and the CRC bits sit after the data.
struct CodeSpec {
    RateProfile profile;
    GeneratorPolynomial g;
    std::optional<CrcSpec> crc;

    int block_length() const { return profile.N; }
    int profiled_length() const { return profile.K; }
    int message_length() const {
        return profile.K - (crc ? crc->width : 0);
    }
    double rate() const { return static_cast<double>(message_length()) / profile.N; }
    bool is_polar() const { return g.memory == 0; }
};

// Message bits -> profiled vector v (zeros on frozen positions).
inline BitVec embed_message(const CodeSpec& code, const BitVec& data) {
    if (static_cast<int>(data.size()) != code.message_length())
        throw std::invalid_argument("embed_message: bad message length");
    BitVec payload = data;
    if (code.crc) {
        BitVec rem = crc_compute(data, *code.crc);
        payload.insert(payload.end(), rem.begin(), rem.end());
    }
    BitVec v(code.profile.N, 0);
    for (std::size_t k = 0; k < payload.size(); ++k) v[code.profile.info_set[k]] = payload[k];
    return v;
}

inline BitVec encode_from_v(const CodeSpec& code, const BitVec& v) {
    return polar_transform(conv_trans(v, code.g));
}

inline BitVec encode(const CodeSpec& code, const BitVec& data) {
    return encode_from_v(code, embed_message(code, data));
}

inline BitVec extract_payload(const CodeSpec& code, const BitVec& v_hat) {
    BitVec payload(code.profile.K);
    for (int k = 0; k < code.profile.K; ++k) payload[k] = v_hat[code.profile.info_set[k]];
    return payload;
}

inline BitVec extract_message(const CodeSpec& code, const BitVec& v_hat) {
    BitVec payload = extract_payload(code, v_hat);
    payload.resize(code.message_length());
    return payload;
}

} // namespace pactree
