#pragma once

#include "pactree/pactree.hpp"

namespace testutil {

using namespace pactree;

inline CodeSpec make_pac(int N, int K, ProfileKind kind = ProfileKind::RM,
                         const std::string& g_octal = "133", double dsnr = 3.5,
                         double bias_dsnr = 4.0) {
    CodeSpec c;
    c.profile = build_profile(N, K, kind, dsnr, bias_dsnr);
    c.g = parse_octal(g_octal);
    return c;
}

inline CodeSpec make_polar(int N, int K, ProfileKind kind = ProfileKind::RM, double dsnr = 3.5,
                           double bias_dsnr = 4.0) {
    CodeSpec c;
    c.profile = build_profile(N, K, kind, dsnr, bias_dsnr);
    c.g = make_generator(BitVec{1});
    return c;
}

inline BitVec random_message(int K, uint64_t seed) {
    BitVec d(K);
    uint64_t s = seed;
    for (auto& b : d) {
        s = splitmix64(s);
        b = static_cast<uint8_t>(s & 1);
    }
    return d;
}

struct Frame {
    BitVec d, v, x;
    std::vector<double> y, llr;
};

inline Frame make_frame(const CodeSpec& code, double ebn0_db, uint64_t seed, uint64_t index) {
    Frame f;
    f.d = random_message(code.message_length(), splitmix64(seed) ^ index);
    f.v = embed_message(code, f.d);
    f.x = encode_from_v(code, f.v);
    auto params = ChannelParams::make(ebn0_db, code.rate(), seed);
    f.y = transmit(bpsk_modulate(f.x), params, index);
    f.llr = channel_llrs(f.y, params);
    return f;
}

inline std::vector<double> noiseless_llrs(const BitVec& x, double mag = 4.0) {
    std::vector<double> l(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) l[i] = x[i] ? -mag : mag;
    return l;
}

} // namespace testutil
