#pragma once

#include <cmath>

#include "common.hpp"
#include "construction.hpp"

namespace pactree {

struct ChannelParams {
    double ebn0_db = 0.0;
    double rate = 0.5;
    double sigma = 1.0;
    uint64_t seed = 0;

    static ChannelParams make(double ebn0_db, double rate, uint64_t seed) {
        ChannelParams p;
        p.ebn0_db = ebn0_db;
        p.rate = rate;
        p.sigma = noise_sigma(ebn0_db, rate);
        p.seed = seed;
        return p;
    }
};

// Counter-seeded Gaussian stream: (seed, frame) fully determines the draw
// sequence, independent of platform stdlib. Box-Muller over splitmix64.
class GaussianStream {
public:
    GaussianStream(uint64_t seed, uint64_t stream_id)
        : state_(splitmix64(seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0x9e3779b97f4a7c15ULL))) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    uint64_t next_u64() {
        state_ = splitmix64(state_);
        return state_;
    }

private:
    double next_unit() {
        // (0, 1]: never zero so log() stays finite
        return (static_cast<double>(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    }
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline std::vector<double> bpsk_modulate(const BitVec& x) {
    std::vector<double> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = 1.0 - 2.0 * x[i];
    return s;
}

inline std::vector<double> transmit(const std::vector<double>& s, const ChannelParams& params,
                                    uint64_t frame_index) {
    GaussianStream g(params.seed, frame_index);
    std::vector<double> y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) y[i] = s[i] + params.sigma * g.next();
    return y;
}

inline std::vector<double> channel_llrs(const std::vector<double>& y, const ChannelParams& params) {
    if (params.sigma <= 0.0) throw std::invalid_argument("channel_llrs: sigma must be positive");
    const double scale = 2.0 / (params.sigma * params.sigma);
    std::vector<double> llr(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) llr[i] = scale * y[i];
    return llr;
}

} // namespace pactree
