#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pactree/channel.hpp"

using namespace pactree;

TEST_CASE("bpsk mapping") {
    CHECK(bpsk_modulate(BitVec{0}) == std::vector<double>{1.0});
    CHECK(bpsk_modulate(BitVec{1}) == std::vector<double>{-1.0});
    CHECK(bpsk_modulate(BitVec{0, 1, 0}) == std::vector<double>{1.0, -1.0, 1.0});
}

TEST_CASE("sigma from Eb/N0") {
    auto p = ChannelParams::make(0.0, 0.5, 1);
    CHECK_THAT(p.sigma, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("transmit determinism and statistics") {
    auto p = ChannelParams::make(2.0, 0.5, 42);
    std::vector<double> s(64, 1.0);
    auto y1 = transmit(s, p, 7);
    auto y2 = transmit(s, p, 7);
    CHECK(y1 == y2);
    auto y3 = transmit(s, p, 8);
    CHECK(y1 != y3);

    // empirical variance within 1%
    double sum = 0.0, sum2 = 0.0;
    const uint64_t frames = 1000, per = 1000;
    std::vector<double> zeros(per, 0.0);
    for (uint64_t f = 0; f < frames; ++f) {
        auto y = transmit(zeros, p, f);
        for (double v : y) {
            sum += v;
            sum2 += v * v;
        }
    }
    const double n = static_cast<double>(frames * per);
    double var = sum2 / n - (sum / n) * (sum / n);
    CHECK_THAT(var, Catch::Matchers::WithinRel(p.sigma * p.sigma, 0.01));
}

TEST_CASE("channel llrs") {
    auto p = ChannelParams::make(0.0, 0.5, 1);  // sigma = 1
    auto l = channel_llrs(std::vector<double>{0.0, 1.0, -2.0}, p);
    CHECK(l[0] == 0.0);
    CHECK_THAT(l[1], Catch::Matchers::WithinAbs(2.0, 1e-12));
    CHECK_THAT(l[2], Catch::Matchers::WithinAbs(-4.0, 1e-12));
}
