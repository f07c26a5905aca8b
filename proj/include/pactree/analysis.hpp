#pragma once

#include <map>
#include <set>
#include <thread>

#include "channel.hpp"
#include "code.hpp"
#include "decoder_sc.hpp"
#include "decoder_scl.hpp"

namespace pactree {

struct WeightSpectrum {
    std::map<int, uint64_t> counts;  // weight -> multiplicity, zero word excluded
    int d_min() const { return counts.empty() ? 0 : counts.begin()->first; }
};

// All 2^K codewords; the exact reference for the SCL search at desk scale.
inline WeightSpectrum exhaustive_spectrum(const CodeSpec& code) {
    const int K = code.profile.K;
    if (K > 24) throw std::invalid_argument("exhaustive_spectrum: K > 24 is not enumerable");
    if (code.crc) throw std::invalid_argument("exhaustive_spectrum: enumerate without CRC");
    WeightSpectrum ws;
    BitVec v(code.profile.N, 0);
    for (uint64_t msg = 1; msg < (uint64_t{1} << K); ++msg) {
        for (int k = 0; k < K; ++k) v[code.profile.info_set[k]] = (msg >> k) & 1;
        int w = hamming_weight(encode_from_v(code, v));
        ws.counts[w] += 1;
    }
    return ws;
}

// Information positions whose polar rows have the minimum row weight; these
// seed the one-bit-flip list searches.
inline std::vector<int> min_row_weight_positions(const RateProfile& prof) {
    int wmin = 1 << 30;
    for (int i : prof.info_set) wmin = std::min(wmin, row_weight_log2(i));
    std::vector<int> pos;
    for (int i : prof.info_set)
        if (row_weight_log2(i) == wmin) pos.push_back(i);
    return pos;
}

// SCL-based spectrum search: transmit the all-zero codeword noiselessly,
// flip one received position per run, re-encode every surviving candidate
// and tally distinct nonzero codewords. Lower bounds that stabilize with L;
// reported up to twice the minimum distance found.
inline WeightSpectrum spectrum_scl(const CodeSpec& code, int list_size, int threads = 1) {
    const int N = code.profile.N;
    const std::vector<int> flips = min_row_weight_positions(code.profile);

    std::vector<std::set<BitVec>> found(flips.size());
    auto run_one = [&](std::size_t fi) {
        std::vector<double> llr(N, 1.0);
        llr[flips[fi]] = -1.0;
        SclOptions opts;
        opts.list_size = list_size;
        opts.keep_candidates = true;
        SclResult res = scl_decode(llr, code, opts);
        for (const BitVec& v : res.candidates) {
            BitVec x = encode_from_v(code, v);
            if (hamming_weight(x) == 0) continue;
            found[fi].insert(std::move(x));
        }
    };
    if (threads <= 1) {
        for (std::size_t fi = 0; fi < flips.size(); ++fi) run_one(fi);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t fi = static_cast<std::size_t>(t); fi < flips.size();
                     fi += static_cast<std::size_t>(threads))
                    run_one(fi);
            });
        for (auto& th : pool) th.join();
    }

    std::set<BitVec> all;  // global dedup across flip positions
    for (auto& s : found) all.merge(s);
    WeightSpectrum ws;
    for (const BitVec& x : all) ws.counts[hamming_weight(x)] += 1;
    if (!ws.counts.empty()) {
        const int cap = 2 * ws.d_min();
        for (auto it = ws.counts.begin(); it != ws.counts.end();)
            it = (it->first > cap) ? ws.counts.erase(it) : std::next(it);
    }
    return ws;
}

// Truncated union bound on ML block error probability from the leading
// spectrum term.
inline double union_bound_fer(const WeightSpectrum& ws, double rate, double ebn0_db) {
    if (ws.counts.empty()) return 0.0;
    const int d = ws.d_min();
    const double a = static_cast<double>(ws.counts.begin()->second);
    return a * q_function(std::sqrt(2.0 * d * rate * db_to_linear(ebn0_db)));
}

struct GenieHistogram {
    std::map<int, uint64_t> counts;  // corrections per failed frame
    uint64_t failures = 0;
    uint64_t frames = 0;

    double fraction_at_most(int b) const {
        if (failures == 0) return 0.0;
        uint64_t s = 0;
        for (auto& [k, c] : counts)
            if (k <= b) s += c;
        return static_cast<double>(s) / static_cast<double>(failures);
    }
};

// Distribution of channel-induced bit errors per failed frame, collected
// with genie-aided SC until target_failures failures are seen.
inline GenieHistogram genie_error_histogram(const CodeSpec& code, double ebn0_db,
                                            uint64_t target_failures, uint64_t seed,
                                            uint64_t max_frames = 0) {
    const int K = code.message_length();
    ChannelParams params = ChannelParams::make(ebn0_db, code.rate(), seed);
    GenieHistogram h;
    const uint64_t cap = max_frames ? max_frames : target_failures * 1000000ULL;
    for (uint64_t frame = 0; h.failures < target_failures && frame < cap; ++frame) {
        GaussianStream msg_rng(seed ^ 0x5851f42d4c957f2dULL, frame);
        BitVec d(K);
        for (int k = 0; k < K; ++k) d[k] = static_cast<uint8_t>(msg_rng.next_u64() & 1);
        BitVec v = embed_message(code, d);
        BitVec x = encode_from_v(code, v);
        auto y = transmit(bpsk_modulate(x), params, frame);
        auto llr = channel_llrs(y, params);
        GenieScResult g = genie_sc_decode(llr, code, v);
        ++h.frames;
        if (!g.corrections.empty()) {
            ++h.failures;
            h.counts[static_cast<int>(g.corrections.size())] += 1;
        }
    }
    return h;
}

} // namespace pactree
