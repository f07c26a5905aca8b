#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"

using namespace pactree;
using namespace testutil;

TEST_CASE("fano noiseless: no backtracking, metric exactly zero") {
    for (auto kind : {ProfileKind::RM, ProfileKind::DEGA}) {
        CodeSpec code = make_pac(128, 64, kind);
        for (uint64_t t = 0; t < 20; ++t) {
            BitVec d = random_message(64, 900 + t);
            auto llr = noiseless_llrs(encode(code, d));
            FanoResult r = fano_decode(llr, code);
            CHECK(r.success);
            CHECK(extract_message(code, r.v_hat) == d);
            CHECK(r.backward_moves == 0);
            CHECK(r.diversions == 0);
            CHECK(r.metric == 0.0);
            CHECK(r.bias_scale == 1.0);
        }
    }
}

TEST_CASE("fano matches the transmitted message on noisy frames most of the time") {
    CodeSpec code = make_pac(128, 64);
    FanoConfig cfg = FanoConfig::unconstrained();
    int errs = 0, aborts = 0;
    for (uint64_t t = 0; t < 200; ++t) {
        Frame f = make_frame(code, 3.0, 777, t);
        FanoResult r = fano_decode(f.llr, code, cfg);
        if (!r.success) ++aborts;
        if (extract_message(code, r.v_hat) != f.d) ++errs;
    }
    CHECK(errs <= 4);  // FER at 3 dB is well under 2e-2
    CHECK(aborts <= errs);
}

TEST_CASE("fano thresholds stay on the delta grid") {
    CodeSpec code = make_pac(64, 32);
    std::vector<double> trace;
    FanoConfig cfg;
    cfg.delta = 2.0;
    cfg.threshold_trace = &trace;
    for (uint64_t t = 0; t < 100; ++t) {
        Frame f = make_frame(code, 1.0, 2024, t);
        trace.clear();
        fano_decode(f.llr, code, cfg);
        for (double T : trace) CHECK(T == std::round(T / cfg.delta) * cfg.delta);
    }
}

TEST_CASE("fano rewinds always land on fresh-decode LLRs") {
    CodeSpec code = make_pac(64, 32);
    FanoConfig cfg;
    cfg.paranoid_rewind_check = true;
    uint64_t moves = 0;
    for (uint64_t t = 0; t < 150; ++t) {
        Frame f = make_frame(code, 1.0, 31337, t);
        FanoResult r = fano_decode(f.llr, code, cfg);
        CHECK(r.rewind_check_failures == 0);
        moves += r.backward_moves;
    }
    CHECK(moves > 0);  // the corpus actually exercised backtracking
}

TEST_CASE("fano diversion budget is respected") {
    CodeSpec code = make_pac(64, 32);
    FanoConfig cfg;
    cfg.max_diversions = 2;
    for (uint64_t t = 0; t < 300; ++t) {
        Frame f = make_frame(code, 1.0, 5555, t);
        FanoResult r = fano_decode(f.llr, code, cfg);
        int total = 0;
        for (uint8_t b : r.diverted) total += b;
        CHECK(total <= 2);
    }
}

TEST_CASE("fano diversion flags sit on critical-set positions when restricted") {
    CodeSpec code = make_pac(64, 32);
    FanoConfig cfg;  // critical set on by default
    for (uint64_t t = 0; t < 300; ++t) {
        Frame f = make_frame(code, 1.5, 8080, t);
        FanoResult r = fano_decode(f.llr, code, cfg);
        for (int k = 0; k < code.profile.K; ++k)
            if (r.diverted[k]) CHECK(code.profile.critical[code.profile.info_set[k]] == 1);
    }
}

TEST_CASE("genie-isolated single error is fixed by exactly one diversion") {
    CodeSpec code = make_pac(128, 64);
    FanoConfig cfg;
    int examined = 0, clean = 0;
    for (uint64_t t = 0; t < 4000 && examined < 25; ++t) {
        Frame f = make_frame(code, 3.0, 12121, t);
        GenieScResult g = genie_sc_decode(f.llr, code, f.v);
        if (g.corrections.size() != 1) continue;
        const int bit = g.corrections[0];
        if (!code.profile.critical[bit]) continue;
        ++examined;
        FanoResult r = fano_decode(f.llr, code, cfg);
        if (!r.success || extract_message(code, r.v_hat) != f.d) continue;
        int total = 0;
        for (uint8_t b : r.diverted) total += b;
        if (total == 1 && r.diverted[code.profile.info_rank(bit)] == 1) ++clean;
    }
    CHECK(examined == 25);
    CHECK(clean >= 23);  // the isolated flip is recovered via that single diversion
}

TEST_CASE("explored-branch refresh only trims work") {
    CodeSpec code = make_pac(64, 32);
    FanoConfig on, off;
    on.use_explored_refresh = true;
    off.use_explored_refresh = false;
    uint64_t ts_on = 0, ts_off = 0;
    int agree = 0, both_ok = 0, n = 400;
    for (uint64_t t = 0; t < static_cast<uint64_t>(n); ++t) {
        Frame f = make_frame(code, 1.5, 606, t);
        FanoResult a = fano_decode(f.llr, code, on);
        FanoResult b = fano_decode(f.llr, code, off);
        ts_on += a.time_steps;
        ts_off += b.time_steps;
        if (a.v_hat == b.v_hat) ++agree;
        if (a.success && b.success) ++both_ok;
    }
    CHECK(ts_on <= ts_off);
    CHECK(agree >= n - n / 50);  // outputs match except on rare deep-search frames
    CHECK(both_ok > n / 2);
}

TEST_CASE("bias adaptation fires on noisy frames and rescales by delta_q steps") {
    CodeSpec code = make_pac(128, 64);
    FanoConfig cfg;
    cfg.delta_q = 2;
    int fired = 0;
    for (uint64_t t = 0; t < 200; ++t) {
        Frame f = make_frame(code, 0.5, 90210, t);
        FanoResult r = fano_decode(f.llr, code, cfg);
        if (r.bias_scale > 1.0) {
            ++fired;
            CHECK(r.bias_scale == std::ceil(r.bias_scale / cfg.delta_q) * cfg.delta_q);
        }
    }
    CHECK(fired > 0);
}

TEST_CASE("constrained search is cheaper than unconstrained on average") {
    CodeSpec code = make_pac(128, 64);
    FanoConfig all_on;
    FanoConfig all_off = FanoConfig::unconstrained();
    uint64_t ts_on = 0, ts_off = 0;
    for (uint64_t t = 0; t < 600; ++t) {
        Frame f = make_frame(code, 2.0, 4711, t);
        ts_on += fano_decode(f.llr, code, all_on).time_steps;
        ts_off += fano_decode(f.llr, code, all_off).time_steps;
    }
    CHECK(ts_on < ts_off);
}

TEST_CASE("fano equals stack ranking on sibling branches") {
    // both decode the same easy frames to the same message
    CodeSpec code = make_pac(32, 16);
    StackOptions so;
    so.depth = 64;
    for (uint64_t t = 0; t < 60; ++t) {
        Frame f = make_frame(code, 4.0, 99, t);
        FanoResult a = fano_decode(f.llr, code);
        StackResult b = stack_decode(f.llr, code, so);
        if (a.success && b.success) CHECK(a.v_hat == b.v_hat);
    }
}
