#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "helpers.hpp"

using namespace pactree;
using namespace testutil;

namespace {

std::string csv_without_wall(const std::vector<SimRecord>& recs) {
    std::ostringstream os;
    for (const SimRecord& r : recs) {
        std::string row = format_csv_row(r);
        os << row.substr(0, row.rfind(',')) << "\n";
    }
    return os.str();
}

} // namespace

TEST_CASE("pipeline inverse: every decoder recovers noiseless messages") {
    CodeSpec code = make_pac(64, 32);
    StackOptions so;
    FanoConfig fc;
    SclOptions lo;
    lo.list_size = 4;
    for (uint64_t t = 0; t < 100; ++t) {
        BitVec d = random_message(32, 2000 + t);
        auto llr = noiseless_llrs(encode(code, d));
        CHECK(extract_message(code, sc_decode(llr, code).v_hat) == d);
        CHECK(extract_message(code, scl_decode(llr, code, lo).v_hat) == d);
        CHECK(extract_message(code, stack_decode(llr, code, so).v_hat) == d);
        CHECK(extract_message(code, fano_decode(llr, code, fc).v_hat) == d);
    }
}

TEST_CASE("sc campaign reports the 2N-2 baseline on every frame") {
    CodeSpec code = make_pac(64, 32);
    Campaign c;
    c.decoder = DecoderKind::SC;
    c.min_frame_errors = 0;
    c.max_frames = 50;
    c.seed = 5;
    SimRecord r = run_point(code, c, 2.0);
    CHECK(r.frames == 50);
    CHECK(r.avg_time_steps == 2.0 * 64 - 2.0);
}

TEST_CASE("campaign determinism across worker counts") {
    CodeSpec code = make_pac(64, 32);
    Campaign c;
    c.decoder = DecoderKind::SCL;
    c.list_size = 4;
    c.min_frame_errors = 20;
    c.max_frames = 4000;
    c.seed = 11;
    c.threads = 1;
    auto a = run_point(code, c, 1.5);
    c.threads = 2;
    auto b = run_point(code, c, 1.5);
    CHECK(a.frames == b.frames);
    CHECK(a.frame_errors == b.frame_errors);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.avg_operations == b.avg_operations);
}

TEST_CASE("same seed twice gives identical rows") {
    CodeSpec code = make_pac(64, 32);
    Campaign c;
    c.decoder = DecoderKind::Fano;
    c.min_frame_errors = 5;
    c.max_frames = 2000;
    c.seed = 77;
    c.snr_start = 2.0;
    c.snr_stop = 2.5;
    c.snr_step = 0.5;
    auto r1 = run_campaign(code, c);
    auto r2 = run_campaign(code, c);
    CHECK(csv_without_wall(r1) == csv_without_wall(r2));  // wall clock is the only timing field
}

TEST_CASE("noiseless campaign with frame cap") {
    CodeSpec code = make_pac(32, 16);
    Campaign c;
    c.decoder = DecoderKind::SC;
    c.min_frame_errors = 0;
    c.max_frames = 10;
    c.seed = 3;
    SimRecord r = run_point(code, c, 100.0);
    CHECK(r.frames == 10);
    CHECK(r.fer == 0.0);
    CHECK(r.frame_errors == 0);
}

TEST_CASE("csv header and shape") {
    std::ostringstream os;
    emit_csv({}, os);
    CHECK(os.str() == std::string(kSimCsvHeader) + "\n");

    SimRecord r;
    r.ebn0_db = 1.5;
    r.frames = 10;
    std::ostringstream os2;
    emit_csv({r}, os2);
    CHECK(os2.str().find("1.5,10,0,0,0,0,0,0,") != std::string::npos);
}
