#pragma once

#include <chrono>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "analysis.hpp"
#include "channel.hpp"
#include "code.hpp"
#include "decoder_fano.hpp"
#include "decoder_sc.hpp"
#include "decoder_scl.hpp"
#include "decoder_stack.hpp"

namespace pactree {

enum class DecoderKind { SC, SCL, Stack, Fano };

inline std::string decoder_name(DecoderKind k) {
    switch (k) {
        case DecoderKind::SC: return "sc";
        case DecoderKind::SCL: return "scl";
        case DecoderKind::Stack: return "stack";
        case DecoderKind::Fano: return "fano";
    }
    return "?";
}

struct Campaign {
    DecoderKind decoder = DecoderKind::SC;
    int list_size = 1;
    int stack_depth = 256;
    FanoConfig fano;
    double snr_start = 1.0;
    double snr_stop = 3.0;
    double snr_step = 0.5;
    uint64_t min_frame_errors = 100;
    uint64_t max_frames = 1000000;
    uint64_t seed = 1;
    int threads = 1;
};

struct SimRecord {
    double ebn0_db = 0.0;
    uint64_t frames = 0;
    uint64_t frame_errors = 0;
    uint64_t bit_errors = 0;
    double fer = 0.0;
    double ber = 0.0;
    double avg_time_steps = 0.0;
    double avg_operations = 0.0;
    double wall_seconds = 0.0;
};

inline const char* kSimCsvHeader =
    "ebn0_db,frames,frame_errors,bit_errors,fer,ber,avg_time_steps,avg_operations,wall_seconds";

struct FrameOutcome {
    bool frame_error = false;
    uint64_t bit_errors = 0;
    uint64_t time_steps = 0;
    uint64_t operations = 0;
};

// One frame: message -> optional CRC -> profile embed -> conv -> polar ->
// BPSK -> AWGN -> LLRs -> decode -> compare message bits.
inline FrameOutcome run_frame(const CodeSpec& code, const Campaign& c, const ChannelParams& params,
                              uint64_t frame) {
    const int K = code.message_length();
    GaussianStream msg_rng(c.seed ^ 0x5851f42d4c957f2dULL, frame);
    BitVec d(K);
    for (int k = 0; k < K; ++k) d[k] = static_cast<uint8_t>(msg_rng.next_u64() & 1);
    BitVec x = encode(code, d);
    auto y = transmit(bpsk_modulate(x), params, frame);
    auto llr = channel_llrs(y, params);

    BitVec d_hat;
    FrameOutcome out;
    switch (c.decoder) {
        case DecoderKind::SC: {
            ScResult r = sc_decode(llr, code);
            d_hat = extract_message(code, r.v_hat);
            out.time_steps = r.time_steps;
            out.operations = r.operations;
            break;
        }
        case DecoderKind::SCL: {
            SclOptions o;
            o.list_size = c.list_size;
            SclResult r = scl_decode(llr, code, o);
            d_hat = extract_message(code, r.v_hat);
            out.time_steps = r.time_steps;
            out.operations = r.operations;
            break;
        }
        case DecoderKind::Stack: {
            StackOptions o;
            o.depth = c.stack_depth;
            StackResult r = stack_decode(llr, code, o);
            d_hat = extract_message(code, r.v_hat);
            out.time_steps = r.time_steps;
            out.operations = r.operations;
            break;
        }
        case DecoderKind::Fano: {
            FanoResult r = fano_decode(llr, code, c.fano);
            d_hat = extract_message(code, r.v_hat);
            out.time_steps = r.time_steps;
            out.operations = r.operations;
            break;
        }
    }
    for (int k = 0; k < K; ++k) out.bit_errors += (d_hat[k] != d[k]);
    out.frame_error = out.bit_errors > 0;
    return out;
}

// Monte-Carlo point at one SNR. Frames are processed in fixed batches so the
// processed set (and therefore every counter) is independent of the worker
// count; noise is counter-seeded per frame.
inline SimRecord run_point(const CodeSpec& code, const Campaign& c, double ebn0_db,
                           std::function<void(uint64_t, uint64_t)> progress = {}) {
    ChannelParams params = ChannelParams::make(ebn0_db, code.rate(), c.seed);
    SimRecord rec;
    rec.ebn0_db = ebn0_db;
    const uint64_t batch = 256;
    const int workers = std::max(1, c.threads);
    auto t0 = std::chrono::steady_clock::now();
    uint64_t next_frame = 0;
    while (rec.frames < c.max_frames &&
           (c.min_frame_errors == 0 || rec.frame_errors < c.min_frame_errors)) {
        uint64_t todo = std::min<uint64_t>(batch, c.max_frames - rec.frames);
        std::vector<FrameOutcome> outs(todo);
        if (workers == 1) {
            for (uint64_t f = 0; f < todo; ++f)
                outs[f] = run_frame(code, c, params, next_frame + f);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    for (uint64_t f = static_cast<uint64_t>(w); f < todo; f += workers)
                        outs[f] = run_frame(code, c, params, next_frame + f);
                });
            for (auto& th : pool) th.join();
        }
        for (const FrameOutcome& o : outs) {
            ++rec.frames;
            rec.frame_errors += o.frame_error;
            rec.bit_errors += o.bit_errors;
            rec.avg_time_steps += static_cast<double>(o.time_steps);
            rec.avg_operations += static_cast<double>(o.operations);
        }
        next_frame += todo;
        if (progress) progress(rec.frames, rec.frame_errors);
    }
    rec.fer = rec.frames ? static_cast<double>(rec.frame_errors) / rec.frames : 0.0;
    rec.ber = rec.frames ? static_cast<double>(rec.bit_errors) /
                               (static_cast<double>(rec.frames) * code.message_length())
                         : 0.0;
    if (rec.frames) {
        rec.avg_time_steps /= static_cast<double>(rec.frames);
        rec.avg_operations /= static_cast<double>(rec.frames);
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

inline std::vector<double> snr_grid(const Campaign& c) {
    std::vector<double> g;
    for (double s = c.snr_start; s <= c.snr_stop + 1e-9; s += c.snr_step) {
        g.push_back(s);
        if (c.snr_step <= 0) break;
    }
    return g;
}

inline std::string format_csv_row(const SimRecord& r) {
    std::ostringstream os;
    os << std::setprecision(10) << r.ebn0_db << "," << r.frames << "," << r.frame_errors << ","
       << r.bit_errors << "," << r.fer << "," << r.ber << "," << r.avg_time_steps << ","
       << r.avg_operations << "," << r.wall_seconds;
    return os.str();
}

inline std::vector<SimRecord> run_campaign(const CodeSpec& code, const Campaign& c,
                                           std::ostream* live_csv = nullptr) {
    std::vector<SimRecord> records;
    for (double snr : snr_grid(c)) {
        SimRecord r = run_point(code, c, snr);
        if (live_csv) *live_csv << format_csv_row(r) << "\n" << std::flush;
        records.push_back(r);
    }
    return records;
}

inline void emit_csv(const std::vector<SimRecord>& records, std::ostream& os) {
    os << kSimCsvHeader << "\n";
    for (const SimRecord& r : records) os << format_csv_row(r) << "\n";
}

} // namespace pactree
