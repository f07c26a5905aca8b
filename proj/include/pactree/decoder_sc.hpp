#pragma once

#include "code.hpp"
#include "polar_kernel.hpp"

namespace pactree {

struct ScResult {
    BitVec v_hat;
    BitVec u_hat;
    uint64_t time_steps = 0;
    uint64_t operations = 0;
};

struct ScOptions {
    FNodeRule f_rule = FNodeRule::MinSum;
};

// Plain SC over the PAC tree: frozen steps encode v=0 through the
// convolutional transform, information steps follow the hard decision.
inline ScResult sc_decode(const std::vector<double>& llrs, const CodeSpec& code,
                          ScOptions opts = {}) {
    const int N = code.block_length();
    KernelCounters ctr;
    FactorGraphMemory fg(N, opts.f_rule, &ctr);
    fg.load_channel_llrs(llrs);
    ScResult r;
    r.v_hat.assign(N, 0);
    r.u_hat.assign(N, 0);
    ConvState state = 0;
    for (int i = 0; i < N; ++i) {
        const double llr = fg.update_llrs(i);
        uint8_t v = 0;
        if (code.profile.is_info[i]) {
            // exactly one branch matches the local ML rule (g0 = 1)
            ConvState probe = state;
            uint8_t u0 = conv_1b_trans(0, probe, code.g);
            v = (u0 == hard_decision(llr)) ? 0 : 1;
            ctr.operations += 1;
        }
        uint8_t u = conv_1b_trans(v, state, code.g);
        r.v_hat[i] = v;
        r.u_hat[i] = u;
        fg.update_partial_sums(i, u);
    }
    r.time_steps = ctr.time_steps;
    r.operations = ctr.operations;
    return r;
}

struct GenieScResult {
    BitVec v_hat;              // equals v_true by construction
    std::vector<int> corrections;  // bit indices where the hard decision was wrong
    uint64_t time_steps = 0;
};

// SC with oracle corrections: every wrong information decision is fixed to
// the true bit and recorded. Counts channel-induced errors rather than
// propagated ones.
inline GenieScResult genie_sc_decode(const std::vector<double>& llrs, const CodeSpec& code,
                                     const BitVec& v_true, ScOptions opts = {}) {
    const int N = code.block_length();
    KernelCounters ctr;
    FactorGraphMemory fg(N, opts.f_rule, &ctr);
    fg.load_channel_llrs(llrs);
    GenieScResult r;
    r.v_hat.assign(N, 0);
    ConvState state = 0;
    for (int i = 0; i < N; ++i) {
        const double llr = fg.update_llrs(i);
        uint8_t v = 0;
        if (code.profile.is_info[i]) {
            ConvState probe = state;
            uint8_t u0 = conv_1b_trans(0, probe, code.g);
            v = (u0 == hard_decision(llr)) ? 0 : 1;
            if (v != v_true[i]) {
                r.corrections.push_back(i);
                v = v_true[i];
            }
        }
        uint8_t u = conv_1b_trans(v, state, code.g);
        r.v_hat[i] = v;
        fg.update_partial_sums(i, u);
    }
    r.time_steps = ctr.time_steps;
    return r;
}

} // namespace pactree
