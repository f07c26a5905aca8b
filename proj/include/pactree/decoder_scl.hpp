#pragma once

#include <algorithm>

#include "code.hpp"
#include "decoder_sc.hpp"
#include "polar_kernel.hpp"

namespace pactree {

// One list-decoding path: value semantics, duplicated on forks.
struct DecPath {
    FactorGraphMemory fg;
    ConvState state = 0;
    double pm = 0.0;
    BitVec v_hist;
    BitVec u_hist;

    DecPath(int N, FNodeRule rule, KernelCounters* ctr)
        : fg(N, rule, ctr), v_hist(N, 0), u_hist(N, 0) {}
};

struct SclResult {
    BitVec v_hat;                     // selected path
    double pm = 0.0;
    bool crc_pass = false;            // selection used a CRC-passing path
    std::vector<BitVec> candidates;   // final list, pm-sorted (kept on request)
    std::vector<double> candidate_pms;
    uint64_t time_steps = 0;          // schedule steps of one path (paths run in parallel)
    uint64_t operations = 0;          // f/g plus metric and sorter work across all paths
};

struct SclOptions {
    int list_size = 1;
    FNodeRule f_rule = FNodeRule::MinSum;
    bool keep_candidates = false;
};

inline SclResult scl_decode(const std::vector<double>& llrs, const CodeSpec& code,
                            const SclOptions& opts) {
    const int N = code.block_length();
    const int L = opts.list_size;
    if (L < 1) throw std::invalid_argument("scl_decode: list size must be >= 1");

    KernelCounters ctr;  // shared by every path, so f/g work aggregates
    uint64_t metric_ops = 0;
    std::vector<DecPath> paths;
    paths.reserve(static_cast<std::size_t>(L) * 2);
    paths.emplace_back(N, opts.f_rule, &ctr);
    paths.front().fg.load_channel_llrs(llrs);

    std::vector<double> decision_llr;
    struct Cand {
        double pm;
        int parent;
        uint8_t v;
    };
    std::vector<Cand> cands;

    uint64_t schedule_steps = 0;
    const int n = log2_exact(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        schedule_steps += static_cast<uint64_t>(ffs_star(static_cast<uint32_t>(i), n) + 1);
        decision_llr.resize(paths.size());
        for (std::size_t l = 0; l < paths.size(); ++l)
            decision_llr[l] = paths[l].fg.update_llrs(i);

        if (!code.profile.is_info[i]) {
            for (std::size_t l = 0; l < paths.size(); ++l) {
                DecPath& p = paths[l];
                uint8_t u = conv_1b_trans(0, p.state, code.g);
                p.pm = list_pm_update(p.pm, decision_llr[l], u);
                ++metric_ops;
                p.v_hist[i] = 0;
                p.u_hist[i] = u;
                p.fg.update_partial_sums(i, u);
            }
            continue;
        }

        // fork every path into the v=0 and v=1 children
        cands.clear();
        for (std::size_t l = 0; l < paths.size(); ++l) {
            ConvState s0 = paths[l].state;
            uint8_t u0 = conv_1b_trans(0, s0, code.g);
            cands.push_back({list_pm_update(paths[l].pm, decision_llr[l], u0),
                             static_cast<int>(l), 0});
            cands.push_back({list_pm_update(paths[l].pm, decision_llr[l], static_cast<uint8_t>(u0 ^ 1)),
                             static_cast<int>(l), 1});
            metric_ops += 2;
        }
        if (static_cast<int>(cands.size()) > L) {
            std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                if (a.pm != b.pm) return a.pm < b.pm;
                if (a.parent != b.parent) return a.parent < b.parent;
                return a.v < b.v;
            });
            cands.resize(L);
            // fixed sorter charge: a 2L-to-L compare-select network
            metric_ops += static_cast<uint64_t>(cands.size()) * 2ULL *
                          static_cast<uint64_t>(n ? n : 1);
        }

        std::vector<int> child_count(paths.size(), 0);
        for (const Cand& c : cands) ++child_count[c.parent];

        std::vector<DecPath> next;
        next.reserve(cands.size());
        for (const Cand& c : cands) {
            if (--child_count[c.parent] == 0)
                next.push_back(std::move(paths[c.parent]));
            else
                next.push_back(paths[c.parent]);
            DecPath& p = next.back();
            uint8_t u = conv_1b_trans(c.v, p.state, code.g);
            p.pm = c.pm;
            p.v_hist[i] = c.v;
            p.u_hist[i] = u;
            p.fg.update_partial_sums(i, u);
        }
        paths = std::move(next);
    }

    std::vector<int> order(paths.size());
    for (std::size_t l = 0; l < paths.size(); ++l) order[l] = static_cast<int>(l);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (paths[a].pm != paths[b].pm) return paths[a].pm < paths[b].pm;
        return a < b;
    });

    int pick = order[0];
    bool crc_pass = false;
    if (code.crc) {
        for (int l : order) {
            if (crc_check(extract_payload(code, paths[l].v_hist), *code.crc)) {
                pick = l;
                crc_pass = true;
                break;
            }
        }
    }

    SclResult r;
    r.v_hat = paths[pick].v_hist;
    r.pm = paths[pick].pm;
    r.crc_pass = crc_pass;
    r.time_steps = schedule_steps;
    r.operations = ctr.operations + metric_ops;
    if (opts.keep_candidates) {
        for (int l : order) {
            r.candidates.push_back(paths[l].v_hist);
            r.candidate_pms.push_back(paths[l].pm);
        }
    }
    return r;
}

// ML-in-list lower-bound event: the decoder picked a wrong codeword that an
// ML decoder would also have preferred (closer to y than the transmitted one).
inline bool ml_bound_event(const CodeSpec& code, const BitVec& v_decoded, const BitVec& v_true,
                           const BitVec& x_true, const std::vector<double>& y) {
    if (v_decoded == v_true) return false;
    BitVec x_hat = encode_from_v(code, v_decoded);
    double d_hat = 0.0, d_true = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double sh = 1.0 - 2.0 * x_hat[i];
        double st = 1.0 - 2.0 * x_true[i];
        d_hat += (y[i] - sh) * (y[i] - sh);
        d_true += (y[i] - st) * (y[i] - st);
    }
    return d_hat < d_true;
}

} // namespace pactree
