#pragma once

#include <set>

#include "code.hpp"
#include "polar_kernel.hpp"

namespace pactree {

struct StackOptions {
    int depth = 256;                 // stack bound D
    FNodeRule f_rule = FNodeRule::MinSum;
    MetricMode metric = MetricMode::Approx;
    uint64_t max_pops = 0;           // 0: default 256 * profiled length
};

struct StackResult {
    BitVec v_hat;
    bool success = false;            // false: pop budget exhausted
    double metric = 0.0;
    uint64_t time_steps = 0;
    uint64_t operations = 0;
    uint64_t pops = 0;
};

// Best-first search over the PAC tree with the biased Fano metric (no bias
// adaptation here). Frozen runs are absorbed into the parent extension, so
// stack entries sit at information depths only.
inline StackResult stack_decode(const std::vector<double>& llrs, const CodeSpec& code,
                                const StackOptions& opts) {
    if (opts.depth < 2) throw std::invalid_argument("stack_decode: depth must be >= 2");
    const int N = code.block_length();
    const RateProfile& prof = code.profile;
    KernelCounters ctr;
    uint64_t metric_ops = 0;

    struct Entry {
        double mu;
        int length;       // decoded bits
        uint64_t seq;     // insertion order, tie-break
        FactorGraphMemory fg;
        ConvState state;
        BitVec v_hist;
    };
    struct Better {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.mu != b.mu) return a.mu > b.mu;
            if (a.length != b.length) return a.length > b.length;  // drop shorter first
            return a.seq < b.seq;
        }
    };
    std::multiset<Entry, Better> stack;

    uint64_t seq = 0;
    Entry root{code.profile.bias.total, 0, seq++, FactorGraphMemory(N, opts.f_rule, &ctr), 0,
               BitVec(N, 0)};
    root.fg.load_channel_llrs(llrs);

    // run the entry forward through frozen bits, then evaluate both children
    // of the next information bit; returns true when the block completed
    auto extend_frozen = [&](Entry& e) {
        while (e.length < N && !prof.is_info[e.length]) {
            const int i = e.length;
            double llr = e.fg.update_llrs(i);
            uint8_t u = conv_1b_trans(0, e.state, code.g);
            e.mu = biased_step(e.mu, branch_metric(llr, u, opts.metric), prof.bias, i, 1.0);
            ++metric_ops;
            e.v_hist[i] = 0;
            e.fg.update_partial_sums(i, u);
            ++e.length;
        }
    };

    extend_frozen(root);
    stack.insert(std::move(root));

    const uint64_t max_pops = opts.max_pops ? opts.max_pops
                                            : 256ULL * static_cast<uint64_t>(prof.K ? prof.K : 1);
    StackResult r;
    while (!stack.empty()) {
        if (r.pops >= max_pops) break;
        Entry cur = std::move(stack.extract(stack.begin()).value());
        ++r.pops;
        if (cur.length >= N) {
            r.v_hat = cur.v_hist;
            r.metric = cur.mu;
            r.success = true;
            break;
        }
        const int i = cur.length;  // an information bit
        double llr = cur.fg.update_llrs(i);
        metric_ops += 2;
        for (uint8_t v : {uint8_t{0}, uint8_t{1}}) {
            Entry child = (v == 1) ? std::move(cur) : cur;  // second child reuses the parent
            uint8_t u = conv_1b_trans(v, child.state, code.g);
            child.mu = biased_step(child.mu, branch_metric(llr, u, opts.metric), prof.bias, i, 1.0);
            child.v_hist[i] = v;
            child.fg.update_partial_sums(i, u);
            ++child.length;
            child.seq = seq++;
            extend_frozen(child);
            stack.insert(std::move(child));
        }
        while (static_cast<int>(stack.size()) > opts.depth) {
            stack.erase(std::prev(stack.end()));  // drop the worst entry
            ++metric_ops;
        }
    }
    if (!r.success && !stack.empty()) {
        // report the deepest best effort so the caller can still count bits
        const Entry& best = *stack.begin();
        r.v_hat = best.v_hist;
        r.metric = best.mu;
    }
    if (r.v_hat.empty()) r.v_hat.assign(N, 0);
    r.time_steps = ctr.time_steps;
    r.operations = ctr.operations + metric_ops;
    return r;
}

} // namespace pactree
