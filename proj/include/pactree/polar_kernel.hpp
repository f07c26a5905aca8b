#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>

#include "common.hpp"
#include "metrics.hpp"

namespace pactree {

// Modified find-first-set: lowest set bit position of i, or n-1 for i = 0.
inline int ffs_star(uint32_t i, int n) {
    if (i == 0) return n - 1;
    return __builtin_ctz(i);
}

// Deepest factor-graph stage whose values were overwritten while decoding
// bits i_start..i_curr (inclusive).
inline int s_max(uint32_t i_start, uint32_t i_curr, int n) {
    if (i_start > i_curr) throw std::invalid_argument("s_max: i_start > i_curr");
    int s = -1;
    for (uint32_t m = i_start; m <= i_curr; ++m) s = std::max(s, ffs_star(m, n));
    return s;
}

struct KernelCounters {
    uint64_t time_steps = 0;  // one per activated factor-graph stage
    uint64_t operations = 0;  // one per f/g evaluation or metric add/compare
};

enum class FNodeRule { MinSum, Exact };

// In-place SC factor-graph memory: N channel LLRs, N-1 intermediate LLRs and
// N-1 partial-sum bits. Stage s (0 = decision, n = channel) holds 2^s
// intermediate values at offset 2^s - 1; stage s combines parent entries
// (p, p + 2^s). Storage never grows, whatever the rewind pattern.
class FactorGraphMemory {
public:
    explicit FactorGraphMemory(int N, FNodeRule rule = FNodeRule::MinSum,
                               KernelCounters* shared = nullptr)
        : N_(N), n_(log2_exact(static_cast<std::size_t>(N))), rule_(rule),
          channel_(std::make_shared<std::vector<double>>(N)), inter_(N - 1), psums_(N - 1, 0),
          shared_(shared) {}

    int block_length() const { return N_; }
    int stages() const { return n_; }

    KernelCounters& counters() { return shared_ ? *shared_ : own_; }
    const KernelCounters& counters() const { return shared_ ? *shared_ : own_; }

    // The channel buffer is read-only after load, so path copies share it.
    void load_channel_llrs(std::span<const double> llrs) {
        if (static_cast<int>(llrs.size()) != N_)
            throw std::invalid_argument("channel LLR length mismatch");
        if (channel_.use_count() != 1) channel_ = std::make_shared<std::vector<double>>(N_);
        std::copy(llrs.begin(), llrs.end(), channel_->begin());
        std::fill(inter_.begin(), inter_.end(), 0.0);
        std::fill(psums_.begin(), psums_.end(), 0);
        high_water_ = -1;
    }

    // Decision LLR for bit i, assuming bits 0..i-1 were decoded in order (or
    // restored by rewind). Activates stages ffs_star(i)..0; the deepest
    // activated stage is a g-combination for i > 0.
    double update_llrs(int i) {
        if (i > high_water_) high_water_ = i;
        const int s_top = ffs_star(static_cast<uint32_t>(i), n_);
        const bool g_top = (i != 0);
        for (int s = s_top; s >= 0; --s) {
            const int len = 1 << s;
            const double* parent = (s == n_ - 1) ? channel_->data() : inter_.data() + offset(s + 1);
            double* out = inter_.data() + offset(s);
            if (s == s_top && g_top) {
                const uint8_t* ps = psums_.data() + offset(s);
                for (int p = 0; p < len; ++p) out[p] = g_node(parent[p], parent[p + len], ps[p]);
            } else {
                for (int p = 0; p < len; ++p) out[p] = f_node(parent[p], parent[p + len]);
            }
            counters().time_steps += 1;
            counters().operations += static_cast<uint64_t>(len);
        }
        return inter_[offset(0)];
    }

    // Folds the decided bit into the partial sums; for bit i the fold reaches
    // stage ffs_star(i+1). Forward folds are free in the time-step model
    // (they overlap LLR stages in the reference architecture).
    void update_partial_sums(int i, uint8_t u) { fold_psums(i, u, false); }

    // Restores the memory to the state of having decoded exactly bits
    // 0..i_start-1 with the decisions in u_hat, given it currently reflects
    // decoding up to i_curr. After this, update_llrs(i_start) equals a fresh
    // in-order SC pass. Replays charge time steps for every stage touched.
    void rewind(int i_start, int i_curr, std::span<const uint8_t> u_hat) {
        if (i_start > i_curr) throw std::invalid_argument("rewind: i_start > i_curr");
        const int orig_start = i_start;
        if (orig_start == 0) return;  // full forward replay rebuilds everything
        // stale intermediate values can linger from any earlier excursion past
        // i_curr, so the staleness horizon is the high-water mark of decoding
        i_curr = std::max(i_curr, high_water_);
        if (i_curr == orig_start) return;  // nothing decoded beyond the resume prefix
        if (orig_start % 2 == 1 && i_curr <= orig_start + 1) return;  // odd one-step move

        if (i_curr % 2 != 0) --i_curr;
        if (i_start % 2 != 0) --i_start;

        const int s_start = ffs_star(static_cast<uint32_t>(i_start), n_);
        const int deepest = s_max(static_cast<uint32_t>(i_start), static_cast<uint32_t>(i_curr), n_);

        // back-scan to the bit whose activation covers the deepest stale stage
        int back = i_start;
        int s = s_start;
        while (s < deepest) {
            back -= 2;
            if (back > 0) s = ffs_star(static_cast<uint32_t>(back), n_);
            else { back = 0; break; }
        }
        // replay the partial sums of the completed block feeding that stage
        const int span = 1 << std::max(s, deepest);
        for (int m = std::max(0, back - span); m < back; ++m)
            fold_psums(m, u_hat[m], true);
        // forward replay up to (not including) the resume point
        for (int m = back; m < orig_start; ++m) {
            update_llrs(m);
            fold_psums(m, u_hat[m], true);
        }
    }

private:
    static int offset(int s) { return (1 << s) - 1; }

    double f_node(double a, double b) const {
        if (rule_ == FNodeRule::MinSum) {
            double m = std::min(std::fabs(a), std::fabs(b));
            return ((a < 0) != (b < 0)) ? -m : m;
        }
        return 2.0 * std::atanh(std::tanh(a / 2.0) * std::tanh(b / 2.0));
    }
    static double g_node(double a, double b, uint8_t u) { return b + (1.0 - 2.0 * u) * a; }

    void fold_psums(int i, uint8_t u, bool charge) {
        if (i == N_ - 1) return;
        const int k = ffs_star(static_cast<uint32_t>(i + 1), n_);
        uint8_t* out = psums_.data() + offset(k);
        out[0] = u;
        for (int s = 0; s < k; ++s) {
            const uint8_t* lower = psums_.data() + offset(s);
            const int len = 1 << s;
            for (int p = 0; p < len; ++p) {
                out[p + len] = out[p];
                out[p] ^= lower[p];
            }
        }
        if (charge) {
            counters().time_steps += static_cast<uint64_t>(k);
            counters().operations += static_cast<uint64_t>((1 << k) - 1);
        }
    }

    int N_, n_;
    FNodeRule rule_;
    std::shared_ptr<std::vector<double>> channel_;
    std::vector<double> inter_;
    std::vector<uint8_t> psums_;
    int high_water_ = -1;  // deepest bit whose stages were ever activated
    KernelCounters* shared_;
    KernelCounters own_;
};

} // namespace pactree
