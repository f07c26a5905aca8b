#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "code.hpp"
#include "polar_kernel.hpp"

namespace pactree {

struct FanoConfig {
    double delta = 2.0;            // threshold step
    int delta_q = 2;               // bias-scale quantizer step
    int bias_update_index = -1;    // i_bu; -1: round(0.6 * profiled length)
    int max_diversions = 4;        // 0 or >= K disables the constraint
    bool use_critical_set = true;
    bool use_top_down = true;
    bool use_adaptive_bias = true;
    bool use_one_shot_threshold = true;
    bool use_explored_refresh = true;
    MetricMode metric = MetricMode::Approx;
    FNodeRule f_rule = FNodeRule::MinSum;
    uint64_t max_time_steps = 0;   // 0: 200 * (2N - 2)
    double min_metric_abort = 0.0; // 0: 5 * bias total (both negative)

    // test instrumentation
    std::vector<double>* threshold_trace = nullptr;  // records every threshold value taken
    bool paranoid_rewind_check = false;  // compare each landing LLR against a fresh pass
    struct TraceEvent {
        char kind;  // V violation, S stem pick, D diversion, R restore, X drop
        int rank;
        double metric;
        double threshold;
    };
    std::vector<TraceEvent>* event_trace = nullptr;

    // Reference configuration: every complexity-reduction strategy disabled,
    // classic one-step threshold lowering. Best error rate, highest cost.
    static FanoConfig unconstrained() {
        FanoConfig c;
        c.max_diversions = 0;
        c.use_critical_set = false;
        c.use_top_down = false;
        c.use_adaptive_bias = false;
        c.use_one_shot_threshold = false;
        c.use_explored_refresh = true;
        return c;
    }
};

struct FanoResult {
    BitVec v_hat;
    bool success = false;          // false: abort guard fired
    double metric = 0.0;           // final path metric
    double bias_scale = 1.0;       // applied scale (1 when no adaptation)
    uint64_t time_steps = 0;
    uint64_t operations = 0;
    uint64_t backward_moves = 0;   // rewinds plus stem restores
    uint64_t diversions = 0;       // bad-branch moves taken
    uint64_t threshold_drops = 0;
    uint64_t rewind_check_failures = 0;  // only with paranoid_rewind_check
    BitVec diverted;               // final per-information-node diversion flags
};

namespace detail {

// Full Fano search state per Algorithm-style bookkeeping, addressed by role:
//  - best_metric[i+1]: path metric after bit i on the current path
//  - alt_metric[i]: metric of the unexplored sibling at information bit i
//  - explored_best[i]: best end metric seen among sub-paths exploring the
//    bad branch of stem i (refreshes alt_metric on the next main-path walk)
//  - diverted[k] / stem_used[k]: per information node flags for the current
//    path and for stems already tried in the current backtracking cycle
struct FanoSearch {
    const CodeSpec& code;
    const FanoConfig& cfg;
    const RateProfile& prof;
    int N, K, bias_index;
    double delta;
    int max_div;

    FactorGraphMemory fg;
    FactorGraphMemory snapshot;
    bool snapshot_valid = false;

    std::vector<double> best_metric;   // N+1, shifted by one; [0] is the root value
    std::vector<double> alt_metric;    // per bit index (info positions)
    std::vector<double> explored_best; // per bit index (stem positions)
    std::vector<uint8_t> explored_set;
    BitVec v_hat, u_hat;
    std::vector<uint8_t> diverted;     // per info rank
    std::vector<uint8_t> stem_used;    // per info rank
    std::vector<ConvState> state_before; // conv state entering info node k

    double threshold = 0.0;
    double bias_scale = 1.0;
    bool bias_updated = false;
    bool on_main_path = true;
    bool backtracking = false;
    bool to_diverge = false;
    int frontier_rank = std::numeric_limits<int>::max();  // info rank of the last main-path violation
    double frontier_metric = 0.0;
    int stem_rank = -1;

    ConvState conv_state = 0;
    int i = 0;  // bit index
    int j = 0;  // info rank of the next information node
    bool pending_check = false;
    double min_metric_floor = 0.0;

    KernelCounters ctr;
    uint64_t metric_ops = 0;
    FanoResult out;
    std::vector<double> channel_ref;

    FanoSearch(const std::vector<double>& llrs, const CodeSpec& c, const FanoConfig& f)
        : code(c), cfg(f), prof(c.profile), N(c.block_length()), K(prof.K),
          bias_index(f.bias_update_index >= 0 ? f.bias_update_index
                                              : static_cast<int>(std::lround(0.6 * prof.K))),
          delta(f.delta), max_div(f.max_diversions > 0 ? f.max_diversions : prof.K + 1),
          fg(c.block_length(), f.f_rule, &ctr), snapshot(c.block_length(), f.f_rule, &ctr),
          best_metric(static_cast<std::size_t>(c.block_length()) + 1, 0.0),
          alt_metric(c.block_length(), 0.0),
          explored_best(c.block_length(), 0.0), explored_set(c.block_length(), 0),
          v_hat(c.block_length(), 0), u_hat(c.block_length(), 0),
          diverted(prof.K, 0), stem_used(prof.K, 0), state_before(prof.K, 0) {
        fg.load_channel_llrs(llrs);
        best_metric[0] = prof.bias.total;
        if (f.paranoid_rewind_check) channel_ref = llrs;
    }

    double mu_at(int bit) const { return best_metric[bit + 1]; }
    void set_mu(int bit, double v) { best_metric[bit + 1] = v; }
    double step_metric(double mu_prev, double m, int bit) const {
        return biased_step(mu_prev, m, prof.bias, bit, bias_scale);
    }

    bool cs_ok(int rank) const {
        return !cfg.use_critical_set || prof.critical[prof.info_set[rank]] != 0;
    }
    int diversions_through(int rank) const {
        int s = 0;
        for (int k = 0; k <= rank; ++k) s += diverted[k];
        return s;
    }
    double floor_to_delta(double mu) const {
        double t = std::floor(mu / delta) * delta;
        if (t >= mu) t -= delta;  // keep forward moves strict
        return t;
    }
    // Abort when the search threshold has chased the metric below the floor;
    // transient dips of explored sub-paths do not count, only the point where
    // every candidate continuation has fallen this low.
    bool drop_threshold(double mu) {
        threshold = cfg.use_one_shot_threshold ? floor_to_delta(mu) : threshold - delta;
        ++out.threshold_drops;
        if (cfg.threshold_trace) cfg.threshold_trace->push_back(threshold);
        trace('X', j, mu);
        return threshold >= min_metric_floor;
    }
    void trace(char kind, int rank, double metric) {
        if (cfg.event_trace) cfg.event_trace->push_back({kind, rank, metric, threshold});
    }

    // retroactive rescale of every stored metric after the bias scale changed
    void apply_bias_rescale(double new_scale) {
        const double df = new_scale - bias_scale;
        best_metric[0] += df * prof.bias.total;
        for (int t = 0; t < i; ++t) best_metric[t + 1] += df * prof.bias.tail[t];
        for (int k = 0; k < j; ++k) {
            int bit = prof.info_set[k];
            alt_metric[bit] += df * prof.bias.tail[bit];
        }
        if (frontier_rank < K)
            frontier_metric += df * prof.bias.tail[prof.info_set[frontier_rank]];
        std::fill(explored_set.begin(), explored_set.end(), 0);  // frontier metrics are stale now
        bias_scale = new_scale;
    }

    struct MoveBackOutcome {
        int rank;
        bool diverge;
        bool restored;
    };

    void do_rewind(int from_bit, int to_bit) {
        fg.rewind(to_bit, from_bit, u_hat);
        ++out.backward_moves;
    }

    MoveBackOutcome move_back(bool from_main) {
        if (from_main) {
            // pick a stem off the main path: first eligible diversion point in
            // the configured direction (top-down favors the earliest decoded
            // bits where first errors concentrate; bottom-up is conventional)
            auto eligible = [&](int k) {
                int bit = prof.info_set[k];
                ++metric_ops;
                return alt_metric[bit] > threshold && cs_ok(k) && !stem_used[k] &&
                       diversions_through(k) - diverted[k] < max_div;
            };
            int found = -1;
            if (cfg.use_top_down) {
                for (int k = 0; k < j; ++k)
                    if (eligible(k)) { found = k; break; }
            } else {
                for (int k = j - 1; k >= 0; --k)
                    if (eligible(k)) { found = k; break; }
            }
            if (found < 0) return {j, false, false};
            do_rewind(i, prof.info_set[found]);
            stem_rank = found;
            stem_used[found] = 1;
            snapshot = fg;  // memory consistent with decoding up to the stem
            snapshot_valid = true;
            trace('S', found, alt_metric[prof.info_set[found]]);
            return {found, diverted[found] == 0, false};
        }
        // off the main path: bottom-up scan, hopping over already-diverted
        // waypoints, ending at the stem (snapshot restore) at the latest
        int cur = j;
        while (true) {
            bool moved = false;
            for (int k = cur - 1; k >= 0; --k) {
                if (k == stem_rank) {
                    return {k, false, true};  // caller restores the stem snapshot
                }
                int bit = prof.info_set[k];
                ++metric_ops;
                if (alt_metric[bit] > threshold && cs_ok(k)) {
                    if (diversions_through(k) >= max_div) continue;
                    if (diverted[k]) {
                        do_rewind(prof.info_set[cur], bit);
                        cur = k;
                        moved = true;
                        break;
                    }
                    do_rewind(prof.info_set[cur], bit);
                    return {k, true, false};
                }
            }
            if (!moved) return {cur, false, false};
        }
    }

    FanoResult run() {
        const uint64_t max_ts =
            cfg.max_time_steps ? cfg.max_time_steps : 200ULL * (2ULL * N - 2ULL);
        min_metric_floor =
            cfg.min_metric_abort != 0.0 ? cfg.min_metric_abort : 5.0 * prof.bias.total;

        while (i < N) {
            if (ctr.time_steps > max_ts) return finish(false);
            const double llr = fg.update_llrs(i);
            if (cfg.paranoid_rewind_check && pending_check) {
                pending_check = false;
                if (llr != fresh_decision_llr(i)) ++out.rewind_check_failures;
            }

            if (!prof.is_info[i]) {
                uint8_t u = conv_1b_trans(0, conv_state, code.g);
                double mu = step_metric(mu_at(i - 1), branch_metric(llr, u, cfg.metric), i);
                ++metric_ops;
                maybe_adapt_bias(mu, &mu, nullptr);
                set_mu(i, mu);
                v_hat[i] = 0;
                u_hat[i] = u;
                fg.update_partial_sums(i, u);
                ++i;
                continue;
            }

            // information node j at bit i: evaluate both children
            ConvState st0 = conv_state, st1 = conv_state;
            uint8_t u0 = conv_1b_trans(0, st0, code.g);
            uint8_t u1 = conv_1b_trans(1, st1, code.g);
            double mu0 = step_metric(mu_at(i - 1), branch_metric(llr, u0, cfg.metric), i);
            double mu1 = step_metric(mu_at(i - 1), branch_metric(llr, u1, cfg.metric), i);
            metric_ops += 3;
            maybe_adapt_bias(std::max(mu0, mu1), &mu0, &mu1);

            uint8_t v_good;
            if (mu0 != mu1) v_good = (mu0 > mu1) ? 0 : 1;
            else v_good = (u1 == hard_decision(llr)) ? 1 : 0;
            const double mu_good = (v_good == 0) ? mu0 : mu1;
            const double mu_bad = (v_good == 0) ? mu1 : mu0;

            if (on_main_path && backtracking && j < frontier_rank && cfg.use_top_down &&
                mu_bad > threshold && cs_ok(j) && !stem_used[j] &&
                diversions_through(j) - diverted[j] < max_div) {
                // re-walk found an eligible bad branch: leave the main path right
                // here instead of walking to the frontier and scanning back
                stem_rank = j;
                stem_used[j] = 1;
                snapshot = fg;
                snapshot_valid = true;
                on_main_path = false;
                to_diverge = true;
            }

            if (std::max(mu_good, mu_bad) > threshold) {
                ++metric_ops;
                uint8_t v;
                double mu_taken;
                if (to_diverge) {
                    v = static_cast<uint8_t>(1 - v_good);
                    mu_taken = mu_bad;
                    alt_metric[i] = mu_good;
                    diverted[j] = 1;
                    to_diverge = false;
                    ++out.diversions;
                    trace('D', j, mu_bad);
                } else {
                    v = v_good;
                    mu_taken = mu_good;
                    alt_metric[i] = (cfg.use_explored_refresh && on_main_path && explored_set[i])
                                        ? explored_best[i]
                                        : mu_bad;
                    diverted[j] = 0;
                }
                if (on_main_path && backtracking && j >= frontier_rank)
                    backtracking = false;  // past the frontier, cycle over
                state_before[j] = conv_state;
                conv_state = (v == 0) ? st0 : st1;
                v_hat[i] = v;
                u_hat[i] = (v == 0) ? u0 : u1;
                set_mu(i, mu_taken);
                fg.update_partial_sums(i, u_hat[i]);
                ++i;
                ++j;
                continue;
            }

            // threshold violation
            ++metric_ops;
            if (cfg.use_adaptive_bias && !bias_updated && i < bias_index) {
                // no backtracking before the bias checkpoint
                if (!drop_threshold(mu_good)) return finish(false);
                continue;
            }
            state_before[j] = conv_state;
            bool from_main = on_main_path;
            if (on_main_path) {
                frontier_rank = j;
                frontier_metric = mu_good;
                backtracking = true;
            } else if (stem_rank >= 0) {
                int stem_bit = prof.info_set[stem_rank];
                if (!explored_set[stem_bit] || explored_best[stem_bit] < mu_good) {
                    explored_best[stem_bit] = mu_good;
                    explored_set[stem_bit] = 1;
                }
            }

            trace('V', j, mu_good);
            MoveBackOutcome mb = move_back(from_main);
            if (mb.restored) {
                fg = snapshot;
                ++out.backward_moves;
                pending_check = true;
                on_main_path = true;
                to_diverge = false;
                j = stem_rank;
                i = prof.info_set[j];
                conv_state = state_before[j];
                trace('R', j, mu_at(i - 1));
            } else if (mb.rank == j && !mb.diverge) {
                // every eligible stem at this threshold is exhausted: lower it
                // and start a fresh cycle
                to_diverge = false;
                if (!drop_threshold(mu_good)) return finish(false);
                std::fill(stem_used.begin(), stem_used.end(), 0);
                stem_rank = -1;
            } else {
                to_diverge = mb.diverge;
                on_main_path = false;
                pending_check = true;
                j = mb.rank;
                i = prof.info_set[j];
                conv_state = state_before[j];
            }
        }
        return finish(true);
    }

    // oracle for the paranoid check: fresh in-order pass over the current prefix
    double fresh_decision_llr(int bit) {
        FactorGraphMemory probe(N, cfg.f_rule);
        std::vector<double> chan(N);
        // the channel values are reproducible from the stored reference
        for (int t = 0; t < N; ++t) chan[t] = channel_ref[t];
        probe.load_channel_llrs(chan);
        for (int t = 0; t < bit; ++t) {
            probe.update_llrs(t);
            probe.update_partial_sums(t, u_hat[t]);
        }
        return probe.update_llrs(bit);
    }

    void maybe_adapt_bias(double mu_best, double* a, double* b) {
        if (!cfg.use_adaptive_bias || bias_updated || i != bias_index) return;
        if (!(mu_best < prof.bias.total)) return;
        // actual and expected log-probability sums up to this bit
        const double actual = mu_best - prof.bias.tail[i];
        const double expected = prof.bias.total - prof.bias.tail[i];
        auto alpha = compute_alpha(actual, expected);
        if (!alpha || *alpha <= 1.0) return;
        const double scaled = quantize_alpha(*alpha, cfg.delta_q);
        bias_updated = true;
        const double df = scaled - bias_scale;
        apply_bias_rescale(scaled);
        if (a) *a += df * prof.bias.tail[i];
        if (b) *b += df * prof.bias.tail[i];
        out.bias_scale = scaled;
    }

    FanoResult finish(bool ok) {
        out.v_hat = v_hat;
        out.success = ok;
        out.metric = (i > 0) ? mu_at(i - 1) : best_metric[0];
        out.time_steps = ctr.time_steps;
        out.operations = ctr.operations + metric_ops;
        out.bias_scale = bias_scale;
        out.diverted = diverted;
        // flags past the live position are leftovers of abandoned walks
        for (int k = j; k < K; ++k) out.diverted[k] = 0;
        return out;
    }
};

} // namespace detail

inline FanoResult fano_decode(const std::vector<double>& llrs, const CodeSpec& code,
                              const FanoConfig& cfg = {}) {
    detail::FanoSearch search(llrs, code, cfg);
    return search.run();
}

} // namespace pactree
