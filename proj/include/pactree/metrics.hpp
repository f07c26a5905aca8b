#pragma once

#include <cmath>
#include <optional>

#include "common.hpp"

namespace pactree {

// lambda > 0 favors bit 0; the tie lambda = 0 resolves to 1 so runs are deterministic.
inline uint8_t hard_decision(double llr) { return llr > 0.0 ? 0 : 1; }

enum class MetricMode { Approx, Exact };

namespace detail {
// log(1 + e^t) without overflow
inline double softplus(double t) {
    if (t > 35.0) return t;
    if (t < -35.0) return std::exp(t);
    return std::log1p(std::exp(t));
}
} // namespace detail

// Per-bit branch metric, always <= 0. Approximate mode: 0 on agreement with the
// hard decision, -|llr| otherwise. Exact mode: -log(1 + e^(-(1-2u)*llr)).
inline double branch_metric(double llr, uint8_t u_hat, MetricMode mode = MetricMode::Approx) {
    if (mode == MetricMode::Approx)
        return (u_hat == hard_decision(llr)) ? 0.0 : -std::fabs(llr);
    const double x = (1.0 - 2.0 * u_hat) * llr;
    return -detail::softplus(-x);
}

// List-decoding path metric: nonnegative, penalizes disagreement by |llr|.
inline double list_pm_update(double pm_prev, double llr, uint8_t u_hat) {
    return (u_hat == hard_decision(llr)) ? pm_prev : pm_prev + std::fabs(llr);
}

// Biased Fano metric recursion; the chain starts at the expected full-path
// metric (bias_total) and each step deducts the scaled expected branch metric.
inline double fano_metric_step(double mu_prev, double llr, uint8_t u_hat, double log_one_minus_pe,
                               double bias_scale, MetricMode mode = MetricMode::Approx) {
    return mu_prev + branch_metric(llr, u_hat, mode) - bias_scale * log_one_minus_pe;
}

// Scale factor for the adaptive bias: ratio of actual to expected partial-path
// log-probability sums. Adaptation only applies when the result exceeds 1.
inline std::optional<double> compute_alpha(double actual_partial, double expected_partial) {
    if (expected_partial == 0.0) return std::nullopt;
    return actual_partial / expected_partial;
}

// Smallest multiple of the quantizer step that is >= alpha.
inline double quantize_alpha(double alpha, int delta_q) {
    if (delta_q <= 0) throw std::invalid_argument("quantize_alpha: step must be positive");
    return std::ceil(alpha / delta_q) * delta_q;
}

// Retroactive correction after a bias-scale change: adds the bias difference
// for the remaining path at that node. Equals recomputing the metric from
// scratch with the new scale.
inline double retro_update(double mu, double bias_tail_at_node, double bias_scale) {
    return mu + (bias_scale - 1.0) * bias_tail_at_node;
}

} // namespace pactree
