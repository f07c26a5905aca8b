#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "common.hpp"

namespace pactree {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// sigma for BPSK over AWGN at the given Eb/N0 and code rate
inline double noise_sigma(double ebn0_db, double rate) {
    return 1.0 / std::sqrt(2.0 * rate * db_to_linear(ebn0_db));
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace dega {

// Two-regime analytic approximation of the Gaussian mixing function phi(x)
// (exponential form below the crossover at x = 10, tail form above it).
inline double phi(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 10.0) return std::exp(-0.4527 * std::pow(x, 0.86) + 0.0218);
    return std::sqrt(M_PI / x) * std::exp(-x / 4.0) * (1.0 - 10.0 / (7.0 * x));
}

// phi is strictly decreasing; invert by bisection. Construction is offline,
// robustness beats speed here.
inline double phi_inv(double y) {
    if (y >= 1.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (phi(hi) > y && hi < 1e9) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (phi(mid) > y) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace dega

// Mean decision-LLR per bit index from density evolution with Gaussian
// approximation, starting from 2/sigma^2 at the channel stage. The MSB-first
// walk over the index bits follows the factor graph: a 0-bit degrades (f), a
// 1-bit upgrades (g, doubling the mean).
inline std::vector<double> dega_reliability(int N, double design_snr_db, double rate = 0.5) {
    const int n = log2_exact(static_cast<std::size_t>(N));
    const double sigma = noise_sigma(design_snr_db, rate);
    const double m0 = 2.0 / (sigma * sigma);
    std::vector<double> mean(N);
    for (int i = 0; i < N; ++i) {
        double m = m0;
        for (int s = n - 1; s >= 0; --s) {
            if ((i >> s) & 1) m = 2.0 * m;
            else {
                double t = 1.0 - dega::phi(m);
                m = dega::phi_inv(1.0 - t * t);
            }
        }
        mean[i] = m;
    }
    return mean;
}

// Bit-channel error probability from the DEGA mean, clamped so log(1-pe)
// stays finite.
inline double pe_from_reliability(double mean_llr) {
    double pe = q_function(std::sqrt(mean_llr / 2.0));
    return std::clamp(pe, 1e-12, 0.5);
}

inline int row_weight_log2(int index) { return popcount_u32(static_cast<uint32_t>(index)); }

// RM-polar selection: heaviest rows first, reliability breaks ties inside the
// boundary weight class.
inline std::vector<int> rm_profile(int N, int K, const std::vector<double>& reliability) {
    if (K > N) throw std::invalid_argument("rm_profile: K > N");
    std::vector<int> idx(N);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        int wa = row_weight_log2(a), wb = row_weight_log2(b);
        if (wa != wb) return wa > wb;
        if (reliability[a] != reliability[b]) return reliability[a] > reliability[b];
        return a > b;
    });
    std::vector<int> info(idx.begin(), idx.begin() + K);
    std::sort(info.begin(), info.end());
    return info;
}

inline double polarization_weight(int index, int n) {
    double w = 0.0;
    for (int j = 0; j < n; ++j)
        if ((index >> j) & 1) w += std::pow(2.0, j * 0.25);
    return w;
}

inline std::vector<int> pw_profile(int N, int K) {
    if (K > N) throw std::invalid_argument("pw_profile: K > N");
    const int n = log2_exact(static_cast<std::size_t>(N));
    std::vector<int> idx(N);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        double wa = polarization_weight(a, n), wb = polarization_weight(b, n);
        if (wa != wb) return wa > wb;
        return a > b;
    });
    std::vector<int> info(idx.begin(), idx.begin() + K);
    std::sort(info.begin(), info.end());
    return info;
}

// PW with the minimum-row-weight picks frozen and replaced by the best
// excluded indices of strictly larger row weight.
inline std::vector<int> pw_modified(int N, int K) {
    const int n = log2_exact(static_cast<std::size_t>(N));
    std::vector<int> info = pw_profile(N, K);
    int wmin = n + 1;
    for (int i : info) wmin = std::min(wmin, row_weight_log2(i));

    std::vector<uint8_t> selected(N, 0);
    for (int i : info) selected[i] = 1;
    std::vector<int> kept, pool;
    for (int i : info)
        if (row_weight_log2(i) > wmin) kept.push_back(i);
    for (int i = 0; i < N; ++i)
        if (!selected[i] && row_weight_log2(i) > wmin) pool.push_back(i);
    std::sort(pool.begin(), pool.end(), [&](int a, int b) {
        double wa = polarization_weight(a, n), wb = polarization_weight(b, n);
        if (wa != wb) return wa > wb;
        return a > b;
    });
    const std::size_t need = static_cast<std::size_t>(K) - kept.size();
    if (pool.size() < need) throw std::runtime_error("pw_modified: replacement pool exhausted");
    kept.insert(kept.end(), pool.begin(), pool.begin() + need);
    std::sort(kept.begin(), kept.end());
    return kept;
}

// Critical set: the first leaf of every maximal all-information subtree of
// the polar decoding tree. Flags only information positions.
inline BitVec critical_set(int N, const std::vector<int>& info_set) {
    BitVec is_info(N, 0);
    for (int i : info_set) is_info[i] = 1;
    BitVec flags(N, 0);
    // walk blocks top-down; a fully-information block contributes its head
    struct Walk {
        const BitVec& info;
        BitVec& out;
        void run(int a, int len) {
            bool all = true;
            for (int i = a; i < a + len; ++i)
                if (!info[i]) { all = false; break; }
            if (all) { out[a] = 1; return; }
            if (len == 1) return;
            run(a, len / 2);
            run(a + len / 2, len / 2);
        }
    } w{is_info, flags};
    w.run(0, N);
    return flags;
}

// Fallback mode: flag the q least-reliable information positions.
inline BitVec critical_set_least_reliable(int N, const std::vector<int>& info_set,
                                          const std::vector<double>& reliability, int q) {
    std::vector<int> idx = info_set;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (reliability[a] != reliability[b]) return reliability[a] < reliability[b];
        return a < b;
    });
    BitVec flags(N, 0);
    for (int k = 0; k < std::min<int>(q, idx.size()); ++k) flags[idx[k]] = 1;
    return flags;
}

struct BiasTables {
    double total = 0.0;             // B = sum log(1 - pe)
    std::vector<double> tail;       // B^c_i = sum_{j>i} log(1 - pe_j); tail[N-1] = 0
    std::vector<double> log_terms;  // log(1 - pe_i)
};

// Biased metric step in remaining-bias form: mu = (actual cost so far) +
// scale * tail. The tail product added at bit-1 cancels exactly at the next
// bit, so an agreeing path ends at metric 0 with no rounding drift.
inline double biased_step(double mu_prev, double branch_m, const BiasTables& b, int bit,
                          double scale) {
    const double before = (bit == 0) ? b.total : b.tail[bit - 1];
    return (mu_prev - scale * before + branch_m) + scale * b.tail[static_cast<std::size_t>(bit)];
}

inline BiasTables bias_tables(const std::vector<double>& pe) {
    const std::size_t N = pe.size();
    BiasTables b;
    b.log_terms.resize(N);
    b.tail.resize(N);
    for (std::size_t i = 0; i < N; ++i) b.log_terms[i] = std::log1p(-pe[i]);
    double acc = 0.0;
    for (std::size_t i = N; i-- > 0;) {
        b.tail[i] = acc;
        acc += b.log_terms[i];
    }
    b.total = acc;
    return b;
}

enum class ProfileKind { RM, DEGA, PW, PWModified };

struct RateProfile {
    int N = 0;
    int K = 0;                      // profiled positions (message + CRC bits)
    std::vector<int> info_set;      // sorted
    BitVec is_info;                 // N flags
    std::vector<double> reliability;
    std::vector<double> pe;
    BitVec critical;                // N flags, info positions only
    BiasTables bias;

    int info_rank(int bit_index) const {
        auto it = std::lower_bound(info_set.begin(), info_set.end(), bit_index);
        return static_cast<int>(it - info_set.begin());
    }
};

// design_snr_db drives the selection reliability; bias_design_snr_db drives
// the error probabilities behind the Fano bias tables (they differ in the
// reference setups: RM ties at 3.5 dB, bias at 4 dB).
inline RateProfile build_profile(int N, int K, ProfileKind kind, double design_snr_db,
                                 double bias_design_snr_db) {
    if (K > N || K <= 0) throw std::invalid_argument("build_profile: bad K");
    RateProfile p;
    p.N = N;
    p.K = K;
    const double rate = static_cast<double>(K) / N;
    p.reliability = dega_reliability(N, design_snr_db, rate);
    switch (kind) {
        case ProfileKind::RM: p.info_set = rm_profile(N, K, p.reliability); break;
        case ProfileKind::DEGA: {
            std::vector<int> idx(N);
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                if (p.reliability[a] != p.reliability[b]) return p.reliability[a] > p.reliability[b];
                return a > b;
            });
            p.info_set.assign(idx.begin(), idx.begin() + K);
            std::sort(p.info_set.begin(), p.info_set.end());
            break;
        }
        case ProfileKind::PW: p.info_set = pw_profile(N, K); break;
        case ProfileKind::PWModified: p.info_set = pw_modified(N, K); break;
    }
    p.is_info.assign(N, 0);
    for (int i : p.info_set) p.is_info[i] = 1;
    std::vector<double> bias_mean = dega_reliability(N, bias_design_snr_db, rate);
    p.pe.resize(N);
    for (int i = 0; i < N; ++i) p.pe[i] = pe_from_reliability(bias_mean[i]);
    p.bias = bias_tables(p.pe);
    p.critical = critical_set(N, p.info_set);
    return p;
}

// Profile file: header "N K", then K sorted indices, one per line.
inline void save_profile(const RateProfile& p, std::ostream& os) {
    os << p.N << " " << p.K << "\n";
    for (int i : p.info_set) os << i << "\n";
}

inline void save_profile(const RateProfile& p, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write profile file: " + path);
    save_profile(p, f);
}

inline std::pair<int, std::vector<int>> load_profile_indices(std::istream& is) {
    int N = 0, K = 0;
    if (!(is >> N >> K)) throw std::runtime_error("bad profile file header");
    std::vector<int> info(K);
    for (int k = 0; k < K; ++k)
        if (!(is >> info[k])) throw std::runtime_error("truncated profile file");
    if (!std::is_sorted(info.begin(), info.end()))
        throw std::runtime_error("profile indices must be sorted");
    for (int i : info)
        if (i < 0 || i >= N) throw std::runtime_error("profile index out of range");
    return {N, info};
}

inline RateProfile build_profile_from_indices(int N, const std::vector<int>& info,
                                              double bias_design_snr_db) {
    RateProfile p;
    p.N = N;
    p.K = static_cast<int>(info.size());
    p.info_set = info;
    p.is_info.assign(N, 0);
    for (int i : info) p.is_info[i] = 1;
    const double rate = static_cast<double>(p.K) / N;
    p.reliability = dega_reliability(N, bias_design_snr_db, rate);
    p.pe.resize(N);
    for (int i = 0; i < N; ++i) p.pe[i] = pe_from_reliability(p.reliability[i]);
    p.bias = bias_tables(p.pe);
    p.critical = critical_set(N, p.info_set);
    return p;
}

inline RateProfile load_profile(const std::string& path, double bias_design_snr_db) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read profile file: " + path);
    auto [N, info] = load_profile_indices(f);
    return build_profile_from_indices(N, info, bias_design_snr_db);
}

} // namespace pactree
