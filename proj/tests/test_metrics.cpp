#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pactree/construction.hpp"
#include "pactree/metrics.hpp"

using namespace pactree;

TEST_CASE("hard decision") {
    CHECK(hard_decision(2.3) == 0);
    CHECK(hard_decision(-0.1) == 1);
    CHECK(hard_decision(0.0) == 1);  // tie resolves to 1
}

TEST_CASE("branch metric") {
    CHECK(branch_metric(3.2, 0) == 0.0);
    CHECK(branch_metric(-1.5, 0) == -1.5);
    CHECK(branch_metric(-1.5, 1) == 0.0);

    // approximate values are exactly 0 or -|llr|; exact mode within ln 2
    uint64_t s = 7;
    for (int t = 0; t < 2000; ++t) {
        s = splitmix64(s);
        double llr = (static_cast<double>(s % 4000) - 2000.0) / 100.0;
        for (uint8_t u : {0, 1}) {
            double ma = branch_metric(llr, u, MetricMode::Approx);
            double me = branch_metric(llr, u, MetricMode::Exact);
            CHECK((ma == 0.0 || ma == -std::fabs(llr)));
            CHECK(me < 0.0);
            CHECK(me > -std::fabs(llr) - std::log(2.0));
            CHECK(std::fabs(ma - me) <= std::log(2.0) + 1e-12);
        }
    }
}

TEST_CASE("list path metric") {
    CHECK(list_pm_update(0.0, 2.0, 0) == 0.0);
    CHECK(list_pm_update(0.0, 2.0, 1) == 2.0);
    CHECK(list_pm_update(1.5, -3.0, 0) == 4.5);
}

TEST_CASE("fano metric recursion") {
    // single step, agreement, pe = 0.5, scale 1: delta = -ln(0.5)
    double mu = fano_metric_step(0.0, 1.0, 0, std::log(0.5), 1.0);
    CHECK_THAT(mu, Catch::Matchers::WithinAbs(0.6931471805599453, 1e-12));

    // random chain equals the unrolled sum oracle
    uint64_t s = 42;
    const int n = 64;
    std::vector<double> llr(n), lp(n);
    std::vector<uint8_t> u(n);
    for (int i = 0; i < n; ++i) {
        s = splitmix64(s);
        llr[i] = (static_cast<double>(s % 1000) - 500.0) / 50.0;
        s = splitmix64(s);
        lp[i] = -static_cast<double>(s % 100) / 200.0;
        s = splitmix64(s);
        u[i] = static_cast<uint8_t>(s & 1);
    }
    double B = -3.5;
    double chain = B;
    for (int i = 0; i < n; ++i) chain = fano_metric_step(chain, llr[i], u[i], lp[i], 1.0);
    double unrolled = B;
    for (int i = 0; i < n; ++i) unrolled += branch_metric(llr[i], u[i]);
    for (int i = 0; i < n; ++i) unrolled -= lp[i];
    CHECK_THAT(chain, Catch::Matchers::WithinAbs(unrolled, 1e-9));

    // noiseless full pass: all branch metrics zero, bias terms cancel B
    std::vector<double> pe(n, 0.1);
    auto tables = bias_tables(pe);
    double mu2 = tables.total;
    for (int i = 0; i < n; ++i) mu2 = fano_metric_step(mu2, +4.0, 0, tables.log_terms[i], 1.0);
    CHECK_THAT(mu2, Catch::Matchers::WithinAbs(0.0, 1e-9));
}

TEST_CASE("fano and list metrics rank siblings identically") {
    uint64_t s = 11;
    for (int t = 0; t < 2000; ++t) {
        s = splitmix64(s);
        double llr = (static_cast<double>(s % 2001) - 1000.0) / 100.0;
        double pm0 = list_pm_update(0.0, llr, 0);
        double pm1 = list_pm_update(0.0, llr, 1);
        double mu0 = fano_metric_step(0.0, llr, 0, -0.25, 1.0);
        double mu1 = fano_metric_step(0.0, llr, 1, -0.25, 1.0);
        if (pm0 < pm1) CHECK(mu0 > mu1);
        if (pm1 < pm0) CHECK(mu1 > mu0);
    }
}

TEST_CASE("alpha computation and quantization") {
    CHECK(*compute_alpha(-10.0, -10.0) == 1.0);
    CHECK(*compute_alpha(-20.0, -10.0) == 2.0);
    CHECK(*compute_alpha(-5.0, -10.0) == 0.5);  // adaptation skipped by caller
    CHECK_FALSE(compute_alpha(-5.0, 0.0).has_value());

    CHECK(quantize_alpha(1.3, 2) == 2.0);
    CHECK(quantize_alpha(2.0, 2) == 2.0);
    CHECK(quantize_alpha(2.1, 2) == 4.0);
}

TEST_CASE("retroactive update equals from-scratch recomputation") {
    CHECK(retro_update(-3.0, -2.0, 1.0) == -3.0);
    CHECK(retro_update(-3.0, -2.0, 2.0) == -5.0);

    // chain with scale 1, retro-correct every stored value, compare against
    // recomputing with the scaled bias from the start
    uint64_t s = 5;
    const int n = 48;
    std::vector<double> llr(n), pe(n);
    std::vector<uint8_t> u(n);
    for (int i = 0; i < n; ++i) {
        s = splitmix64(s);
        llr[i] = (static_cast<double>(s % 1000) - 500.0) / 50.0;
        s = splitmix64(s);
        pe[i] = 0.01 + static_cast<double>(s % 40) / 100.0;
        s = splitmix64(s);
        u[i] = static_cast<uint8_t>(s & 1);
    }
    auto tb = bias_tables(pe);
    const double alpha_q = 2.0;

    std::vector<double> stored(n);
    double mu = tb.total;
    for (int i = 0; i < n; ++i) {
        mu = fano_metric_step(mu, llr[i], u[i], tb.log_terms[i], 1.0);
        stored[i] = mu;
    }
    for (int i = 0; i < n; ++i) stored[i] = retro_update(stored[i], tb.tail[i], alpha_q);

    double mu_scratch = alpha_q * tb.total;  // the scaled expectation of the full path
    for (int i = 0; i < n; ++i) {
        mu_scratch = fano_metric_step(mu_scratch, llr[i], u[i], tb.log_terms[i], alpha_q);
        CHECK_THAT(stored[i], Catch::Matchers::WithinAbs(mu_scratch, 1e-9));
    }
}
