#include <doctest.h>

#include "icb/oracles/validity.hpp"

using icb::RngStream;
using icb::oracle::min_prob_scan;

TEST_CASE("literal constants: K=2, c0=K breaches at round 1") {
    auto scan = min_prob_scan(2, 2.0, 100, 3, RngStream(1, 0));
    REQUIRE(scan.first_breach_round.has_value());
    CHECK(*scan.first_breach_round == 1);
    CHECK(scan.total_breaches > 0);
    // trace still covers the whole horizon
    CHECK(scan.min_prob.size() == 100);
}

TEST_CASE("large offset: no breach and the floor C_t^2 eta_t^2 holds") {
    auto scan = min_prob_scan(2, 1e5, 2000, 5, RngStream(2, 0));
    CHECK_FALSE(scan.first_breach_round.has_value());
    CHECK(scan.total_breaches == 0);
    CHECK(scan.floor_violations() == 0);
}

TEST_CASE("zero losses: the pure-bias trace is still recorded") {
    // losses come from the scan's own rng; use the degenerate env by scanning
    // with the raw step instead
    std::vector<double> pi{0.5, 0.5};
    for (int t = 1; t <= 50; ++t) {
        const auto s = icb::ts_schedule(t, 1e5);
        pi = icb::ts_prod_step(pi, s.eta, s.c, t % 2, 0.0);
        double sum = 0.0;
        for (double w : pi) {
            REQUIRE(w > 0.0);
            REQUIRE(w < 1.0);
            sum += w;
        }
        REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    // the bias alone moves the weights
    CHECK(pi[0] != 0.5);
}

TEST_CASE("scan input validation") {
    CHECK_THROWS_AS((void)min_prob_scan(2, 2.0, 0, 1, RngStream(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS((void)min_prob_scan(2, 2.0, 10, 0, RngStream(0, 0)), std::invalid_argument);
}
