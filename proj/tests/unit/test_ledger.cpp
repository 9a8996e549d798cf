#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "icb/ledger.hpp"
#include "icb/rng.hpp"
#include "icb/simplex.hpp"

using icb::RegretLedger;
using icb::RngStream;
using icb::SimplexDistribution;

TEST_CASE("identical losses across arms give zero pseudo-regret") {
    RegretLedger ledger(3);
    SimplexDistribution pi({0.2, 0.3, 0.5});
    for (int t = 1; t <= 50; ++t) {
        const double c = 0.25 + 0.5 * ((t * 7) % 3) / 3.0;
        ledger.record(pi, {c, c, c}, t % 3);
    }
    CHECK(std::abs(ledger.pseudo_regret(50)) <= 1e-12);
}

TEST_CASE("single round arithmetic: pi=(.5,.5), l=(0,1)") {
    RegretLedger ledger(2);
    ledger.record(SimplexDistribution({0.5, 0.5}), {0.0, 1.0}, 0);
    CHECK(ledger.pseudo_regret(1) == doctest::Approx(0.5));
    CHECK(ledger.realized_regret(1) == doctest::Approx(0.0));
}

TEST_CASE("matches an independent double-loop recomputation") {
    // random 5x3 instance, fixed pi sequence
    RngStream rng(2024, 0);
    std::vector<std::vector<double>> losses(5, std::vector<double>(3));
    std::vector<std::vector<double>> pis;
    for (auto& row : losses) {
        for (double& v : row) v = rng.next_unit();
    }
    for (int t = 0; t < 5; ++t) {
        double a = 0.2 + 0.1 * t, b = 0.3;
        pis.push_back({a, b, 1.0 - a - b});
    }

    RegretLedger ledger(3);
    for (int t = 0; t < 5; ++t) {
        ledger.record(SimplexDistribution(pis[static_cast<std::size_t>(t)]),
                      losses[static_cast<std::size_t>(t)], 0);
    }

    double expected = 0.0;
    for (int t = 0; t < 5; ++t) {
        for (int i = 0; i < 3; ++i) {
            expected += pis[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] *
                        losses[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
        }
    }
    double best = 1e300;
    for (int i = 0; i < 3; ++i) {
        double cum = 0.0;
        for (int t = 0; t < 5; ++t) cum += losses[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
        best = std::min(best, cum);
    }
    CHECK(std::abs(ledger.pseudo_regret(5) - (expected - best)) <= 1e-9);
}

TEST_CASE("queries off the accumulated round count are errors") {
    RegretLedger ledger(2);
    ledger.record(SimplexDistribution({0.5, 0.5}), {0.1, 0.9}, 1);
    CHECK_THROWS_AS((void)ledger.pseudo_regret(2), std::out_of_range);
    CHECK_THROWS_AS((void)ledger.pseudo_regret(0), std::out_of_range);
    CHECK_NOTHROW((void)ledger.pseudo_regret(1));
}

TEST_CASE("comparator is re-minimized at query time") {
    // arm 0 leads early, arm 1 overtakes; the minimum must follow.
    RegretLedger ledger(2);
    SimplexDistribution pi({0.5, 0.5});
    ledger.record(pi, {1.0, 0.0}, 0);
    CHECK(ledger.per_arm_cumulative()[0] == doctest::Approx(1.0));
    CHECK(ledger.pseudo_regret(1) == doctest::Approx(0.5));  // best arm is 1
    ledger.record(pi, {0.0, 1.0}, 0);
    ledger.record(pi, {0.0, 1.0}, 0);
    // cumulative: arm0 = 1, arm1 = 2 -> best arm flipped to 0
    CHECK(ledger.pseudo_regret(3) == doctest::Approx(1.5 - 1.0));
}
