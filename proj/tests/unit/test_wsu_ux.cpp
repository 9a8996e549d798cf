#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "icb/algorithms/wsu_ux.hpp"
#include "icb/rng.hpp"

using icb::BanditFeedback;
using icb::bwsu_tuned;
using icb::RngStream;
using icb::sample_arm;
using icb::wsu_ux_tuned;
using icb::WsuUxParams;
using icb::WsuUxState;

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(WsuUxState(2, {0.05, 0.2, false}));  // eta K / gamma = 0.5
    CHECK_THROWS_AS(WsuUxState(2, {0.1, 0.1, false}), std::invalid_argument);  // ratio 2
    CHECK_THROWS_AS(WsuUxState(2, {0.0, 0.2, false}), std::invalid_argument);
    CHECK_THROWS_AS(WsuUxState(2, {0.05, 1.0, false}), std::invalid_argument);
    // biased accepts the tuned coupling gamma = eta K / 2 even though the
    // plain ratio rule rejects it
    CHECK_NOTHROW(WsuUxState(2, {0.1, 0.1, true}));
    CHECK_THROWS_AS(WsuUxState(2, {0.1, 0.3, true}), std::invalid_argument);
}

TEST_CASE("mixture definition pi~ = gamma/K + (1-gamma) pi") {
    WsuUxState s(2, {0.05, 0.2, false});
    CHECK(s.distribution()[0] == doctest::Approx(0.2 / 2 + 0.8 * 0.5));
    CHECK(s.pi()[0] == doctest::Approx(0.5));
}

TEST_CASE("zero loss is a fixed point") {
    WsuUxState s(2, {0.05, 0.2, false});
    s.update({1, 0, 0.0});
    CHECK(s.pi()[0] == doctest::Approx(0.5));
    CHECK(s.pi()[1] == doctest::Approx(0.5));
}

TEST_CASE("hand-evaluated unbiased step: eta=0.05, gamma=0.2, arm 0, loss 1") {
    // pi~ = (0.5, 0.5); lhat = (2, 0); lambda = 1; pi' = (0.475, 0.525)
    WsuUxState s(2, {0.05, 0.2, false});
    s.update({1, 0, 1.0});
    CHECK(s.pi()[0] == doctest::Approx(0.475).epsilon(1e-12));
    CHECK(s.pi()[1] == doctest::Approx(0.525).epsilon(1e-12));
}

TEST_CASE("hand-evaluated biased step: same setting") {
    // l~ = 1 - 0.05/0.5 = 0.9; lhat = (1.8, 0); lambda = 0.9
    WsuUxState s(2, {0.05, 0.2, true});
    s.update({1, 0, 1.0});
    CHECK(s.pi()[0] == doctest::Approx(0.4775).epsilon(1e-12));
    CHECK(s.pi()[1] == doctest::Approx(0.5225).epsilon(1e-12));
}

TEST_CASE("sum is conserved to machine precision over long runs") {
    WsuUxState s(4, {0.01, 0.1, false});
    RngStream rng(11, 0);
    for (int t = 1; t <= 20000; ++t) {
        const int arm = sample_arm(s.distribution(), rng);
        s.update({t, arm, rng.next_unit()});
    }
    CHECK(std::abs(s.pi().sum() - 1.0) <= 1e-11);
    CHECK(s.pi().strictly_interior());
}

TEST_CASE("biased losses stay in [0, l] on reachable tuned states, K in {2,4,8}") {
    // gamma = eta K / 2 coupling; trajectories from the uniform start with
    // adversarially random arms (every arm is reachable under the mixture).
    for (int k : {2, 4, 8}) {
        auto params = bwsu_tuned(k, 20000);
        WsuUxState s(k, params);
        RngStream rng(100 + k, 0);
        for (int t = 1; t <= 5000; ++t) {
            for (int i = 0; i < k; ++i) {
                const double full = 1.0;
                const double biased = s.biased_loss(i, full);
                REQUIRE(biased >= 0.0);
                REQUIRE(biased <= full);
            }
            const int arm = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
            s.update({t, arm, rng.next_unit()});
        }
    }
}

TEST_CASE("tuned constructors satisfy their own validity rules") {
    for (int k : {2, 4, 8, 32}) {
        for (std::int64_t T : {4000, 64000}) {
            auto ub = wsu_ux_tuned(k, T);
            CHECK(ub.eta * k / ub.gamma <= 0.5 + 1e-12);
            CHECK_FALSE(ub.biased);
            auto b = bwsu_tuned(k, T);
            CHECK(b.gamma == doctest::Approx(b.eta * k / 2.0));
            CHECK(b.biased);
            CHECK_NOTHROW(WsuUxState(k, ub));
            CHECK_NOTHROW(WsuUxState(k, b));
        }
    }
    CHECK(bwsu_tuned(2, 10000).eta == doctest::Approx(std::sqrt(std::log(2.0) / 20000.0)));
}
