#include <doctest.h>

#include <cmath>

#include "icb/algorithms/exp3.hpp"
#include "icb/rng.hpp"

using icb::BanditFeedback;
using icb::Exp3State;

TEST_CASE("zero loss is a fixed point") {
    Exp3State s(3, 0.2);
    auto before = s.distribution().weights();
    s.update({1, 1, 0.0});
    for (int i = 0; i < 3; ++i) {
        CHECK(s.distribution()[i] == doctest::Approx(before[static_cast<std::size_t>(i)]));
    }
    CHECK(s.round_index() == 2);
}

TEST_CASE("hand-evaluated step: K=2, eta=0.1, arm 0, loss 1") {
    Exp3State s(2, 0.1);
    s.update({1, 0, 1.0});
    // lhat = (2, 0); pi' = (e^{-0.2}, 1) / (e^{-0.2} + 1)
    const double e = std::exp(-0.2);
    CHECK(s.distribution()[0] == doctest::Approx(e / (e + 1.0)).epsilon(1e-12));
    CHECK(s.distribution()[1] == doctest::Approx(1.0 / (e + 1.0)).epsilon(1e-12));
    CHECK(s.distribution()[0] == doctest::Approx(0.45017).epsilon(1e-4));
    CHECK(s.distribution()[1] == doctest::Approx(0.54983).epsilon(1e-4));
}

TEST_CASE("renormalization keeps an exact simplex over many steps") {
    icb::RngStream rng(4, 0);
    Exp3State s(4, 0.05);
    for (int t = 1; t <= 2000; ++t) {
        const int arm = icb::sample_arm(s.distribution(), rng);
        s.update({t, arm, (t % 7) / 7.0});
    }
    CHECK(std::abs(s.distribution().sum() - 1.0) <= 1e-12);
    CHECK(s.distribution().strictly_interior());
}

TEST_CASE("tuned eta matches the closed form") {
    CHECK(icb::exp3_tuned_eta(2, 40000) ==
          doctest::Approx(std::sqrt(2.0 * std::log(2.0) / (2.0 * 40000.0))));
}
