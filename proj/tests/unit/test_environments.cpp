#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "icb/env/environment.hpp"

using icb::FixedMatrixEnv;
using icb::LossRange;
using icb::RngStream;
using icb::StochasticBernoulliEnv;
using icb::SwitchingBestArmEnv;
using icb::UniformRandomEnv;

TEST_CASE("bernoulli: values are 0/1 and frequencies match the means") {
    StochasticBernoulliEnv env({0.0, 1.0}, RngStream(1, 0));
    for (int t = 1; t <= 200; ++t) {
        auto l = env.losses_at(t);
        CHECK(l[0] == 0.0);
        CHECK(l[1] == 1.0);
    }

    StochasticBernoulliEnv biased({0.2, 0.7}, RngStream(2, 0));
    const int n = 100000;
    double s0 = 0.0, s1 = 0.0;
    for (int t = 1; t <= n; ++t) {
        auto l = biased.losses_at(t);
        s0 += l[0];
        s1 += l[1];
    }
    // 3-sigma binomial bands
    CHECK(std::abs(s0 / n - 0.2) < 3.0 * std::sqrt(0.2 * 0.8 / n));
    CHECK(std::abs(s1 / n - 0.7) < 3.0 * std::sqrt(0.7 * 0.3 / n));
}

TEST_CASE("switching-best-arm: K=2, P=100") {
    SwitchingBestArmEnv env(2, 100);
    CHECK(env.losses_at(50) == std::vector<double>{0.0, 1.0});
    CHECK(env.losses_at(150) == std::vector<double>{1.0, 0.0});
    CHECK(env.losses_at(100) == std::vector<double>{0.0, 1.0});
    CHECK(env.losses_at(101) == std::vector<double>{1.0, 0.0});
    CHECK(env.losses_at(201) == std::vector<double>{0.0, 1.0});
}

TEST_CASE("oblivious generators: output depends only on (seed, t)") {
    StochasticBernoulliEnv a({0.3, 0.6, 0.9}, RngStream(7, 1));
    StochasticBernoulliEnv b({0.3, 0.6, 0.9}, RngStream(7, 1));
    // consume a out of order and far ahead; b fresh
    (void)a.losses_at(500);
    (void)a.losses_at(3);
    for (std::int64_t t : {1, 2, 17, 400, 999}) {
        CHECK(a.losses_at(t) == b.losses_at(t));
    }

    UniformRandomEnv u1(2, LossRange::kSymmetric, RngStream(9, 2));
    UniformRandomEnv u2(2, LossRange::kSymmetric, RngStream(9, 2));
    (void)u1.losses_at(123);
    CHECK(u1.losses_at(7) == u2.losses_at(7));
    for (int t = 1; t <= 100; ++t) {
        for (double v : u1.losses_at(t)) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("fixed matrix file: echo, comments, exhaustion") {
    const char* path = "icb_test_matrix.csv";
    {
        std::ofstream out(path);
        out << "# loss matrix, two arms\n";
        out << "0.2,0.8\n";
        out << "\n";
        out << "0.4,0.6\n";
    }
    auto env = FixedMatrixEnv::from_file(path);
    CHECK(env.num_arms() == 2);
    CHECK(env.rounds_available() == 2);
    CHECK(env.losses_at(1) == std::vector<double>{0.2, 0.8});
    CHECK(env.losses_at(2) == std::vector<double>{0.4, 0.6});
    CHECK_THROWS_AS((void)env.losses_at(3), std::runtime_error);
    std::remove(path);

    CHECK_THROWS_AS((void)FixedMatrixEnv::from_file("no_such_file.csv"), std::runtime_error);
    CHECK_THROWS_AS(FixedMatrixEnv({{0.2, 1.4}}), std::invalid_argument);  // out of range
    CHECK_THROWS_AS(FixedMatrixEnv({{0.2, 0.4}, {0.1}}), std::invalid_argument);  // ragged
}
