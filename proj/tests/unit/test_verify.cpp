#include <doctest.h>

#include "icb/harness/verify.hpp"

namespace {

icb::VerifyOptions quick_options() {
    icb::VerifyOptions opt;
    opt.moment_cases = 500;
    opt.ts_moment_cases = 500;
    opt.affinity_states = 60;
    opt.perturbation_cases = 500;
    opt.simplex_steps = 2000;
    opt.simplex_seeds = 3;
    opt.simplex_arm_counts = {2, 4};
    opt.validity_horizon = 500;
    opt.validity_trials = 3;
    opt.threads = 2;
    return opt;
}

}  // namespace

TEST_CASE("every suite passes at reduced sizes") {
    const auto opt = quick_options();
    for (const auto& name : icb::all_suites()) {
        auto res = icb::run_suite(name, opt);
        INFO(name);
        for (const auto& c : res.checks) {
            INFO(c.name << ": " << c.detail);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("suite JSON report shape") {
    auto opt = quick_options();
    auto res = icb::run_suite("perturbation", opt);
    auto j = icb::suites_to_json({res});
    CHECK(j["pass"].is_boolean());
    CHECK(j["suites"].size() == 1);
    CHECK(j["suites"][0]["suite"] == "perturbation");
    CHECK(j["suites"][0]["checks"].size() == res.checks.size());
}

TEST_CASE("unknown suite name is rejected") {
    CHECK_THROWS_AS((void)icb::run_suite("nope", quick_options()), std::invalid_argument);
}
