#include <doctest.h>

#include <cmath>

#include "icb/harness/emit.hpp"
#include "icb/harness/runner.hpp"

using icb::checkpoint_grid;
using icb::ExperimentResult;
using icb::parse_config_text;
using icb::scaling_report;

namespace {

icb::ExperimentConfig demo_config(const std::string& extra_run = "") {
    return parse_config_text(
        "[algorithm]\nid = lb-prod\ntuned = true\n"
        "[environment]\nid = bernoulli\nmeans = 0.2,0.8\n"
        "[run]\nhorizon = 2000\nseeds = 4\nbase_seed = 3\n" + extra_run);
}

}  // namespace

TEST_CASE("checkpoint grids") {
    CHECK(checkpoint_grid(0, icb::Cadence::kGeometric).empty());
    CHECK(checkpoint_grid(10, icb::Cadence::kGeometric) ==
          std::vector<std::int64_t>{1, 2, 4, 8, 10});
    CHECK(checkpoint_grid(8, icb::Cadence::kGeometric) ==
          std::vector<std::int64_t>{1, 2, 4, 8});
    CHECK(checkpoint_grid(3, icb::Cadence::kEveryRound) == std::vector<std::int64_t>{1, 2, 3});
}

TEST_CASE("T=0 yields an empty trajectory and zero regret") {
    auto cfg = parse_config_text(
        "[algorithm]\nid = exp3\neta = 0.1\n"
        "[environment]\nid = bernoulli\nmeans = 0.2,0.8\n"
        "[run]\nhorizon = 0\nseeds = 2\n");
    auto result = icb::run(cfg);
    CHECK(result.checkpoints.empty());
    CHECK(result.final_mean_regret() == 0.0);
    CHECK_FALSE(result.any_failed());
}

TEST_CASE("identical config+seeds twice produce identical serializations") {
    auto cfg = demo_config();
    auto r1 = icb::run(cfg);
    auto r2 = icb::run(cfg);
    CHECK(icb::regret_csv(r1) == icb::regret_csv(r2));
    CHECK(icb::result_to_json(r1, cfg).dump() == icb::result_to_json(r2, cfg).dump());
}

TEST_CASE("serial and multi-threaded execution agree byte for byte") {
    auto serial_cfg = demo_config("threads = 1\n");
    auto parallel_cfg = demo_config("threads = 8\n");
    auto r1 = icb::run(serial_cfg);
    auto r2 = icb::run(parallel_cfg);
    CHECK(icb::regret_csv(r1) == icb::regret_csv(r2));
    CHECK(icb::summary_csv(r1) == icb::summary_csv(r2));
}

TEST_CASE("learning beats uniform play on a separated instance") {
    auto cfg = demo_config();
    auto result = icb::run(cfg);
    // uniform play would accrue ~0.3 * 2000 = 600 regret; tuned LB-Prod must
    // do far better on a 0.6 gap
    CHECK(result.final_mean_regret() < 300.0);
    CHECK(result.final_mean_regret() > 0.0);
}

TEST_CASE("strict mode marks breaching runs failed; scan mode records events") {
    auto strict = parse_config_text(
        "[algorithm]\nid = ts-prod\n"
        "[environment]\nid = bernoulli\nmeans = 0.2,0.8\n"
        "[run]\nhorizon = 50\nseeds = 2\nmode = strict\n");
    auto r_strict = icb::run(strict);
    CHECK(r_strict.any_failed());  // c0 = K breaches at round 1

    auto scan = parse_config_text(
        "[algorithm]\nid = ts-prod\n"
        "[environment]\nid = bernoulli\nmeans = 0.2,0.8\n"
        "[run]\nhorizon = 50\nseeds = 2\nmode = scan\n");
    auto r_scan = icb::run(scan);
    CHECK_FALSE(r_scan.any_failed());
    std::size_t breaches = 0;
    for (const auto& s : r_scan.per_seed) breaches += s.breaches.size();
    CHECK(breaches > 0);
}

TEST_CASE("scaling report: synthetic exact-sqrt trajectory has ratio 2") {
    ExperimentResult a, b;
    a.algorithm_id = b.algorithm_id = "fixture";
    a.environment_id = b.environment_id = "fixture";
    a.horizon = 1000;
    b.horizon = 4000;
    a.checkpoints = {1000};
    b.checkpoints = {4000};
    a.mean = {std::sqrt(1000.0)};
    b.mean = {std::sqrt(4000.0)};
    auto rep = scaling_report({a, b});
    CHECK(rep.ratios.size() == 1);
    CHECK(rep.ratios[0] == doctest::Approx(2.0).epsilon(1e-12));

    ExperimentResult c = b;
    c.algorithm_id = "other";
    CHECK_THROWS_AS((void)scaling_report({a, c}), std::invalid_argument);
    CHECK_THROWS_AS((void)scaling_report({b, a}), std::invalid_argument);
}

TEST_CASE("the ledger books the sampling mixture for WSU-UX") {
    // wsu-ux plays from pi~, so on round one the expected loss must be
    // <pi~_1, l_1> = <uniform, l_1> regardless of eta.
    auto cfg = parse_config_text(
        "[algorithm]\nid = wsu-ux\neta = 0.02\ngamma = 0.2\n"
        "[environment]\nid = bernoulli\nmeans = 0.0,1.0\n"
        "[run]\nhorizon = 1\nseeds = 1\ncheckpoints = every-round\n");
    auto result = icb::run(cfg);
    // l_1 = (0, 1) deterministically; <pi~, l> = 0.5, best arm cumulative = 0
    CHECK(result.per_seed[0].pseudo_regret[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("explicit seed lists match the (base_seed, count) expansion") {
    auto by_count = parse_config_text(
        "[algorithm]\nid = exp3\neta = 0.1\n"
        "[environment]\nid = bernoulli\nmeans = 0.2,0.8\n"
        "[run]\nhorizon = 256\nbase_seed = 3\nseeds = 2\n");
    auto by_list = parse_config_text(
        "[algorithm]\nid = exp3\neta = 0.1\n"
        "[environment]\nid = bernoulli\nmeans = 0.2,0.8\n"
        "[run]\nhorizon = 256\nseed_list = 3,4\n");
    CHECK(icb::regret_csv(icb::run(by_count)) == icb::regret_csv(icb::run(by_list)));

    auto r = icb::run(by_list);
    CHECK(r.per_seed[0].seed == 3);
    CHECK(r.per_seed[1].seed == 4);

    auto mismatch = parse_config_text(
        "[algorithm]\nid = exp3\neta = 0.1\n"
        "[environment]\nid = bernoulli\nmeans = 0.2,0.8\n"
        "[run]\nhorizon = 16\nseeds = 3\nseed_list = 3,4\n");
    CHECK_THROWS_AS((void)icb::run(mismatch), icb::ConfigError);
}

TEST_CASE("tuned LB-Prod on the gap adversary lands in the coarse sqrt(KT log T) band") {
    auto cfg = parse_config_text(
        "[algorithm]\nid = lb-prod\ntuned = true\n"
        "[environment]\nid = switching\narms = 2\n"
        "[run]\nhorizon = 10000\nseeds = 20\nbase_seed = 1\nthreads = 2\n");
    auto result = icb::run(cfg);
    const double scale = std::sqrt(2.0 * 10000.0 * std::log(10000.0));
    CHECK(result.final_mean_regret() >= 0.2 * scale);
    CHECK(result.final_mean_regret() <= 3.0 * scale);
}

TEST_CASE("forecasting environment runs end to end with a strategic expert") {
    auto cfg = parse_config_text(
        "[algorithm]\nid = lb-prod\neta = 0.3\n"
        "[environment]\nid = forecasting\narms = 2\nstrategic = 0\n"
        "[run]\nhorizon = 20\nseeds = 1\n");
    auto result = icb::run(cfg);
    CHECK_FALSE(result.any_failed());
    CHECK(result.checkpoints.back() == 20);
}
