#pragma once

// Seeded experiment runs. One worker per seed; workers share nothing but the
// immutable config, and results are merged in seed order, so the output is
// identical no matter how many threads execute the seeds.
//
// Per round t: the environment draws the hidden loss vector, the learner's
// sampling distribution picks A_t, the ledger records <distribution, l_t>
// plus the per-arm totals, and the learner consumes (A_t, l_{t,A_t}).
// Strict mode fails the run on a simplex breach; scan mode records the
// breach event and continues on the repaired state.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "icb/harness/factory.hpp"
#include "icb/ledger.hpp"

namespace icb {

struct BreachRecord {
    std::string algorithm;
    std::int64_t round = 0;
    int arm = 0;
    double loss = 0.0;
    std::string detail;
};

struct SeedTrajectory {
    std::uint64_t seed = 0;
    std::vector<double> pseudo_regret;    // one entry per checkpoint
    std::vector<double> realized_regret;  // same grid
    std::vector<BreachRecord> breaches;
    bool failed = false;
    std::string fail_reason;
    double wall_seconds = 0.0;  // volatile; excluded from canonical output
};

struct ExperimentResult {
    std::string algorithm_id;
    std::string environment_id;
    std::int64_t horizon = 0;
    std::uint64_t base_seed = 0;
    std::string mode;
    std::string cadence;
    std::vector<std::int64_t> checkpoints;
    std::vector<SeedTrajectory> per_seed;
    std::vector<double> mean;     // cross-seed mean pseudo-regret per checkpoint
    std::vector<double> stderr_;  // cross-seed standard error per checkpoint

    double final_mean_regret() const { return mean.empty() ? 0.0 : mean.back(); }
    bool any_failed() const {
        for (const auto& s : per_seed) {
            if (s.failed) return true;
        }
        return false;
    }
};

inline std::vector<std::int64_t> checkpoint_grid(std::int64_t horizon, Cadence cadence) {
    std::vector<std::int64_t> grid;
    if (horizon <= 0) return grid;
    if (cadence == Cadence::kEveryRound) {
        grid.resize(static_cast<std::size_t>(horizon));
        for (std::int64_t t = 1; t <= horizon; ++t) grid[static_cast<std::size_t>(t - 1)] = t;
        return grid;
    }
    for (std::int64_t t = 1; t < horizon; t *= 2) grid.push_back(t);
    grid.push_back(horizon);
    return grid;
}

namespace detail {

inline SeedTrajectory run_one_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                                   const std::vector<std::int64_t>& checkpoints) {
    const auto t0 = std::chrono::steady_clock::now();
    SeedTrajectory traj;
    traj.seed = seed;

    // stream 0 feeds the environment, stream 1 the arm sampling
    auto env = make_environment(cfg.environment, RngStream(seed, 0), cfg.horizon());
    auto alg = make_algorithm(cfg.algorithm, env->num_arms(), cfg.horizon());
    check_range_compatibility(*alg, *env);
    RngStream sampler(seed, 1);
    RegretLedger ledger(env->num_arms());

    const RunMode mode = cfg.mode();
    std::size_t next_checkpoint = 0;
    for (std::int64_t t = 1; t <= cfg.horizon(); ++t) {
        env->begin_round(t, alg.get());
        const std::vector<double> losses = env->losses_at(t);
        const SimplexDistribution& dist = alg->distribution();
        const int arm = sample_arm(dist, sampler);
        ledger.record(dist, losses, arm);

        const BanditFeedback fb{t, arm, losses[static_cast<std::size_t>(arm)]};
        if (mode == RunMode::kStrict) {
            try {
                alg->update(fb);
            } catch (const SimplexBreachError& e) {
                traj.failed = true;
                traj.fail_reason = e.what();
                traj.breaches.push_back(
                    {alg->name(), e.event().round, e.event().arm, e.event().loss,
                     e.event().detail});
                break;
            }
        } else {
            if (auto ev = alg->update_scan(fb)) {
                traj.breaches.push_back({alg->name(), ev->round, ev->arm, ev->loss, ev->detail});
            }
        }
        if (next_checkpoint < checkpoints.size() && t == checkpoints[next_checkpoint]) {
            traj.pseudo_regret.push_back(ledger.pseudo_regret(t));
            traj.realized_regret.push_back(ledger.realized_regret(t));
            ++next_checkpoint;
        }
    }
    traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return traj;
}

}  // namespace detail

inline ExperimentResult run(const ExperimentConfig& cfg) {
    const std::vector<std::uint64_t> seeds = cfg.seed_values();
    // Upfront validation: building one (environment, algorithm) pair checks
    // every parameter precondition before any round runs.
    {
        auto env = make_environment(cfg.environment, RngStream(seeds[0], 0), cfg.horizon());
        auto alg = make_algorithm(cfg.algorithm, env->num_arms(), cfg.horizon());
        check_range_compatibility(*alg, *env);
    }
    if (cfg.horizon() < 0) throw ConfigError("horizon must be >= 0");

    ExperimentResult result;
    result.algorithm_id = cfg.algorithm.get("id");
    result.environment_id = cfg.environment.get("id");
    result.horizon = cfg.horizon();
    result.base_seed = cfg.base_seed();
    result.mode = cfg.mode() == RunMode::kStrict ? "strict" : "scan";
    result.cadence = cfg.cadence() == Cadence::kGeometric ? "geometric" : "every-round";
    result.checkpoints = checkpoint_grid(cfg.horizon(), cfg.cadence());

    const int n_seeds = static_cast<int>(seeds.size());
    result.per_seed.resize(static_cast<std::size_t>(n_seeds));
    const int threads = std::max(1, cfg.threads());

    if (threads == 1) {
        for (int s = 0; s < n_seeds; ++s) {
            result.per_seed[static_cast<std::size_t>(s)] =
                detail::run_one_seed(cfg, seeds[static_cast<std::size_t>(s)],
                                     result.checkpoints);
        }
    } else {
        std::vector<std::future<void>> workers;
        std::atomic<int> next{0};
        auto* slots = &result.per_seed;
        const auto* cps = &result.checkpoints;
        const auto* seedp = &seeds;
        for (int w = 0; w < threads; ++w) {
            workers.push_back(
                std::async(std::launch::async, [&cfg, slots, cps, seedp, &next, n_seeds] {
                    while (true) {
                        const int s = next.fetch_add(1);
                        if (s >= n_seeds) return;
                        (*slots)[static_cast<std::size_t>(s)] = detail::run_one_seed(
                            cfg, (*seedp)[static_cast<std::size_t>(s)], *cps);
                    }
                }));
        }
        for (auto& w : workers) w.get();
    }

    // Cross-seed mean and standard error, accumulated in seed order.
    const std::size_t n_cp = result.checkpoints.size();
    result.mean.assign(n_cp, 0.0);
    result.stderr_.assign(n_cp, 0.0);
    int complete = 0;
    for (const auto& traj : result.per_seed) {
        if (traj.failed) continue;
        ++complete;
        for (std::size_t c = 0; c < n_cp && c < traj.pseudo_regret.size(); ++c) {
            result.mean[c] += traj.pseudo_regret[c];
        }
    }
    if (complete > 0) {
        for (double& m : result.mean) m /= complete;
        if (complete > 1) {
            for (std::size_t c = 0; c < n_cp; ++c) {
                double ss = 0.0;
                for (const auto& traj : result.per_seed) {
                    if (traj.failed || c >= traj.pseudo_regret.size()) continue;
                    const double d = traj.pseudo_regret[c] - result.mean[c];
                    ss += d * d;
                }
                result.stderr_[c] = std::sqrt(ss / (complete - 1)) / std::sqrt(complete);
            }
        }
    }
    return result;
}

// Mean-regret ratios across a geometric ladder of horizons (same algorithm
// and environment family, typically T, 4T, 16T).
struct ScalingReport {
    std::vector<std::int64_t> horizons;
    std::vector<double> final_mean_regret;
    std::vector<double> ratios;  // regret(h_{j+1}) / regret(h_j)
};

inline ScalingReport scaling_report(const std::vector<ExperimentResult>& results) {
    if (results.size() < 2) throw std::invalid_argument("scaling_report: need >= 2 horizons");
    ScalingReport rep;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].algorithm_id != results[0].algorithm_id ||
            results[i].environment_id != results[0].environment_id) {
            throw std::invalid_argument("scaling_report: mixed algorithm or environment");
        }
        if (i > 0 && results[i].horizon <= results[i - 1].horizon) {
            throw std::invalid_argument("scaling_report: horizons must increase");
        }
        rep.horizons.push_back(results[i].horizon);
        rep.final_mean_regret.push_back(results[i].final_mean_regret());
    }
    for (std::size_t i = 1; i < results.size(); ++i) {
        rep.ratios.push_back(rep.final_mean_regret[i] / rep.final_mean_regret[i - 1]);
    }
    return rep;
}

}  // namespace icb
