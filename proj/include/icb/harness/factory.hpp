#pragma once

// Builders mapping config sections onto algorithm states and environments.
// Every parameter precondition is checked here, before round 1 of any run.

#include <cstdint>
#include <memory>
#include <string>

#include "icb/algorithms/exp3.hpp"
#include "icb/algorithms/lb_prod.hpp"
#include "icb/algorithms/ts_omd_ds.hpp"
#include "icb/algorithms/ts_prod.hpp"
#include "icb/algorithms/wsu_ux.hpp"
#include "icb/env/environment.hpp"
#include "icb/env/forecasting.hpp"
#include "icb/harness/config.hpp"
#include "icb/rng.hpp"

namespace icb {

inline std::unique_ptr<AlgorithmState> make_algorithm(const Section& alg, int num_arms,
                                                      std::int64_t horizon) {
    const std::string id = alg.get("id");
    const bool tuned = alg.get_bool_or("tuned", false);
    try {
        std::unique_ptr<AlgorithmState> state;
        if (id == "exp3") {
            const double eta = tuned ? exp3_tuned_eta(num_arms, horizon) : alg.get_double("eta");
            state = std::make_unique<Exp3State>(num_arms, eta);
        } else if (id == "wsu-ux" || id == "bwsu") {
            WsuUxParams p;
            if (tuned) {
                p = (id == "bwsu") ? bwsu_tuned(num_arms, horizon)
                                   : wsu_ux_tuned(num_arms, horizon);
            } else {
                p.eta = alg.get_double("eta");
                p.gamma = alg.get_double("gamma");
                p.biased = (id == "bwsu");
            }
            state = std::make_unique<WsuUxState>(num_arms, p);
        } else if (id == "lb-prod") {
            const double eta = tuned ? lb_tuned_eta(num_arms, horizon) : alg.get_double("eta");
            state = std::make_unique<LbProdState>(num_arms, eta);
        } else if (id == "ts-prod") {
            const double c0 = alg.get_double_or("c0", static_cast<double>(num_arms));
            state = std::make_unique<TsProdState>(num_arms, c0);
        } else if (id == "ts-omd-ds") {
            state = std::make_unique<TsOmdDsState>(num_arms);
        } else {
            throw ConfigError("unknown algorithm id '" + id + "'");
        }
        alg.reject_unconsumed("algorithm");
        return state;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("algorithm parameters invalid: ") + e.what());
    }
}

// `rng` carries the per-seed stream; parallel seeds never share draws
// because each run keys its streams by its own seed value.
inline std::unique_ptr<Environment> make_environment(const Section& env, RngStream rng,
                                                     std::int64_t horizon) {
    const std::string id = env.get("id");
    try {
        std::unique_ptr<Environment> out;
        if (id == "bernoulli") {
            out = std::make_unique<StochasticBernoulliEnv>(env.get_double_list("means"), rng);
        } else if (id == "switching") {
            const int arms = static_cast<int>(env.get_int("arms"));
            const std::int64_t period = env.get_int_or("period", horizon);
            out = std::make_unique<SwitchingBestArmEnv>(arms, period);
        } else if (id == "uniform") {
            const int arms = static_cast<int>(env.get_int("arms"));
            const std::string range = env.get_or("range", "unit");
            if (range != "unit" && range != "symmetric") {
                throw ConfigError("uniform range must be 'unit' or 'symmetric'");
            }
            out = std::make_unique<UniformRandomEnv>(
                arms, range == "unit" ? LossRange::kUnit : LossRange::kSymmetric, rng);
        } else if (id == "matrix") {
            out = std::make_unique<FixedMatrixEnv>(FixedMatrixEnv::from_file(env.get("file")));
        } else if (id == "forecasting") {
            const int arms = static_cast<int>(env.get_int("arms"));
            std::vector<ReportPolicy> policies(static_cast<std::size_t>(arms),
                                               ReportPolicy::kTruthful);
            if (env.has("strategic")) {
                for (int idx : env.get_int_list("strategic")) {
                    if (idx < 0 || idx >= arms) {
                        throw ConfigError("strategic expert index out of range");
                    }
                    policies[static_cast<std::size_t>(idx)] = ReportPolicy::kStrategic;
                }
            }
            out = std::make_unique<ForecastingEnv>(arms, std::move(policies), rng);
        } else {
            throw ConfigError("unknown environment id '" + id + "'");
        }
        env.reject_unconsumed("environment");
        return out;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("environment parameters invalid: ") + e.what());
    } catch (const std::runtime_error& e) {
        throw ConfigError(std::string("environment setup failed: ") + e.what());
    }
}

// Loss-range compatibility: the symmetric range is only legal for LB-Prod.
inline void check_range_compatibility(const AlgorithmState& alg, const Environment& env) {
    if (env.range() == LossRange::kSymmetric && alg.loss_range() != LossRange::kSymmetric) {
        throw ConfigError("environment emits losses in [-1,1] but algorithm '" + alg.name() +
                          "' requires [0,1]");
    }
}

}  // namespace icb
