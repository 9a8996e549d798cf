#pragma once

// TS-Prod validity scan. Simulates the literal update under uniformly random
// losses and records, per round, the smallest coordinate of pi across trials
// next to the guaranteed floor C_t^2 eta_t^2, plus the first round (if any)
// where a coordinate leaves (0,1). Breaches are data, not errors: the scan
// clamps, renormalizes and keeps going so the whole horizon stays observable.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "icb/algorithms/ts_prod.hpp"
#include "icb/rng.hpp"
#include "icb/simplex.hpp"

namespace icb::oracle {

struct ValidityScan {
    int num_arms = 0;
    double c0 = 0.0;
    std::int64_t horizon = 0;
    int trials = 0;
    std::optional<std::int64_t> first_breach_round;
    std::int64_t total_breaches = 0;
    std::vector<double> min_prob;  // per round, min over arms and trials
    std::vector<double> bound;     // per round, C_t^2 eta_t^2

    // Rounds where the guaranteed floor failed to hold empirically.
    std::int64_t floor_violations() const {
        std::int64_t n = 0;
        for (std::size_t i = 0; i < min_prob.size(); ++i) {
            if (!(min_prob[i] > bound[i])) ++n;
        }
        return n;
    }
};

inline ValidityScan min_prob_scan(int num_arms, double c0, std::int64_t horizon, int trials,
                                  RngStream rng) {
    if (horizon < 1 || horizon > 1000000) {
        throw std::invalid_argument("min_prob_scan: horizon must be in [1, 1e6]");
    }
    if (trials < 1) throw std::invalid_argument("min_prob_scan: need at least one trial");

    ValidityScan scan;
    scan.num_arms = num_arms;
    scan.c0 = c0;
    scan.horizon = horizon;
    scan.trials = trials;
    scan.min_prob.assign(static_cast<std::size_t>(horizon), 1.0);
    scan.bound.resize(static_cast<std::size_t>(horizon));
    for (std::int64_t t = 1; t <= horizon; ++t) {
        const TsSchedule s = ts_schedule(t, c0);
        scan.bound[static_cast<std::size_t>(t - 1)] = s.c * s.c * s.eta * s.eta;
    }

    constexpr double kFloor = 1e-12;
    for (int trial = 0; trial < trials; ++trial) {
        RngStream loss_rng = rng.substream(2 * static_cast<std::uint64_t>(trial));
        RngStream arm_rng = rng.substream(2 * static_cast<std::uint64_t>(trial) + 1);
        std::vector<double> pi(static_cast<std::size_t>(num_arms), 1.0 / num_arms);

        for (std::int64_t t = 1; t <= horizon; ++t) {
            const SimplexDistribution dist(pi);
            const int arm = sample_arm(dist, arm_rng);
            const double loss = loss_rng.next_unit();
            const TsSchedule s = ts_schedule(t, c0);
            std::vector<double> next = ts_prod_step(pi, s.eta, s.c, arm, loss);

            bool breached = false;
            for (double w : next) {
                if (!(w > 0.0 && w < 1.0)) breached = true;
            }
            if (breached) {
                ++scan.total_breaches;
                if (!scan.first_breach_round || t < *scan.first_breach_round) {
                    scan.first_breach_round = t;
                }
                double sum = 0.0;
                for (double& w : next) {
                    w = std::clamp(w, kFloor, 1.0 - kFloor);
                    sum += w;
                }
                for (double& w : next) w /= sum;
            }
            pi = std::move(next);
            double mn = pi[0];
            for (double w : pi) mn = std::min(mn, w);
            auto& cell = scan.min_prob[static_cast<std::size_t>(t - 1)];
            cell = std::min(cell, mn);
        }
    }
    return scan;
}

}  // namespace icb::oracle
