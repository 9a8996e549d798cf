#pragma once

// Pseudo-regret accounting for one trace:
//
//   pseudo_regret(t) = sum_{s<=t} <pi_s, l_s>  -  min_i sum_{s<=t} l_{s,i}
//
// The comparator minimum is taken at query time over the running per-arm
// totals, never frozen incrementally. Realized loss is tracked alongside.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "icb/simplex.hpp"

namespace icb {

class RegretLedger {
public:
    explicit RegretLedger(int num_arms)
        : per_arm_cumulative_(static_cast<std::size_t>(num_arms), 0.0) {}

    // `dist` is the sampling distribution actually played this round.
    void record(const SimplexDistribution& dist, const std::vector<double>& losses, int arm) {
        if (static_cast<std::size_t>(dist.size()) != losses.size() ||
            losses.size() != per_arm_cumulative_.size()) {
            throw std::invalid_argument("RegretLedger: arm count mismatch");
        }
        double dot = 0.0;
        for (std::size_t i = 0; i < losses.size(); ++i) {
            dot += dist[static_cast<int>(i)] * losses[i];
            per_arm_cumulative_[i] += losses[i];
        }
        expected_loss_ += dot;
        realized_loss_ += losses[static_cast<std::size_t>(arm)];
        ++rounds_;
    }

    std::int64_t rounds() const { return rounds_; }
    double expected_loss() const { return expected_loss_; }
    double realized_loss() const { return realized_loss_; }
    const std::vector<double>& per_arm_cumulative() const { return per_arm_cumulative_; }

    double best_arm_cumulative() const {
        return *std::min_element(per_arm_cumulative_.begin(), per_arm_cumulative_.end());
    }

    double pseudo_regret(std::int64_t t) const {
        require_round(t);
        return expected_loss_ - best_arm_cumulative();
    }

    double realized_regret(std::int64_t t) const {
        require_round(t);
        return realized_loss_ - best_arm_cumulative();
    }

private:
    void require_round(std::int64_t t) const {
        if (t != rounds_) {
            throw std::out_of_range("RegretLedger: query at t=" + std::to_string(t) +
                                    " but ledger holds " + std::to_string(rounds_) + " rounds");
        }
    }

    double expected_loss_ = 0.0;
    double realized_loss_ = 0.0;
    std::vector<double> per_arm_cumulative_;
    std::int64_t rounds_ = 0;
};

}  // namespace icb
