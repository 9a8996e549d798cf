#pragma once

// The forecasting game: K experts each hold a belief p about a binary
// outcome; the learner invites one expert, uses their report r, and suffers
// the squared loss (I - r)^2 in [0,1].
//
// A truthful expert reports its belief. A strategic expert reports the grid
// point maximizing its expected next-round selection probability
// E[pi_{t+1,i} | r], where the expectation enumerates the outcome under the
// expert's own belief and the learner's arm draw exactly, applying the
// learner's update to a cloned state. For a linear (affine, decreasing)
// update rule this argmax is the belief itself, up to grid resolution.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "icb/algorithm.hpp"
#include "icb/env/environment.hpp"
#include "icb/rng.hpp"

namespace icb {

inline double squared_loss(double outcome, double report) {
    const double d = outcome - report;
    return d * d;
}

// Expected next-round selection probability of `expert` when its report is
// `candidate`, all else fixed. `reports` holds every expert's report; the
// candidate overrides the expert's slot. The expert evaluates the learner's
// internal weight vector pi_{t+1}.
inline double expected_selection_probability(const AlgorithmState& learner, int expert,
                                             double belief, std::vector<double> reports,
                                             double candidate) {
    reports[static_cast<std::size_t>(expert)] = candidate;
    const SimplexDistribution& dist = learner.distribution();
    const std::int64_t t = learner.round_index();

    double value = 0.0;
    for (int outcome = 0; outcome <= 1; ++outcome) {
        const double p_outcome = outcome == 1 ? belief : 1.0 - belief;
        if (p_outcome == 0.0) continue;
        for (int arm = 0; arm < learner.num_arms(); ++arm) {
            const double p_arm = dist[arm];
            if (p_arm == 0.0) continue;
            auto sim = learner.clone();
            sim->update({t, arm,
                         squared_loss(static_cast<double>(outcome),
                                      reports[static_cast<std::size_t>(arm)])});
            value += p_outcome * p_arm * sim->pi()[expert];
        }
    }
    return value;
}

// Grid argmax of the expected selection probability; ties break to the
// lowest report.
inline double strategic_report(const AlgorithmState& learner, int expert, double belief,
                               const std::vector<double>& reports, double grid_h = 0.01) {
    if (!(grid_h > 0.0 && grid_h <= 1.0)) {
        throw std::invalid_argument("strategic_report: grid resolution must be in (0,1]");
    }
    const int steps = static_cast<int>(std::lround(1.0 / grid_h));
    double best_r = 0.0;
    double best_v = -1.0;
    for (int g = 0; g <= steps; ++g) {
        const double r = std::min(1.0, g * grid_h);
        const double v = expected_selection_probability(learner, expert, belief, reports, r);
        if (v > best_v) {
            best_v = v;
            best_r = r;
        }
    }
    return best_r;
}

enum class ReportPolicy { kTruthful, kStrategic };

// Beliefs are i.i.d. uniform per (round, expert) unless frozen; the outcome
// follows the designated well-calibrated expert's belief, which makes that
// expert the meaningful comparator. Reports feed squared losses; strategic
// reports are recomputed each round against the live learner via
// clone-and-update, never mutating it.
class ForecastingEnv final : public Environment {
public:
    ForecastingEnv(int num_experts, std::vector<ReportPolicy> policies, RngStream rng,
                   int calibrated_expert = 0, double grid_h = 0.01)
        : k_(num_experts),
          policies_(std::move(policies)),
          rng_(rng),
          calibrated_(calibrated_expert),
          grid_h_(grid_h) {
        if (k_ < 2) throw std::invalid_argument("forecasting env: need K >= 2");
        if (static_cast<int>(policies_.size()) != k_) {
            throw std::invalid_argument("forecasting env: one report policy per expert");
        }
        if (calibrated_ < 0 || calibrated_ >= k_) {
            throw std::invalid_argument("forecasting env: calibrated expert out of range");
        }
    }

    static ForecastingEnv all_truthful(int num_experts, RngStream rng) {
        return ForecastingEnv(num_experts,
                              std::vector<ReportPolicy>(static_cast<std::size_t>(num_experts),
                                                        ReportPolicy::kTruthful),
                              rng);
    }

    std::string name() const override { return "forecasting"; }
    int num_arms() const override { return k_; }

    void begin_round(std::int64_t t, const AlgorithmState* learner) override {
        beliefs_.resize(static_cast<std::size_t>(k_));
        reports_.resize(static_cast<std::size_t>(k_));
        const std::uint64_t base = static_cast<std::uint64_t>(t - 1) *
                                   (static_cast<std::uint64_t>(k_) + 1);
        for (int i = 0; i < k_; ++i) {
            beliefs_[static_cast<std::size_t>(i)] =
                rng_.unit_at(base + static_cast<std::uint64_t>(i));
        }
        // Truthful baseline first; strategic experts then best-respond to it.
        for (int i = 0; i < k_; ++i) {
            reports_[static_cast<std::size_t>(i)] = beliefs_[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < k_; ++i) {
            if (policies_[static_cast<std::size_t>(i)] == ReportPolicy::kStrategic) {
                if (learner == nullptr) {
                    throw std::invalid_argument(
                        "forecasting env: strategic experts need the learner state");
                }
                reports_[static_cast<std::size_t>(i)] = strategic_report(
                    *learner, i, beliefs_[static_cast<std::size_t>(i)], reports_, grid_h_);
            }
        }
        const double q = beliefs_[static_cast<std::size_t>(calibrated_)];
        outcome_ = rng_.unit_at(base + static_cast<std::uint64_t>(k_)) < q ? 1.0 : 0.0;
        prepared_round_ = t;
    }

    std::vector<double> losses_at(std::int64_t t) const override {
        if (t != prepared_round_) {
            throw std::runtime_error("forecasting env: round " + std::to_string(t) +
                                     " not prepared (call begin_round first)");
        }
        std::vector<double> l(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_; ++i) {
            l[static_cast<std::size_t>(i)] =
                squared_loss(outcome_, reports_[static_cast<std::size_t>(i)]);
        }
        return l;
    }

    const std::vector<double>& beliefs() const { return beliefs_; }
    const std::vector<double>& reports() const { return reports_; }
    double outcome() const { return outcome_; }

private:
    int k_;
    std::vector<ReportPolicy> policies_;
    RngStream rng_;
    int calibrated_;
    double grid_h_;
    std::int64_t prepared_round_ = 0;
    std::vector<double> beliefs_;
    std::vector<double> reports_;
    double outcome_ = 0.0;
};

}  // namespace icb
