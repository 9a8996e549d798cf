#pragma once

// WSU-UX and its loss-biased variant.
//
// Sampling mixture and update:
//
//   pi~_{t,i}  = gamma/K + (1-gamma) pi_{t,i},       A_t ~ pi~_t
//   lhat_{t,i} = I(A_t = i) * l_used / pi~_{t,i}
//   pi_{t+1,i} = pi_{t,i} (1 - eta (lhat_{t,i} - lambda_t)),
//   lambda_t   = sum_j pi_{t,j} lhat_{t,j}
//
// where l_used = l_{t,A_t} for the plain rule, and for the biased variant
//
//   l_used = l_{t,A_t} * (1 - eta / pi~_{t,A_t}).
//
// Parameter regimes accepted at construction:
//   * eta K / gamma <= 1/2, which caps eta*lhat at 1/2 and keeps every
//     weight positive for either variant; or
//   * (biased only) gamma = eta K / 2. Here eta*lhat = l * x(1-x) with
//     x = eta/pi~ <= 1 along any trajectory from the uniform start, so the
//     update stays valid and the biased loss stays in [0, l].
//
// The update conserves sum(pi) exactly in real arithmetic; a coordinate
// leaving (0,1) raises SimplexBreachError.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "icb/algorithm.hpp"

namespace icb {

struct WsuUxParams {
    double eta = 0.0;
    double gamma = 0.0;
    bool biased = false;
};

// T^{2/3} tuning for the plain rule: eta balances the estimator-variance and
// mixing terms, gamma = sqrt(eta K / 2) keeps eta K / gamma = sqrt(2 eta K).
inline WsuUxParams wsu_ux_tuned(int num_arms, std::int64_t horizon) {
    if (num_arms < 2 || horizon < 1) {
        throw std::invalid_argument("wsu_ux_tuned: need K >= 2 and T >= 1");
    }
    const double k = static_cast<double>(num_arms);
    const double t = static_cast<double>(horizon);
    WsuUxParams p;
    p.eta = std::pow(std::log(k) / (2.0 * std::sqrt(2.0 * k) * t), 2.0 / 3.0);
    p.gamma = std::sqrt(p.eta * k / 2.0);
    p.biased = false;
    return p;
}

// sqrt(KT)-regret tuning for the biased variant: eta = sqrt(log(K)/(K T))
// (absolute constant fixed to 1), gamma = eta K / 2.
inline WsuUxParams bwsu_tuned(int num_arms, std::int64_t horizon) {
    if (num_arms < 2 || horizon < 1) {
        throw std::invalid_argument("bwsu_tuned: need K >= 2 and T >= 1");
    }
    const double k = static_cast<double>(num_arms);
    const double t = static_cast<double>(horizon);
    WsuUxParams p;
    p.eta = std::sqrt(std::log(k) / (k * t));
    p.gamma = p.eta * k / 2.0;
    p.biased = true;
    return p;
}

class WsuUxState final : public AlgorithmState {
public:
    WsuUxState(int num_arms, WsuUxParams params)
        : params_(params),
          pi_(SimplexDistribution::uniform(num_arms)),
          pi_tilde_(SimplexDistribution::uniform(num_arms)) {
        validate_params(num_arms, params);
        refresh_mixture();
    }

    std::string name() const override { return params_.biased ? "bwsu" : "wsu-ux"; }
    int num_arms() const override { return pi_.size(); }
    std::int64_t round_index() const override { return t_; }
    const WsuUxParams& params() const { return params_; }

    // Arms are drawn from the mixture; pi() is what the linear rule updates.
    const SimplexDistribution& distribution() const override { return pi_tilde_; }
    const SimplexDistribution& pi() const override { return pi_; }

    void update(const BanditFeedback& fb) override {
        check_feedback(fb, num_arms(), loss_range());
        const auto& p = pi_.weights();
        const double ptilde = pi_tilde_[fb.arm];
        double loss_used = fb.loss;
        if (params_.biased) {
            loss_used *= 1.0 - params_.eta / ptilde;
        }
        const double lhat_arm = loss_used / ptilde;
        const double lambda = p[static_cast<std::size_t>(fb.arm)] * lhat_arm;

        // Mass-transfer form of the rule: every unplayed arm gains
        // eta*lambda*p_i and the played arm funds exactly that total, which
        // equals its own change -eta*lambda*(1 - p_arm) when sum(p) = 1.
        // Writing it this way matters numerically: the textbook per-arm
        // product maps a sum error delta to delta*(1 + eta*lambda), which
        // compounds exponentially over long runs, while the transfer form
        // leaves the sum with plain rounding noise.
        std::vector<double> next(p.size());
        double total_gain = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (static_cast<int>(i) == fb.arm) continue;
            const double gain = params_.eta * lambda * p[i];
            next[i] = p[i] + gain;
            total_gain += gain;
        }
        next[static_cast<std::size_t>(fb.arm)] = p[static_cast<std::size_t>(fb.arm)] - total_gain;
        detail::require_valid(next, fb, p, params_.biased ? "bwsu" : "wsu-ux",
                              pi_.tolerance());
        pi_ = SimplexDistribution(std::move(next), pi_.tolerance());
        refresh_mixture();
        ++t_;
    }

    std::unique_ptr<AlgorithmState> clone() const override {
        return std::make_unique<WsuUxState>(*this);
    }

    // Biased loss the algorithm would apply to arm `i` at full loss `loss`.
    double biased_loss(int i, double loss) const {
        return loss * (1.0 - params_.eta / pi_tilde_[i]);
    }

private:
    static void validate_params(int num_arms, const WsuUxParams& p) {
        if (!(p.eta > 0.0)) throw std::invalid_argument("WsuUx: eta must be > 0");
        if (!(p.gamma > 0.0 && p.gamma < 1.0)) {
            throw std::invalid_argument("WsuUx: gamma must be in (0,1)");
        }
        const double k = static_cast<double>(num_arms);
        const double slack = 1e-12;
        const bool half_rule = p.eta * k / p.gamma <= 0.5 + slack;
        if (!p.biased) {
            if (!half_rule) {
                throw std::invalid_argument("WsuUx: requires eta*K/gamma <= 1/2");
            }
            return;
        }
        const bool tuned_rule = std::abs(p.gamma - p.eta * k / 2.0) <= slack * k;
        if (!half_rule && !tuned_rule) {
            throw std::invalid_argument(
                "WsuUx(biased): requires eta*K/gamma <= 1/2 or gamma = eta*K/2");
        }
        if (tuned_rule && !half_rule) {
            // gamma = eta K / 2 is only safe when the uniform start sits at or
            // above the bias-neutral floor eta / (2 (1 - gamma)).
            if (1.0 / k < p.eta / (2.0 * (1.0 - p.gamma))) {
                throw std::invalid_argument(
                    "WsuUx(biased, tuned): uniform start below the bias floor; eta too large");
            }
        }
    }

    void refresh_mixture() {
        const auto& p = pi_.weights();
        const double k = static_cast<double>(p.size());
        std::vector<double> mix(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            mix[i] = params_.gamma / k + (1.0 - params_.gamma) * p[i];
        }
        pi_tilde_ = SimplexDistribution(std::move(mix), pi_.tolerance());
    }

    WsuUxParams params_;
    SimplexDistribution pi_;
    SimplexDistribution pi_tilde_;
    std::int64_t t_ = 1;
};

}  // namespace icb
