#pragma once

// LB-Prod: a Prod update on masked (not importance-weighted) losses with a
// non-symmetric normalizer,
//
//   ltilde_{t,i}  = l_{t,i} I(A_t = i)
//   lambda_{t,i}  = pi_{t,i} pi_{t,A_t} l_{t,A_t} / sum_j pi_{t,j}^2
//   pi_{t+1,i}    = pi_{t,i} (1 - eta (ltilde_{t,i} - lambda_{t,i})).
//
// Works on losses in [-1,1]; |ltilde - lambda| <= |l_{t,A_t}| at the played
// arm and <= |l_{t,A_t}|/2 elsewhere, so any eta < 1 keeps every coordinate
// strictly positive. The lambda structure telescopes: sum(pi) is conserved
// exactly in real arithmetic.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "icb/algorithm.hpp"

namespace icb {

// eta = sqrt(K log(T) / (2T)), valid (i.e. < 1) whenever T > K log(T) / 2.
inline double lb_tuned_eta(int num_arms, std::int64_t horizon) {
    if (num_arms < 2 || horizon < 2) {
        throw std::invalid_argument("lb_tuned_eta: need K >= 2 and T >= 2");
    }
    const double k = static_cast<double>(num_arms);
    const double t = static_cast<double>(horizon);
    if (!(t > k * std::log(t) / 2.0)) {
        throw std::invalid_argument(
            "lb_tuned_eta: horizon too short, needs T > K*log(T)/2 (K=" +
            std::to_string(num_arms) + ", T=" + std::to_string(horizon) + ")");
    }
    return std::sqrt(k * std::log(t) / (2.0 * t));
}

class LbProdState final : public AlgorithmState {
public:
    LbProdState(int num_arms, double eta)
        : eta_(eta), pi_(SimplexDistribution::uniform(num_arms)) {
        if (!(eta > 0.0 && eta < 1.0)) {
            throw std::invalid_argument("LbProdState: eta must be in (0,1)");
        }
    }

    static LbProdState tuned(int num_arms, std::int64_t horizon) {
        return LbProdState(num_arms, lb_tuned_eta(num_arms, horizon));
    }

    std::string name() const override { return "lb-prod"; }
    int num_arms() const override { return pi_.size(); }
    std::int64_t round_index() const override { return t_; }
    LossRange loss_range() const override { return LossRange::kSymmetric; }
    const SimplexDistribution& distribution() const override { return pi_; }
    double eta() const { return eta_; }

    void update(const BanditFeedback& fb) override {
        check_feedback(fb, num_arms(), loss_range());
        const auto& p = pi_.weights();
        double sum_sq = 0.0;
        for (double w : p) sum_sq += w * w;
        const double p_arm = p[static_cast<std::size_t>(fb.arm)];

        std::vector<double> next(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double ltilde = (static_cast<int>(i) == fb.arm) ? fb.loss : 0.0;
            const double lambda = p[i] * p_arm * fb.loss / sum_sq;
            next[i] = p[i] * (1.0 - eta_ * (ltilde - lambda));
        }
        detail::require_valid(next, fb, p, "lb-prod", pi_.tolerance());
        pi_ = SimplexDistribution(std::move(next), pi_.tolerance());
        ++t_;
    }

    std::unique_ptr<AlgorithmState> clone() const override {
        return std::make_unique<LbProdState>(*this);
    }

private:
    double eta_;
    SimplexDistribution pi_;
    std::int64_t t_ = 1;
};

}  // namespace icb
