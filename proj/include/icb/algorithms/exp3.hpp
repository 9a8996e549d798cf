#pragma once

// Exp3: exponential weights on importance-weighted losses,
//
//   lhat_i = I(A_t = i) * l_{t,A_t} / pi_{t,i}
//   w_i    = pi_{t,i} * exp(-eta * lhat_i),   pi_{t+1} = w / sum(w).
//
// Kept as a regret baseline and as the stock non-linear (hence not
// incentive-compatible) update rule; the exact renormalization is what
// breaks affinity in the observed loss.
//
// On strongly separated instances the renormalized weights legitimately
// round to the closed boundary of the simplex (1 - e^{-40} is 1.0 in
// double). Unlike the linear rules, Exp3 tolerates that: a zero-probability
// arm is never sampled, so sampling and regret accounting stay well-defined
// and update() never throws.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>

#include "icb/algorithm.hpp"

namespace icb {

inline double exp3_tuned_eta(int num_arms, std::int64_t horizon) {
    if (num_arms < 2 || horizon < 1) {
        throw std::invalid_argument("exp3_tuned_eta: need K >= 2 and T >= 1");
    }
    return std::sqrt(2.0 * std::log(static_cast<double>(num_arms)) /
                     (static_cast<double>(num_arms) * static_cast<double>(horizon)));
}

class Exp3State final : public AlgorithmState {
public:
    Exp3State(int num_arms, double eta)
        : eta_(eta), pi_(SimplexDistribution::uniform(num_arms)) {
        if (!(eta > 0.0)) throw std::invalid_argument("Exp3State: eta must be > 0");
    }

    static Exp3State tuned(int num_arms, std::int64_t horizon) {
        return Exp3State(num_arms, exp3_tuned_eta(num_arms, horizon));
    }

    std::string name() const override { return "exp3"; }
    int num_arms() const override { return pi_.size(); }
    std::int64_t round_index() const override { return t_; }
    const SimplexDistribution& distribution() const override { return pi_; }
    double eta() const { return eta_; }

    void update(const BanditFeedback& fb) override {
        check_feedback(fb, num_arms(), loss_range());
        const auto& w = pi_.weights();
        if (w[static_cast<std::size_t>(fb.arm)] <= 0.0) {
            throw std::invalid_argument("Exp3State: fed an arm that had probability zero");
        }
        std::vector<double> next(w);
        const double lhat = fb.loss / w[static_cast<std::size_t>(fb.arm)];
        next[static_cast<std::size_t>(fb.arm)] *= std::exp(-eta_ * lhat);
        double sum = 0.0;
        for (double v : next) sum += v;
        for (double& v : next) v /= sum;
        pi_ = SimplexDistribution(std::move(next), pi_.tolerance());
        ++t_;
    }

    std::unique_ptr<AlgorithmState> clone() const override {
        return std::make_unique<Exp3State>(*this);
    }

private:
    double eta_;
    SimplexDistribution pi_;
    std::int64_t t_ = 1;
};

}  // namespace icb
