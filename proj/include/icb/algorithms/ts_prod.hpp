#pragma once

// TS-Prod: linearized FTRL with 1/2-Tsallis entropy, run directly on the
// observed losses via a masked, negatively biased estimator.
//
// Schedule (offset c0 defaults to K):
//
//   eta_t = 1 / sqrt(c0 + 26 t),  eta_0 = 1 / sqrt(c0)
//   C_t   = 13/2 + (1/eta_t^2 - 1/(eta_t eta_{t-1}))
//         = 13/2 + (c0 + 26t) - sqrt((c0 + 26t)(c0 + 26t - 26))
//
// Step:
//
//   ltilde_{t,i} = ( l_{t,i} - eta_t (C_t - (13/2) pi_{t,i}) / sqrt(pi_{t,i}) ) I(A_t = i)
//   lambda_{t,i} = pi_{t,i} sum_j sqrt(pi_{t,j}) ltilde_{t,j} / sum_j pi_{t,j}^{3/2}
//   pi_{t+1,i}   = pi_{t,i} ( 1 - (2 eta_t / sqrt(pi_{t,i})) (ltilde_{t,i} - lambda_{t,i}) )
//
// sum(pi) is conserved exactly in real arithmetic. With the literal constants
// the first steps from the uniform start can push a coordinate out of (0,1)
// for small c0 (C_1 ~ 27 when K = 2); update() raises SimplexBreachError with
// full diagnostics, update_scan() records the event, clamps and renormalizes
// so sweeps can keep going. Raising c0 well above K restores validity.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "icb/algorithm.hpp"

namespace icb {

struct TsSchedule {
    double eta = 0.0;       // eta_t
    double eta_prev = 0.0;  // eta_{t-1}
    double c = 0.0;         // C_t
};

inline TsSchedule ts_schedule(std::int64_t t, double c0) {
    if (t < 1) throw std::invalid_argument("ts_schedule: t must be >= 1");
    if (!(c0 >= 1.0)) throw std::invalid_argument("ts_schedule: c0 must be >= 1");
    const double x = c0 + 26.0 * static_cast<double>(t);
    TsSchedule s;
    s.eta = 1.0 / std::sqrt(x);
    s.eta_prev = (t == 1) ? 1.0 / std::sqrt(c0) : 1.0 / std::sqrt(x - 26.0);
    s.c = 6.5 + (x - std::sqrt(x * (x - 26.0)));
    return s;
}

// One raw step; no validity check, callers decide how to treat breaches.
// `include_bias = false` drops the C_t correction term, reducing the step to
// plain masked Prod with the Tsallis normalizer (handy as a fixed-point
// fixture in tests).
inline std::vector<double> ts_prod_step(const std::vector<double>& pi, double eta, double c_t,
                                        int arm, double loss, bool include_bias = true) {
    const std::size_t k = pi.size();
    const double p_arm = pi[static_cast<std::size_t>(arm)];
    const double sqrt_p_arm = std::sqrt(p_arm);
    double bias = 0.0;
    if (include_bias) {
        bias = eta * (c_t - 6.5 * p_arm) / sqrt_p_arm;
    }
    const double ltilde_arm = loss - bias;

    double sum_p32 = 0.0;
    for (double w : pi) sum_p32 += w * std::sqrt(w);
    const double lambda_scale = sqrt_p_arm * ltilde_arm / sum_p32;

    std::vector<double> next(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double ltilde = (static_cast<int>(i) == arm) ? ltilde_arm : 0.0;
        const double lambda = pi[i] * lambda_scale;
        next[i] = pi[i] * (1.0 - 2.0 * eta / std::sqrt(pi[i]) * (ltilde - lambda));
    }
    return next;
}

class TsProdState final : public AlgorithmState {
public:
    explicit TsProdState(int num_arms, double c0 = -1.0)
        : c0_(c0 > 0.0 ? c0 : static_cast<double>(num_arms)),
          pi_(SimplexDistribution::uniform(num_arms)) {
        if (!(c0_ >= 1.0)) throw std::invalid_argument("TsProdState: c0 must be >= 1");
    }

    std::string name() const override { return "ts-prod"; }
    int num_arms() const override { return pi_.size(); }
    std::int64_t round_index() const override { return t_; }
    const SimplexDistribution& distribution() const override { return pi_; }
    double schedule_offset() const { return c0_; }
    TsSchedule schedule() const { return ts_schedule(t_, c0_); }

    void update(const BanditFeedback& fb) override {
        check_feedback(fb, num_arms(), loss_range());
        const TsSchedule s = ts_schedule(t_, c0_);
        std::vector<double> next = ts_prod_step(pi_.weights(), s.eta, s.c, fb.arm, fb.loss);
        detail::require_valid(next, fb, pi_.weights(), "ts-prod", pi_.tolerance());
        pi_ = SimplexDistribution(std::move(next), pi_.tolerance());
        ++t_;
    }

    std::optional<BreachEvent> update_scan(const BanditFeedback& fb) override {
        check_feedback(fb, num_arms(), loss_range());
        const TsSchedule s = ts_schedule(t_, c0_);
        std::vector<double> next = ts_prod_step(pi_.weights(), s.eta, s.c, fb.arm, fb.loss);

        std::optional<BreachEvent> breach;
        for (std::size_t i = 0; i < next.size(); ++i) {
            if (!(next[i] > 0.0 && next[i] < 1.0)) {
                BreachEvent ev;
                ev.round = fb.round;
                ev.arm = fb.arm;
                ev.loss = fb.loss;
                ev.pi_before = pi_.weights();
                ev.detail = "ts-prod scan: coordinate " + std::to_string(i) + " = " +
                            std::to_string(next[i]) + " left (0,1); clamped and renormalized";
                breach = std::move(ev);
                break;
            }
        }
        if (breach) {
            constexpr double kFloor = 1e-12;
            double sum = 0.0;
            for (double& w : next) {
                if (!(w > kFloor)) w = kFloor;
                if (!(w < 1.0 - kFloor)) w = 1.0 - kFloor;
                sum += w;
            }
            for (double& w : next) w /= sum;
        }
        pi_ = SimplexDistribution(std::move(next), pi_.tolerance());
        ++t_;
        return breach;
    }

    std::unique_ptr<AlgorithmState> clone() const override {
        return std::make_unique<TsProdState>(*this);
    }

private:
    double c0_;
    SimplexDistribution pi_;
    std::int64_t t_ = 1;
};

}  // namespace icb
