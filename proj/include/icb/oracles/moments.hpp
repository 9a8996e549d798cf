#pragma once

// Brute-force moment oracles. Both oracles enumerate the arm draw A_t
// exactly (weights pi) and rebuild the masked losses and normalizers from
// their defining formulas, deliberately not calling the algorithm step code,
// so a shared bug cannot certify itself.
//
// LB step:  E[ltilde_i - lambda_i]   = pi_i (l_i - c),  c = sum_j pi_j^2 l_j / sum_j pi_j^2
//           E[(ltilde_i - lambda_i)^2] <= 2 pi_i
// TS step (hypothesis pi_i > C_t^2 eta_t^2 for all i):
//           E[ltilde_i - lambda_i]   = pi_i (l_i - c) - eta_t sqrt(pi_i) (C_t - (13/2) pi_i)
//           E[(ltilde_i - lambda_i)^2] <= (13/8) pi_i (1 - pi_i)

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "icb/algorithms/ts_prod.hpp"

namespace icb::oracle {

inline constexpr int kMaxEnumerationArms = 64;

struct MomentReport {
    std::vector<double> first_moment;           // enumerated E[ltilde_i - lambda_i]
    std::vector<double> second_moment;          // enumerated E[(ltilde_i - lambda_i)^2]
    std::vector<double> first_moment_residual;  // |enumerated - closed form|
    std::vector<double> second_moment_bound;    // per-arm closed-form bound
    double c = 0.0;                             // arm-independent constant
    bool hypothesis_met = true;                 // TS oracle only

    double max_first_residual() const {
        double m = 0.0;
        for (double r : first_moment_residual) m = std::max(m, r);
        return m;
    }
    int second_moment_violations() const {
        int n = 0;
        for (std::size_t i = 0; i < second_moment.size(); ++i) {
            if (second_moment[i] > second_moment_bound[i]) ++n;
        }
        return n;
    }
};

namespace detail {

inline void check_enumeration_size(std::size_t k) {
    if (k > kMaxEnumerationArms) {
        throw std::invalid_argument("moment oracle: enumeration capped at K = 64");
    }
    if (k < 2) throw std::invalid_argument("moment oracle: need K >= 2");
}

}  // namespace detail

// Exact per-arm moments of the LB-Prod increment, losses in [-1,1].
inline MomentReport enumerate_lb_step_expectation(const std::vector<double>& pi,
                                                  const std::vector<double>& losses) {
    detail::check_enumeration_size(pi.size());
    const std::size_t k = pi.size();

    double sum_sq = 0.0;
    for (double w : pi) sum_sq += w * w;

    MomentReport rep;
    rep.first_moment.assign(k, 0.0);
    rep.second_moment.assign(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        const double p_a = pi[a];
        for (std::size_t i = 0; i < k; ++i) {
            const double ltilde = (i == a) ? losses[a] : 0.0;
            const double lambda = pi[i] * pi[a] * losses[a] / sum_sq;
            const double inc = ltilde - lambda;
            rep.first_moment[i] += p_a * inc;
            rep.second_moment[i] += p_a * inc * inc;
        }
    }

    double c_num = 0.0;
    for (std::size_t j = 0; j < k; ++j) c_num += pi[j] * pi[j] * losses[j];
    rep.c = c_num / sum_sq;

    rep.first_moment_residual.assign(k, 0.0);
    rep.second_moment_bound.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        rep.first_moment_residual[i] =
            std::abs(rep.first_moment[i] - pi[i] * (losses[i] - rep.c));
        rep.second_moment_bound[i] = 2.0 * pi[i];
    }
    return rep;
}

// Exact per-arm moments of the TS-Prod increment at round t with offset c0.
// If some pi_i <= C_t^2 eta_t^2 the floor hypothesis is unmet: that is
// reported, not treated as a failure, and the closed-form comparison is
// still evaluated for diagnostics.
inline MomentReport ts_moment_check(const std::vector<double>& pi,
                                    const std::vector<double>& losses, std::int64_t t,
                                    double c0) {
    detail::check_enumeration_size(pi.size());
    const std::size_t k = pi.size();
    const TsSchedule s = ts_schedule(t, c0);

    MomentReport rep;
    rep.hypothesis_met = true;
    const double floor = s.c * s.c * s.eta * s.eta;
    for (double w : pi) {
        if (!(w > floor)) rep.hypothesis_met = false;
    }

    // Biased masked losses b_i = l_i - eta (C - (13/2) pi_i) / sqrt(pi_i).
    std::vector<double> b(k);
    double sum_p32 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        b[i] = losses[i] - s.eta * (s.c - 6.5 * pi[i]) / std::sqrt(pi[i]);
        sum_p32 += pi[i] * std::sqrt(pi[i]);
    }

    rep.first_moment.assign(k, 0.0);
    rep.second_moment.assign(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        const double p_a = pi[a];
        const double lambda_scale = std::sqrt(pi[a]) * b[a] / sum_p32;
        for (std::size_t i = 0; i < k; ++i) {
            const double ltilde = (i == a) ? b[a] : 0.0;
            const double inc = ltilde - pi[i] * lambda_scale;
            rep.first_moment[i] += p_a * inc;
            rep.second_moment[i] += p_a * inc * inc;
        }
    }

    double c_num = 0.0;
    for (std::size_t j = 0; j < k; ++j) c_num += pi[j] * std::sqrt(pi[j]) * b[j];
    rep.c = c_num / sum_p32;

    rep.first_moment_residual.assign(k, 0.0);
    rep.second_moment_bound.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double closed =
            pi[i] * (losses[i] - rep.c) - s.eta * std::sqrt(pi[i]) * (s.c - 6.5 * pi[i]);
        rep.first_moment_residual[i] = std::abs(rep.first_moment[i] - closed);
        rep.second_moment_bound[i] = 13.0 / 8.0 * pi[i] * (1.0 - pi[i]);
    }
    return rep;
}

}  // namespace icb::oracle
