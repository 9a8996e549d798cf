#pragma once

// Perturbation solve for the Tsallis linearization: find eps with
//
//   1 / (1 + a (L + eps))^2  =  1 - 2 a L,        a = eta sqrt(pi),
//
// valid under |a L| <= 1/4. The left side is continuous and decreasing in
// eps and the interval [-|L|, |L|] brackets the root, so plain bisection
// converges unconditionally; we stop at |residual| <= 1e-12.
//
// Rearranging the defining equation with ltilde = L + eps gives
//
//   2 eps = a ltilde^2 (3 + 2 a ltilde) / (1 + a ltilde)^2,
//
// used by the fixed-point cross-check. Two consequences worth noting:
// eps has the sign of ltilde^2, i.e. eps >= 0 for every L in the region
// (zero exactly when L = 0), and |eps| <= c |a L| only once |L| itself is
// capped; the frozen constant below is calibrated over the region
//
//   a in [1e-3, 1],  |L| <= 8,  |a L| <= 1/4
//
// as twice the grid maximum of |eps| / |a L|.

#include <cmath>
#include <stdexcept>

namespace icb::oracle {

inline constexpr double kAssumptionBound = 0.25;  // |eta sqrt(pi) L| cap
inline constexpr double kCalibrationLhatCap = 8.0;
// Frozen from calibrate_perturbation_ratio(): grid max 21.0313, doubled.
inline constexpr double kPerturbationRatioBound = 42.07;

inline void require_assumption(double eta, double pi, double lhat) {
    if (!(eta > 0.0) || !(pi > 0.0 && pi <= 1.0)) {
        throw std::domain_error("perturbation_solve: need eta > 0 and pi in (0,1]");
    }
    if (!(std::abs(eta * std::sqrt(pi) * lhat) <= kAssumptionBound)) {
        throw std::domain_error("perturbation_solve: |eta sqrt(pi) L| exceeds 1/4");
    }
}

inline double perturbation_residual(double a, double lhat, double eps) {
    const double denom = 1.0 + a * (lhat + eps);
    return 1.0 / (denom * denom) - (1.0 - 2.0 * a * lhat);
}

inline double perturbation_solve(double eta, double pi, double lhat, double tol = 1e-12,
                                 int max_iter = 200) {
    require_assumption(eta, pi, lhat);
    if (lhat == 0.0) return 0.0;
    const double a = eta * std::sqrt(pi);

    double lo = -std::abs(lhat), hi = std::abs(lhat);
    // residual is decreasing in eps: positive at lo, negative at hi.
    for (int iter = 0; iter < max_iter; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double r = perturbation_residual(a, lhat, mid);
        if (std::abs(r) <= tol) return mid;
        if (r > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    throw std::runtime_error("perturbation_solve: bisection did not reach tolerance");
}

// Fixed-point iteration on the rearranged equation; independent route used
// to cross-check the bisection.
inline double perturbation_fixed_point(double eta, double pi, double lhat, double tol = 1e-14,
                                       int max_iter = 500) {
    require_assumption(eta, pi, lhat);
    if (lhat == 0.0) return 0.0;
    const double a = eta * std::sqrt(pi);
    double eps = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        const double lt = lhat + eps;
        const double denom = 1.0 + a * lt;
        const double next = 0.5 * a * lt * lt * (3.0 + 2.0 * a * lt) / (denom * denom);
        if (std::abs(next - eps) <= tol) return next;
        eps = next;
    }
    throw std::runtime_error("perturbation_fixed_point: no convergence");
}

// Grid maximum of |eps| / |a L| over the calibration region; the frozen
// kPerturbationRatioBound is twice this value.
inline double calibrate_perturbation_ratio(int a_steps = 60, int u_steps = 60) {
    double worst = 0.0;
    for (int ai = 0; ai <= a_steps; ++ai) {
        // log-spaced a in [1e-3, 1]
        const double a = std::pow(10.0, -3.0 + 3.0 * ai / a_steps);
        for (int ui = 1; ui <= u_steps; ++ui) {
            const double u = kAssumptionBound * ui / u_steps;  // |a L|
            for (double sign : {-1.0, 1.0}) {
                const double lhat = sign * u / a;
                if (std::abs(lhat) > kCalibrationLhatCap) continue;
                const double eps = perturbation_solve(1.0, a * a, lhat);
                worst = std::max(worst, std::abs(eps) / u);
            }
        }
    }
    return worst;
}

}  // namespace icb::oracle
