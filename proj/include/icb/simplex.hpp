#pragma once

// Probability vector over K experts plus the shared arm-sampling routine.
//
// Construction checks |sum - 1| <= tolerance and non-negativity; it does NOT
// renormalize. The update rules below preserve the sum exactly in real
// arithmetic, so a drifting sum indicates a bug and must surface as an error
// instead of being papered over.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "icb/rng.hpp"

namespace icb {

class SimplexDistribution {
public:
    static constexpr double kDefaultTolerance = 1e-9;

    explicit SimplexDistribution(std::vector<double> weights,
                                 double tolerance = kDefaultTolerance)
        : weights_(std::move(weights)), tolerance_(tolerance) {
        if (weights_.size() < 2) {
            throw std::invalid_argument("SimplexDistribution: need K >= 2 experts");
        }
        double sum = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0)) {  // also rejects NaN
                throw std::invalid_argument("SimplexDistribution: negative or NaN weight");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > tolerance_) {
            throw std::invalid_argument("SimplexDistribution: |sum - 1| = " +
                                        std::to_string(std::abs(sum - 1.0)) +
                                        " exceeds tolerance");
        }
    }

    static SimplexDistribution uniform(int k) {
        return SimplexDistribution(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
    }

    int size() const { return static_cast<int>(weights_.size()); }
    const std::vector<double>& weights() const { return weights_; }
    double operator[](int i) const { return weights_[static_cast<std::size_t>(i)]; }
    double tolerance() const { return tolerance_; }

    double sum() const {
        double s = 0.0;
        for (double w : weights_) s += w;
        return s;
    }

    double min_weight() const {
        double m = weights_[0];
        for (double w : weights_) m = std::min(m, w);
        return m;
    }

    // All coordinates strictly inside (0,1). Algorithm states maintain this;
    // point masses are only legal as hand-built sampling fixtures.
    bool strictly_interior() const {
        for (double w : weights_) {
            if (w <= 0.0 || w >= 1.0) return false;
        }
        return true;
    }

private:
    std::vector<double> weights_;
    double tolerance_;
};

// CDF inversion on the stored weight order. A draw u lands on the first arm
// whose cumulative sum reaches it; ties at a boundary go to the lower index.
inline int sample_arm_from_unit(const SimplexDistribution& dist, double u) {
    const auto& w = dist.weights();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        cum += w[i];
        if (u <= cum) return static_cast<int>(i);
    }
    return static_cast<int>(w.size()) - 1;
}

// Consumes exactly one draw.
inline int sample_arm(const SimplexDistribution& dist, RngStream& rng) {
    return sample_arm_from_unit(dist, rng.next_unit());
}

}  // namespace icb
