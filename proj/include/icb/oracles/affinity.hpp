#pragma once

// Affinity probe: the incentive-compatibility mechanism is that the map
// observed loss -> pi_{t+1,i} is affine with negative slope at the played
// arm. The probe clones a state snapshot, applies the update for each grid
// loss at a fixed played arm, fits an affine function through the two
// extreme grid points, and reports the worst deviation at the remaining
// points. A genuinely affine rule leaves only rounding there; least squares
// is avoided on purpose so it cannot hide curvature.

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "icb/algorithm.hpp"

namespace icb::oracle {

struct AffineReport {
    int arm = 0;  // probed (target) arm
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

// `next_pi` maps an observed loss for the played arm to the full next weight
// vector; probes both the AlgorithmState implementations and free-standing
// step functions.
inline std::vector<AffineReport> affine_probe_fn(
    const std::function<std::vector<double>(double)>& next_pi, int num_arms,
    const std::vector<double>& grid) {
    if (grid.size() < 5) {
        throw std::invalid_argument("affine_probe: need at least 5 grid points");
    }
    std::vector<double> sorted(grid);
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::vector<double>> outputs;
    outputs.reserve(sorted.size());
    for (double loss : sorted) outputs.push_back(next_pi(loss));

    const double x0 = sorted.front(), x1 = sorted.back();
    std::vector<AffineReport> reports(static_cast<std::size_t>(num_arms));
    for (int i = 0; i < num_arms; ++i) {
        const double y0 = outputs.front()[static_cast<std::size_t>(i)];
        const double y1 = outputs.back()[static_cast<std::size_t>(i)];
        AffineReport r;
        r.arm = i;
        r.slope = (y1 - y0) / (x1 - x0);
        r.intercept = y0 - r.slope * x0;
        for (std::size_t g = 1; g + 1 < sorted.size(); ++g) {
            const double predicted = r.intercept + r.slope * sorted[g];
            r.max_residual = std::max(
                r.max_residual, std::abs(outputs[g][static_cast<std::size_t>(i)] - predicted));
        }
        reports[static_cast<std::size_t>(i)] = r;
    }
    return reports;
}

inline std::vector<AffineReport> affine_probe(const AlgorithmState& snapshot, int play_arm,
                                              const std::vector<double>& grid) {
    const double lo = loss_lo(snapshot.loss_range()), hi = loss_hi(snapshot.loss_range());
    for (double g : grid) {
        if (!(g >= lo && g <= hi)) {
            throw std::invalid_argument("affine_probe: grid point outside the loss range");
        }
    }
    auto next_pi = [&](double loss) {
        auto sim = snapshot.clone();
        sim->update({snapshot.round_index(), play_arm, loss});
        return sim->pi().weights();
    };
    return affine_probe_fn(next_pi, snapshot.num_arms(), grid);
}

// Evenly spaced probe grid inside [lo, hi].
inline std::vector<double> probe_grid(double lo, double hi, int points = 9) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    }
    return g;
}

}  // namespace icb::oracle
