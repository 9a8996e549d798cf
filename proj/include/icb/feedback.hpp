#pragma once

// Loss containers and the single-observation feedback record.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace icb {

// Declared loss interval. The symmetric range is only legal for LB-Prod.
enum class LossRange { kUnit, kSymmetric };

inline double loss_lo(LossRange r) { return r == LossRange::kUnit ? 0.0 : -1.0; }
inline double loss_hi(LossRange) { return 1.0; }

inline const char* to_string(LossRange r) {
    return r == LossRange::kUnit ? "[0,1]" : "[-1,1]";
}

struct LossVector {
    std::vector<double> losses;
    LossRange range = LossRange::kUnit;

    LossVector() = default;
    LossVector(std::vector<double> l, LossRange r) : losses(std::move(l)), range(r) {
        validate();
    }

    void validate() const {
        const double lo = loss_lo(range), hi = loss_hi(range);
        for (double v : losses) {
            if (!(v >= lo && v <= hi)) {
                throw std::invalid_argument("LossVector: entry outside declared range");
            }
        }
    }
};

// What the learner sees after round t: its own arm and that arm's loss.
struct BanditFeedback {
    std::int64_t round = 0;
    int arm = 0;
    double loss = 0.0;
};

inline void check_feedback(const BanditFeedback& fb, int num_arms, LossRange range) {
    if (fb.arm < 0 || fb.arm >= num_arms) {
        throw std::invalid_argument("BanditFeedback: arm index out of range");
    }
    if (!(fb.loss >= loss_lo(range) && fb.loss <= loss_hi(range))) {
        throw std::invalid_argument("BanditFeedback: loss outside declared range");
    }
}

}  // namespace icb
