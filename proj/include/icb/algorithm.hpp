#pragma once

// Uniform contract every update rule implements.
//
// `distribution()` is the sampling distribution for the current round (the
// exploration mixture for WSU-UX, pi itself otherwise); `pi()` is the
// internally maintained weight vector the update rule governs. Updates are
// deterministic given (state, feedback): all randomness lives in arm
// sampling, which the caller performs.

#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "icb/feedback.hpp"
#include "icb/simplex.hpp"

namespace icb {

// Raised when an update would leave the simplex. Carries the round, the
// pre-update weights and the feedback for diagnosis; never repaired silently.
struct BreachEvent {
    std::int64_t round = 0;
    int arm = 0;
    double loss = 0.0;
    std::vector<double> pi_before;
    std::string detail;
};

class SimplexBreachError : public std::runtime_error {
public:
    explicit SimplexBreachError(BreachEvent ev)
        : std::runtime_error(describe(ev)), event_(std::move(ev)) {}

    const BreachEvent& event() const { return event_; }

private:
    static std::string describe(const BreachEvent& ev) {
        std::ostringstream os;
        os << "simplex breach at t=" << ev.round << " arm=" << ev.arm
           << " loss=" << ev.loss << ": " << ev.detail;
        return os.str();
    }

    BreachEvent event_;
};

class AlgorithmState {
public:
    virtual ~AlgorithmState() = default;

    virtual std::string name() const = 0;
    virtual int num_arms() const = 0;
    virtual std::int64_t round_index() const = 0;
    virtual LossRange loss_range() const { return LossRange::kUnit; }

    // Sampling distribution for the current round.
    virtual const SimplexDistribution& distribution() const = 0;

    // Internal weight vector (equals distribution() unless documented otherwise).
    virtual const SimplexDistribution& pi() const { return distribution(); }

    // Advances to round t+1. Throws SimplexBreachError if the update leaves
    // the simplex.
    virtual void update(const BanditFeedback& fb) = 0;

    // Scan-mode update: instead of throwing, record the breach, clamp back
    // into the simplex, and continue. Algorithms that cannot breach under
    // their validated parameters just forward to update().
    virtual std::optional<BreachEvent> update_scan(const BanditFeedback& fb) {
        update(fb);
        return std::nullopt;
    }

    virtual std::unique_ptr<AlgorithmState> clone() const = 0;
};

namespace detail {

// Shared post-update check. Violations are never repaired here.
//
// The lower edge is strict: min(pi) > 0 is what keeps the estimators
// well-defined. The upper edge carries the simplex tolerance: once some
// arm sits below ~1e-16, the complement of the others rounds to exactly
// 1.0 in double, which is representability, not a broken update.
inline void require_valid(const std::vector<double>& w, const BanditFeedback& fb,
                          const std::vector<double>& before, const char* who,
                          double tolerance) {
    auto breach = [&](const std::string& what) {
        BreachEvent ev;
        ev.round = fb.round;
        ev.arm = fb.arm;
        ev.loss = fb.loss;
        ev.pi_before = before;
        ev.detail = std::string(who) + ": " + what;
        throw SimplexBreachError(std::move(ev));
    };
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0) || w[i] >= 1.0 + tolerance) {
            breach("coordinate " + std::to_string(i) + " = " + std::to_string(w[i]) +
                   " left (0,1) beyond tolerance");
        }
        sum += w[i];
    }
    if (std::abs(sum - 1.0) > tolerance) {
        breach("sum drifted to " + std::to_string(sum));
    }
}

}  // namespace detail
}  // namespace icb
