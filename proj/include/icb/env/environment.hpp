#pragma once

// Loss-generating processes. Each environment hides a full loss vector per
// round from the learner; the harness reads it for regret accounting.
//
// Oblivious generators derive every value from (seed, t) through keyed RNG
// access, so their output is bit-identical no matter how many rounds a
// consumer already pulled or in which order.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "icb/algorithm.hpp"
#include "icb/feedback.hpp"
#include "icb/rng.hpp"

namespace icb {

class Environment {
public:
    virtual ~Environment() = default;
    virtual std::string name() const = 0;
    virtual int num_arms() const = 0;
    virtual LossRange range() const { return LossRange::kUnit; }

    // Strategic environments peek at the learner here; oblivious ones ignore it.
    virtual void begin_round(std::int64_t /*t*/, const AlgorithmState* /*learner*/) {}

    // Full hidden loss vector for round t (1-based).
    virtual std::vector<double> losses_at(std::int64_t t) const = 0;
};

// i.i.d. Bernoulli losses, E[l_{t,i}] = means[i].
class StochasticBernoulliEnv final : public Environment {
public:
    StochasticBernoulliEnv(std::vector<double> means, RngStream rng)
        : means_(std::move(means)), rng_(rng) {
        if (means_.size() < 2) throw std::invalid_argument("bernoulli env: need K >= 2");
        for (double m : means_) {
            if (!(m >= 0.0 && m <= 1.0)) {
                throw std::invalid_argument("bernoulli env: mean outside [0,1]");
            }
        }
    }

    std::string name() const override { return "bernoulli"; }
    int num_arms() const override { return static_cast<int>(means_.size()); }

    std::vector<double> losses_at(std::int64_t t) const override {
        const std::size_t k = means_.size();
        std::vector<double> l(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double u = rng_.unit_at(static_cast<std::uint64_t>(t - 1) * k + i);
            l[i] = u < means_[i] ? 1.0 : 0.0;
        }
        return l;
    }

private:
    std::vector<double> means_;
    RngStream rng_;
};

// Deterministic alternation: the featured arm has loss 0, all others 1; the
// featured index advances every `period` rounds, cycling through the arms.
class SwitchingBestArmEnv final : public Environment {
public:
    SwitchingBestArmEnv(int num_arms, std::int64_t period) : k_(num_arms), period_(period) {
        if (k_ < 2) throw std::invalid_argument("switching env: need K >= 2");
        if (period_ < 1) throw std::invalid_argument("switching env: period must be >= 1");
    }

    std::string name() const override { return "switching"; }
    int num_arms() const override { return k_; }

    int featured_arm(std::int64_t t) const {
        return static_cast<int>(((t - 1) / period_) % k_);
    }

    std::vector<double> losses_at(std::int64_t t) const override {
        std::vector<double> l(static_cast<std::size_t>(k_), 1.0);
        l[static_cast<std::size_t>(featured_arm(t))] = 0.0;
        return l;
    }

private:
    int k_;
    std::int64_t period_;
};

// i.i.d. uniform losses in the declared range.
class UniformRandomEnv final : public Environment {
public:
    UniformRandomEnv(int num_arms, LossRange range, RngStream rng)
        : k_(num_arms), range_(range), rng_(rng) {
        if (k_ < 2) throw std::invalid_argument("uniform env: need K >= 2");
    }

    std::string name() const override { return "uniform"; }
    int num_arms() const override { return k_; }
    LossRange range() const override { return range_; }

    std::vector<double> losses_at(std::int64_t t) const override {
        const double lo = loss_lo(range_), hi = loss_hi(range_);
        std::vector<double> l(static_cast<std::size_t>(k_));
        for (std::size_t i = 0; i < l.size(); ++i) {
            l[i] = lo + (hi - lo) * rng_.unit_at(static_cast<std::uint64_t>(t - 1) *
                                                     static_cast<std::uint64_t>(k_) + i);
        }
        return l;
    }

private:
    int k_;
    LossRange range_;
    RngStream rng_;
};

// Fixed loss matrix. File format: one round per line, K comma-separated
// decimal losses, '#' starts a comment line, no header.
class FixedMatrixEnv final : public Environment {
public:
    FixedMatrixEnv(std::vector<std::vector<double>> rows, LossRange range = LossRange::kUnit)
        : rows_(std::move(rows)), range_(range) {
        if (rows_.empty() || rows_[0].size() < 2) {
            throw std::invalid_argument("matrix env: need at least one row and K >= 2");
        }
        for (const auto& r : rows_) {
            if (r.size() != rows_[0].size()) {
                throw std::invalid_argument("matrix env: ragged rows");
            }
            LossVector(r, range_);  // range check
        }
    }

    static FixedMatrixEnv from_file(const std::string& path, LossRange range = LossRange::kUnit) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("matrix env: cannot open " + path);
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::vector<double> row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) {
                try {
                    row.push_back(std::stod(cell));
                } catch (const std::exception&) {
                    throw std::runtime_error("matrix env: bad value '" + cell + "' in " + path);
                }
            }
            rows.push_back(std::move(row));
        }
        return FixedMatrixEnv(std::move(rows), range);
    }

    std::string name() const override { return "matrix"; }
    int num_arms() const override { return static_cast<int>(rows_[0].size()); }
    LossRange range() const override { return range_; }
    std::int64_t rounds_available() const { return static_cast<std::int64_t>(rows_.size()); }

    std::vector<double> losses_at(std::int64_t t) const override {
        if (t < 1 || t > rounds_available()) {
            throw std::runtime_error("matrix env: loss matrix exhausted at round " +
                                     std::to_string(t) + " (" +
                                     std::to_string(rows_.size()) + " rows)");
        }
        return rows_[static_cast<std::size_t>(t - 1)];
    }

private:
    std::vector<std::vector<double>> rows_;
    LossRange range_;
};

}  // namespace icb
