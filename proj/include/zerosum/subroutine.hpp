#pragma once

// Projected-drift play around an anchor strategy. The learner plays
// x_t = x' + (delta_1,...,delta_{n-1}, -sum delta_i) and after seeing the
// opponent column j nudges every coordinate by eta * (A_hat[i][j] -
// A_hat[n-1][j]), clamped to the box [-r, r] with eta = 1/(D1*T1),
// r = 1/(D1*sqrt(T1)). A_hat is frozen for the whole run; the caller updates
// its empirical means only between runs.
//
// Full-feedback runs last exactly T2 rounds. Bandit runs finish once every
// cell of the (frozen-size) matrix has been observed T2 times within the run;
// the caller is responsible for cutting the run off at the global horizon.

#include <vector>

#include "zerosum/matrix.hpp"

namespace zerosum {

enum class FeedbackMode { full, bandit };

struct SubroutineConfig {
    Strategy x_prime;
    double d1 = 0.0;
    double t1 = 0.0;
    long long t2 = 0;
    Matrix a_hat;
    FeedbackMode mode = FeedbackMode::full;
};

class DeltaSubroutine {
public:
    explicit DeltaSubroutine(SubroutineConfig cfg) : cfg_(std::move(cfg)) {
        const int n = cfg_.x_prime.size();
        if (cfg_.a_hat.rows() != n || cfg_.a_hat.cols() != n) throw Error("A_hat must be n x n");
        if (!(cfg_.d1 > 0.0) || !(cfg_.t1 > 0.0)) throw Error("D1 and T1 must be positive");
        if (cfg_.t2 < 1) throw Error("T2 must be at least 1");
        eta_ = 1.0 / (cfg_.d1 * cfg_.t1);
        radius_ = 1.0 / (cfg_.d1 * std::sqrt(cfg_.t1));
        double margin = 1.0;
        for (int i = 0; i < n; ++i) margin = std::min(margin, std::min(cfg_.x_prime[i], 1.0 - cfg_.x_prime[i]));
        if (margin + 1e-12 < (n - 1) * radius_)
            throw InfeasibleAnchor("anchor margin " + std::to_string(margin) + " below (n-1)*r = " +
                                   std::to_string((n - 1) * radius_));
        delta_.assign(n - 1, -radius_);
        counts_.assign(static_cast<size_t>(n) * n, 0);
        current_.w.assign(n, 0.0);
        refresh_strategy();
    }

    double eta() const { return eta_; }
    double radius() const { return radius_; }
    long long rounds() const { return t_; }
    bool finished() const { return finished_; }
    FeedbackMode mode() const { return cfg_.mode; }
    const std::vector<double>& delta() const { return delta_; }
    long long cell_count(int i, int j) const { return counts_[static_cast<size_t>(i) * cfg_.a_hat.cols() + j]; }

    const Strategy& next_strategy() const { return current_; }

    // Full-feedback round: only the opponent column matters, the drift runs
    // off the frozen A_hat. Returns the finished flag.
    bool observe(int j) {
        if (cfg_.mode != FeedbackMode::full) throw ModeMismatch("bandit run requires the played cell");
        check_column(j);
        drift(j);
        const int n = cfg_.a_hat.rows();
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < n; ++c) ++counts_[static_cast<size_t>(i) * n + c];
        ++t_;
        if (t_ >= cfg_.t2) finished_ = true;
        refresh_strategy();
        return finished_;
    }

    // Bandit round: the single played cell is counted.
    bool observe_cell(int j, int i) {
        if (cfg_.mode != FeedbackMode::bandit) throw ModeMismatch("full run takes only the column index");
        check_column(j);
        if (i < 0 || i >= cfg_.a_hat.rows()) throw IndexOutOfRange("row index out of range");
        drift(j);
        ++counts_[static_cast<size_t>(i) * cfg_.a_hat.cols() + j];
        ++t_;
        if (min_count() >= cfg_.t2) finished_ = true;
        refresh_strategy();
        return finished_;
    }

    // Round consumed against a column outside the frozen matrix (the outer
    // learner saw an off-support column): no drift, the clock still ticks.
    bool observe_out_of_support() {
        if (cfg_.mode != FeedbackMode::full) throw ModeMismatch("off-support rounds only arise with full feedback");
        const int n = cfg_.a_hat.rows();
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < n; ++c) ++counts_[static_cast<size_t>(i) * n + c];
        ++t_;
        if (t_ >= cfg_.t2) finished_ = true;
        return finished_;
    }

private:
    void check_column(int j) const {
        if (j < 0 || j >= cfg_.a_hat.cols()) throw IndexOutOfRange("column index out of range");
    }

    void drift(int j) {
        const int n = cfg_.a_hat.rows();
        for (int i = 0; i + 1 < n; ++i) {
            const double g = cfg_.a_hat(i, j) - cfg_.a_hat(n - 1, j);
            delta_[i] = std::clamp(delta_[i] + eta_ * g, -radius_, radius_);
        }
    }

    void refresh_strategy() {
        const int n = cfg_.x_prime.size();
        double tail = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            const double v = cfg_.x_prime[i] + delta_[i];
            current_.w[i] = std::max(v, 0.0);
            tail += delta_[i];
        }
        current_.w[n - 1] = std::max(cfg_.x_prime[n - 1] - tail, 0.0);
    }

    long long min_count() const {
        long long mn = counts_[0];
        for (long long c : counts_) mn = std::min(mn, c);
        return mn;
    }

    SubroutineConfig cfg_;
    double eta_ = 0.0;
    double radius_ = 0.0;
    std::vector<double> delta_;
    std::vector<long long> counts_;
    Strategy current_;
    long long t_ = 0;
    bool finished_ = false;
};

}  // namespace zerosum
