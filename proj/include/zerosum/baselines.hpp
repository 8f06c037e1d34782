#pragma once

// Reference learners: the optimistic matrix baseline (maximin over empirical
// means plus confidence widths) and exponential weights with importance
// weighting. Both run on bandit feedback over the rescaled [0,1] observations.

#include <cmath>

#include "zerosum/environment.hpp"
#include "zerosum/match.hpp"

namespace zerosum {

// Plays argmax_x min_y <x, (Abar + width) y> each round. The width is
// sqrt(2 ln(2 T^2 n m) / max{1, n_ij}); the max{1,.} guard keeps unseen cells
// at a large-but-finite optimism that pulls play toward them until every cell
// has a sample.
class UcbLearner : public Learner {
public:
    UcbLearner(int rows, int cols, long long horizon)
        : emp_(rows, cols), tilde_(rows, cols), x_(Strategy::uniform(rows)) {
        log_term_ = std::log(2.0 * static_cast<double>(horizon) * static_cast<double>(horizon) * rows * cols);
    }

    FeedbackMode feedback() const override { return FeedbackMode::bandit; }

    const Strategy& next() override {
        const int n = emp_.rows(), m = emp_.cols();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) tilde_(i, j) = emp_.mean(i, j, 0.0) + width(i, j);
        if (n == 2 && m == 2) {
            // allocation-free closed form for the hot path
            const double a = tilde_(0, 0), b = tilde_(0, 1), c = tilde_(1, 0), d = tilde_(1, 1);
            const double D = a - b - c + d;
            auto floor_of = [&](double x1) { return std::min(c + (a - c) * x1, d + (b - d) * x1); };
            double best_x = 0.0, best_v = -std::numeric_limits<double>::infinity();
            if (std::fabs(D) > 0.0) {
                const double cross = (d - c) / D;
                if (cross >= 0.0 && cross <= 1.0) { best_x = cross; best_v = floor_of(cross); }
            }
            for (double x1 : {0.0, 1.0}) {
                const double v = floor_of(x1);
                if (v > best_v) { best_v = v; best_x = x1; }
            }
            x_.w[0] = best_x;
            x_.w[1] = 1.0 - best_x;
        } else {
            x_ = maximin(tilde_).x;
        }
        return x_;
    }

    void observe(const Observation& obs) override { emp_.record(obs.i, obs.j, obs.value); }

    double width(int i, int j) const {
        const double c = static_cast<double>(std::max<long long>(1, emp_.count(i, j)));
        return std::sqrt(2.0 * log_term_ / c);
    }

    const EmpiricalState& empirical() const { return emp_; }
    const Matrix& optimistic_matrix() const { return tilde_; }

private:
    EmpiricalState emp_;
    Matrix tilde_;
    Strategy x_;
    double log_term_ = 0.0;
};

// Exponential weights over rows, learning rate sqrt(ln n / (n T)), reward
// estimate r/p for the sampled row. Rewards must arrive in [0,1].
class Exp3Learner : public Learner {
public:
    Exp3Learner(int rows, long long horizon)
        : scores_(rows, 0.0), x_(Strategy::uniform(rows)) {
        eta_ = std::sqrt(std::log(static_cast<double>(rows)) /
                         (static_cast<double>(rows) * static_cast<double>(horizon)));
    }

    FeedbackMode feedback() const override { return FeedbackMode::bandit; }

    const Strategy& next() override {
        const int n = static_cast<int>(scores_.size());
        double mx = scores_[0];
        for (double s : scores_) mx = std::max(mx, s);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            x_.w[i] = std::exp(eta_ * (scores_[i] - mx));
            sum += x_.w[i];
        }
        for (int i = 0; i < n; ++i) x_.w[i] /= sum;
        return x_;
    }

    void observe(const Observation& obs) override {
        if (obs.value < -1e-12 || obs.value > 1.0 + 1e-12) throw RewardOutOfRange();
        const double p = x_.w[obs.i];
        if (p <= 0.0) throw InconsistentObservation("sampled row has zero probability");
        scores_[obs.i] += obs.value / p;
    }

    double rate() const { return eta_; }
    const std::vector<double>& scores() const { return scores_; }

private:
    std::vector<double> scores_;
    Strategy x_;
    double eta_ = 0.0;
};

}  // namespace zerosum
