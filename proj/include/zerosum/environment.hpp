#pragma once

// Stochastic observation layer. Observations live on the [0,1]-rescaled
// scale: Bernoulli noise draws {0,1} with mean equal to the rescaled entry,
// the noiseless model returns the rescaled entry itself.

#include "zerosum/matrix.hpp"
#include "zerosum/random.hpp"

namespace zerosum {

enum class NoiseKind { bernoulli, none };

struct NoiseModel {
    NoiseKind kind = NoiseKind::bernoulli;
};

class Environment {
public:
    Environment(const GameMatrix& game, NoiseModel noise) : game_(&game), noise_(noise) {}

    const GameMatrix& game() const { return *game_; }
    NoiseModel noise() const { return noise_; }

    double draw_entry(RandomStream& rng, int i, int j) const {
        const Matrix& r = game_->rescaled();
        if (i < 0 || i >= r.rows() || j < 0 || j >= r.cols()) throw IndexOutOfRange("draw_entry cell out of range");
        const double mean = r(i, j);
        if (noise_.kind == NoiseKind::none) return mean;
        return static_cast<double>(rng.bernoulli(mean));
    }

    // full n x m observation, drawn row-major so replays are bit-identical
    Matrix draw_full(RandomStream& rng) const {
        const Matrix& r = game_->rescaled();
        Matrix out(r.rows(), r.cols());
        if (noise_.kind == NoiseKind::none) {
            out = r;
            return out;
        }
        for (int i = 0; i < r.rows(); ++i)
            for (int j = 0; j < r.cols(); ++j) out(i, j) = static_cast<double>(rng.bernoulli(r(i, j)));
        return out;
    }

private:
    const GameMatrix* game_;
    NoiseModel noise_;
};

// Per-cell sample counts and running means of the rescaled observations.
class EmpiricalState {
public:
    EmpiricalState() = default;
    EmpiricalState(int rows, int cols)
        : sums_(rows, cols, 0.0), counts_(static_cast<size_t>(rows) * cols, 0), rows_(rows), cols_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void record(int i, int j, double value) {
        sums_(i, j) += value;
        ++counts_[static_cast<size_t>(i) * cols_ + j];
    }

    void record_full(const Matrix& draw) {
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) record(i, j, draw(i, j));
    }

    long long count(int i, int j) const { return counts_[static_cast<size_t>(i) * cols_ + j]; }

    long long min_count() const {
        long long mn = counts_.empty() ? 0 : counts_[0];
        for (long long c : counts_) mn = std::min(mn, c);
        return mn;
    }

    // mean with a fixed default for unseen cells
    double mean(int i, int j, double if_unsampled = 0.0) const {
        const long long c = count(i, j);
        return c == 0 ? if_unsampled : sums_(i, j) / static_cast<double>(c);
    }

    Matrix mean_matrix(double if_unsampled = 0.0) const {
        Matrix m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(i, j) = mean(i, j, if_unsampled);
        return m;
    }

    // sqrt(2 * log_term / n_{i,j}); infinite for unseen cells
    double radius(int i, int j, double log_term) const {
        const long long c = count(i, j);
        if (c == 0) return std::numeric_limits<double>::infinity();
        return std::sqrt(2.0 * log_term / static_cast<double>(c));
    }

private:
    Matrix sums_;
    std::vector<long long> counts_;
    int rows_ = 0, cols_ = 0;
};

}  // namespace zerosum
