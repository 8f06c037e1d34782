#pragma once

// Small dense matrices, simplex strategies and the payoff-matrix wrapper
// used everywhere else. Games are capped at 8x8; nothing here is tuned for
// anything bigger.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <limits>
#include <vector>

#include "zerosum/errors.hpp"

namespace zerosum {

inline constexpr int kMaxGameSide = 8;

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw Error("negative matrix dimension");
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
        Matrix m(r, c);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c) throw Error("ragged matrix literal");
            int j = 0;
            for (double v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix submatrix(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
        Matrix s(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
        for (size_t i = 0; i < row_idx.size(); ++i)
            for (size_t j = 0; j < col_idx.size(); ++j) s(static_cast<int>(i), static_cast<int>(j)) = (*this)(row_idx[i], col_idx[j]);
        return s;
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

private:
    int rows_, cols_;
    std::vector<double> data_;
};

// LU with partial pivoting; plenty accurate for the <=9x9 systems we see.
inline double determinant(Matrix a) {
    const int n = a.rows();
    if (n != a.cols()) throw Error("determinant of non-square matrix");
    if (n == 0) return 1.0;
    if (n == 1) return a(0, 0);
    if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::fabs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(a(i, k));
            if (v > best) { best = v; pivot = i; }
        }
        if (best == 0.0) return 0.0;
        if (pivot != k) {
            for (int j = k; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            det = -det;
        }
        det *= a(k, k);
        const double inv = 1.0 / a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) * inv;
            if (f == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

// Point on the probability simplex. Tiny negatives are clipped and the
// weights renormalized; anything worse is rejected.
struct Strategy {
    std::vector<double> w;

    Strategy() = default;
    explicit Strategy(std::vector<double> weights) : w(std::move(weights)) { normalize(); }

    static Strategy uniform(int n) { return Strategy(std::vector<double>(n, 1.0 / n)); }

    static Strategy pure(int i, int n) {
        std::vector<double> v(n, 0.0);
        if (i < 0 || i >= n) throw IndexOutOfRange("pure strategy index out of range");
        v[i] = 1.0;
        return Strategy(std::move(v));
    }

    int size() const { return static_cast<int>(w.size()); }
    double operator[](int i) const { return w[i]; }

    void normalize() {
        if (w.empty()) throw Error("empty strategy");
        double sum = 0.0;
        for (double& v : w) {
            if (!std::isfinite(v)) throw Error("non-finite strategy weight");
            if (v < 0.0) {
                if (v < -1e-9) throw Error("negative strategy weight");
                v = 0.0;
            }
            sum += v;
        }
        if (std::fabs(sum - 1.0) > 1e-9) throw Error("strategy weights do not sum to 1");
        for (double& v : w) v /= sum;
    }

    std::vector<int> support(double tol = 1e-12) const {
        std::vector<int> s;
        for (int i = 0; i < size(); ++i)
            if (w[i] > tol) s.push_back(i);
        return s;
    }
};

inline double dot(const Strategy& x, const std::vector<double>& v) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += x.w[i] * v[i];
    return s;
}

// x^T A e_j
inline double column_payoff(const Matrix& a, const Strategy& x, int j) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += x.w[i] * a(i, j);
    return s;
}

// e_i^T A y
inline double row_payoff(const Matrix& a, int i, const Strategy& y) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * y.w[j];
    return s;
}

inline double bilinear(const Matrix& a, const Strategy& x, const Strategy& y) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        double r = 0.0;
        for (int j = 0; j < a.cols(); ++j) r += a(i, j) * y.w[j];
        s += x.w[i] * r;
    }
    return s;
}

// Payoff matrix with entries in [-1,1] plus its [0,1] twin (a+1)/2. The
// learners and gap constants all live on the rescaled twin; values reported
// to the user stay on the original scale.
class GameMatrix {
public:
    explicit GameMatrix(Matrix entries) : entries_(std::move(entries)) {
        const int n = entries_.rows(), m = entries_.cols();
        if (n < 2 || m < 2) throw Error("game matrix must be at least 2x2");
        if (n > kMaxGameSide || m > kMaxGameSide) throw Error("game matrix larger than 8x8 not supported");
        if (!entries_.all_finite()) throw Error("game matrix has non-finite entries");
        rescaled_ = Matrix(n, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) {
                const double v = entries_(i, j);
                if (v < -1.0 - 1e-12 || v > 1.0 + 1e-12) throw Error("game matrix entry outside [-1,1]");
                rescaled_(i, j) = (v + 1.0) / 2.0;
            }
    }

    const Matrix& entries() const { return entries_; }
    const Matrix& rescaled() const { return rescaled_; }
    int rows() const { return entries_.rows(); }
    int cols() const { return entries_.cols(); }

private:
    Matrix entries_;
    Matrix rescaled_;
};

}  // namespace zerosum
