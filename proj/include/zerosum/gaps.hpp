#pragma once

// Instance constants of a matrix game. Everything here is computed on the
// [0,1]-rescaled matrix, the scale the learners run on, so the constants can
// be plugged straight into their thresholds. For 2x2 games delta_min is the
// minimum entry gap; for larger supports it is the minimum over the
// |det(M_{B,j})|, |det(M_{B^T,i})| family of the optimal k x k submatrix
// (the two definitions coincide at k = 2).

#include <vector>

#include "zerosum/nash.hpp"

namespace zerosum {

struct GapStatistics {
    double delta_min = 0.0;
    double d = 0.0;  // signed: a-b-c+d at 2x2, det(M_{B^T}) in general
    double delta_g1 = 0.0;
    double delta_g2 = 0.0;
    double delta_g = 0.0;
    double combinatorial_factor = 0.0;  // k^2 * k! for the support size k
    int support_size = 0;
    std::vector<int> support_x, support_y;
};

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

inline GapStatistics gap_statistics(const GameMatrix& game) {
    const Matrix& r = game.rescaled();
    const int n = r.rows(), m = r.cols();

    // solve on the original scale; equilibria agree across the affine map
    const NashSolution sol = solve(game);
    const std::vector<int>& sx = sol.support_x;
    const std::vector<int>& sy = sol.support_y;
    const int k = static_cast<int>(sx.size());

    GapStatistics g;
    g.support_size = k;
    g.support_x = sx;
    g.support_y = sy;
    g.combinatorial_factor = static_cast<double>(k) * k * factorial(k);

    if (n == 2 && m == 2) {
        const double a = r(0, 0), b = r(0, 1), c = r(1, 0), d = r(1, 1);
        g.delta_min = std::min(std::min(std::fabs(a - b), std::fabs(c - d)),
                               std::min(std::fabs(a - c), std::fabs(b - d)));
        g.d = a - b - c + d;
        if (g.delta_min < kDetTol) throw DegenerateMatrix("2x2 entry gap below threshold");
    } else {
        const Matrix b = r.submatrix(sx, sy);
        const Matrix bt = b.transposed();
        double dmin = std::fabs(determinant(cramer_m_matrix(b)));
        dmin = std::min(dmin, std::fabs(determinant(cramer_m_matrix(bt))));
        for (int l = 0; l < k; ++l) {
            dmin = std::min(dmin, std::fabs(determinant(cramer_m_replaced(b, l))));
            dmin = std::min(dmin, std::fabs(determinant(cramer_m_replaced(bt, l))));
        }
        g.delta_min = dmin;
        g.d = determinant(cramer_m_matrix(bt));
        if (g.delta_min < kDetTol) throw DegenerateMatrix("determinant family below threshold");
    }

    // exclusion gaps on the rescaled scale
    const double v_rescaled = (sol.value + 1.0) / 2.0;
    const double inf = std::numeric_limits<double>::infinity();
    if (k == n) {
        g.delta_g1 = inf;
    } else {
        double worst = -inf;
        for (int i = 0; i < n; ++i) {
            bool in = false;
            for (int s : sx) in = in || (s == i);
            if (in) continue;
            worst = std::max(worst, row_payoff(r, i, sol.y_star));
        }
        g.delta_g1 = v_rescaled - worst;
    }
    if (k == m) {
        g.delta_g2 = inf;
    } else {
        double best = inf;
        for (int j = 0; j < m; ++j) {
            bool in = false;
            for (int s : sy) in = in || (s == j);
            if (in) continue;
            best = std::min(best, column_payoff(r, sol.x_star, j));
        }
        g.delta_g2 = best - v_rescaled;
    }
    g.delta_g = std::min(g.delta_g1, g.delta_g2);
    return g;
}

// Prefix-count identity over a {1,2}-valued sequence: summing, at each
// position, how many of the opposite symbol came before (inclusive prefix)
// equals n1*n2. Used as an oracle for the drift accounting.
inline std::pair<long long, long long> swap_identity_check(const std::vector<int>& labels) {
    if (labels.empty()) throw Error("empty label sequence");
    long long n1 = 0, n2 = 0, lhs = 0;
    for (int v : labels) {
        if (v == 1) {
            ++n1;
            lhs += n2;  // n_{i,2} with y_i = 1
        } else if (v == 2) {
            ++n2;
            lhs += n1;  // n_{i,1} with y_i = 2
        } else {
            throw Error("labels must be 1 or 2");
        }
    }
    return {lhs, n1 * n2};
}

}  // namespace zerosum
