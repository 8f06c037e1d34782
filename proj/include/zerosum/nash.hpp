#pragma once

// Exact equilibrium machinery for small zero-sum games.
//
// Square systems are solved through the M_A construction: for an n x n
// matrix A, (M_A)_{i,j} = A_{1,j} - A_{i+1,j} for i < n, last row all ones,
// and M_{A,l} replaces column l with b = (0,...,0,1)^T. When det(M_A) != 0
// the indifference system M_A y = b has the unique solution
// y_l = det(M_{A,l})/det(M_A). General n x m games go through enumeration of
// square support pairs, each candidate validated against the full matrix.
//
// All solvers work on whatever scale the matrix is given in; GameMatrix
// callers get values on the original [-1,1] scale.

#include <functional>
#include <optional>
#include <vector>

#include "zerosum/matrix.hpp"

namespace zerosum {

inline constexpr double kDetTol = 1e-12;

struct NashSolution {
    Strategy x_star;
    Strategy y_star;
    double value = 0.0;
    std::vector<int> support_x;
    std::vector<int> support_y;
    bool unique = false;
    bool is_psne = false;
    int psne_row = -1;
    int psne_col = -1;
};

struct NonUniqueEquilibrium : Error {
    Strategy x1, y1, x2, y2;
    NonUniqueEquilibrium(Strategy x1_, Strategy y1_, Strategy x2_, Strategy y2_)
        : Error("matrix game has more than one Nash equilibrium"),
          x1(std::move(x1_)), y1(std::move(y1_)), x2(std::move(x2_)), y2(std::move(y2_)) {}
};

// --- Cramer construction -------------------------------------------------

inline Matrix cramer_m_matrix(const Matrix& a) {
    const int n = a.rows();
    if (n != a.cols()) throw Error("M_A requires a square matrix");
    Matrix m(n, n);
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = a(0, j) - a(i + 1, j);
    for (int j = 0; j < n; ++j) m(n - 1, j) = 1.0;
    return m;
}

inline Matrix cramer_m_replaced(const Matrix& a, int col) {
    Matrix m = cramer_m_matrix(a);
    const int n = m.rows();
    if (col < 0 || col >= n) throw IndexOutOfRange("replaced column out of range");
    for (int i = 0; i < n; ++i) m(i, col) = (i == n - 1) ? 1.0 : 0.0;
    return m;
}

struct CramerSystem {
    Matrix m_a;
    std::vector<Matrix> m_a_col;

    static CramerSystem build(const Matrix& a) {
        CramerSystem s;
        s.m_a = cramer_m_matrix(a);
        for (int l = 0; l < a.cols(); ++l) s.m_a_col.push_back(cramer_m_replaced(a, l));
        return s;
    }

    // y with y_l = det(M_{A,l})/det(M_A); throws on a singular system.
    std::vector<double> solve() const {
        const double d = determinant(m_a);
        if (std::fabs(d) < kDetTol) throw DegenerateMatrix("det(M_A) below threshold");
        std::vector<double> y(m_a_col.size());
        for (size_t l = 0; l < m_a_col.size(); ++l) y[l] = determinant(m_a_col[l]) / d;
        return y;
    }

    double residual_inf(const std::vector<double>& y) const {
        const int n = m_a.rows();
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += m_a(i, j) * y[j];
            const double target = (i == n - 1) ? 1.0 : 0.0;
            worst = std::max(worst, std::fabs(row - target));
        }
        return worst;
    }
};

// --- Validity checks ------------------------------------------------------

// (x,y) is a Nash pair iff no pure deviation beats the value on either side.
inline bool is_equilibrium(const Matrix& a, const Strategy& x, const Strategy& y, double value, double tol) {
    for (int i = 0; i < a.rows(); ++i)
        if (row_payoff(a, i, y) > value + tol) return false;
    for (int j = 0; j < a.cols(); ++j)
        if (column_payoff(a, x, j) < value - tol) return false;
    return true;
}

inline int best_response_column(const Matrix& a, const Strategy& x) {
    int best = 0;
    double best_v = column_payoff(a, x, 0);
    for (int j = 1; j < a.cols(); ++j) {
        const double v = column_payoff(a, x, j);
        if (v < best_v) { best_v = v; best = j; }
    }
    return best;
}

namespace detail {

inline void enumerate_subsets(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(k);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) { fn(idx); return; }
        for (int i = start; i <= n - (k - depth); ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

struct KernelCandidate {
    Strategy x, y;
    double value;
    std::vector<int> rows, cols;
};

// Solve the kernel (I,J) by the determinant construction. require_interior
// demands strictly positive Cramer ratios (the unique-NE sign conditions);
// otherwise small negatives within tol are clipped.
inline std::optional<KernelCandidate> solve_kernel(const Matrix& a, const std::vector<int>& I,
                                                   const std::vector<int>& J, bool require_interior,
                                                   double tol) {
    const int n = a.rows(), m = a.cols();
    const int k = static_cast<int>(I.size());
    KernelCandidate cand;
    cand.rows = I;
    cand.cols = J;
    std::vector<double> xw(n, 0.0), yw(m, 0.0);
    double value = 0.0;

    if (k == 1) {
        const int i = I[0], j = J[0];
        value = a(i, j);
        xw[i] = 1.0;
        yw[j] = 1.0;
    } else {
        const Matrix b = a.submatrix(I, J);
        const double det_b = determinant(cramer_m_matrix(b));
        const double det_bt = determinant(cramer_m_matrix(b.transposed()));
        if (std::fabs(det_b) < kDetTol || std::fabs(det_bt) < kDetTol) return std::nullopt;
        for (int l = 0; l < k; ++l) {
            const double num = determinant(cramer_m_replaced(b, l));
            if (require_interior && num * det_b <= 0.0) return std::nullopt;
            const double yl = num / det_b;
            if (yl < -tol) return std::nullopt;
            yw[J[l]] = std::max(yl, 0.0);
        }
        const Matrix bt = b.transposed();
        for (int l = 0; l < k; ++l) {
            const double num = determinant(cramer_m_replaced(bt, l));
            if (require_interior && num * det_bt <= 0.0) return std::nullopt;
            const double xl = num / det_bt;
            if (xl < -tol) return std::nullopt;
            xw[I[l]] = std::max(xl, 0.0);
        }
        // value of the kernel game; rows of the support are indifferent
        double v = 0.0;
        for (int l = 0; l < k; ++l) {
            double r = 0.0;
            for (int c = 0; c < k; ++c) r += b(l, c) * yw[J[c]];
            v += xw[I[l]] * r;
        }
        value = v;
    }

    Strategy x(std::move(xw)), y(std::move(yw));
    if (!is_equilibrium(a, x, y, value, tol)) return std::nullopt;
    cand.x = std::move(x);
    cand.y = std::move(y);
    cand.value = value;
    return cand;
}

inline bool same_point(const Strategy& a, const Strategy& b, double tol) {
    for (int i = 0; i < a.size(); ++i)
        if (std::fabs(a.w[i] - b.w[i]) > tol) return false;
    return true;
}

inline NashSolution to_solution(const KernelCandidate& c) {
    NashSolution s;
    s.x_star = c.x;
    s.y_star = c.y;
    s.value = c.value;
    s.support_x = c.x.support();
    s.support_y = c.y.support();
    s.unique = true;
    if (s.support_x.size() == 1 && s.support_y.size() == 1) {
        s.is_psne = true;
        s.psne_row = s.support_x[0];
        s.psne_col = s.support_y[0];
    }
    return s;
}

}  // namespace detail

// --- Unique-equilibrium solvers -------------------------------------------

// Enumerates every square support pair, keeps all valid equilibria and
// demands there is exactly one. Witnesses ride along on the failure.
inline NashSolution solve_by_support_enumeration(const Matrix& a) {
    const int n = a.rows(), m = a.cols();
    std::vector<detail::KernelCandidate> found;
    const double tol = 1e-9;
    for (int k = 1; k <= std::min(n, m); ++k) {
        detail::enumerate_subsets(n, k, [&](const std::vector<int>& I) {
            detail::enumerate_subsets(m, k, [&](const std::vector<int>& J) {
                auto cand = detail::solve_kernel(a, I, J, false, tol);
                if (!cand) return;
                for (const auto& f : found)
                    if (detail::same_point(f.x, cand->x, 1e-9) && detail::same_point(f.y, cand->y, 1e-9)) return;
                found.push_back(std::move(*cand));
            });
        });
    }
    if (found.empty()) throw DegenerateMatrix();
    if (found.size() > 1)
        throw NonUniqueEquilibrium(found[0].x, found[0].y, found[1].x, found[1].y);
    return detail::to_solution(found[0]);
}

// 2x2 closed form: PSNE scan first, else the interior point
// x1 = (d-c)/D, y1 = (d-b)/D, V = (ad-bc)/D with D = a-b-c+d.
inline NashSolution solve_2x2_closed_form(const Matrix& m) {
    if (m.rows() != 2 || m.cols() != 2) throw Error("closed form requires a 2x2 matrix");
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const double gap = std::min(std::min(std::fabs(a - b), std::fabs(c - d)),
                                std::min(std::fabs(a - c), std::fabs(b - d)));
    if (gap < kDetTol) throw DegenerateMatrix("2x2 matrix has a vanishing entry gap");

    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (m(i, j) > m(1 - i, j) && m(i, j) < m(i, 1 - j)) {
                NashSolution s;
                s.x_star = Strategy::pure(i, 2);
                s.y_star = Strategy::pure(j, 2);
                s.value = m(i, j);
                s.support_x = {i};
                s.support_y = {j};
                s.unique = true;
                s.is_psne = true;
                s.psne_row = i;
                s.psne_col = j;
                return s;
            }

    const double D = a - b - c + d;
    if (std::fabs(D) < kDetTol) throw DegenerateMatrix("2x2 interior system is singular");
    const double x1 = (d - c) / D;
    const double y1 = (d - b) / D;
    if (x1 <= 0.0 || x1 >= 1.0 || y1 <= 0.0 || y1 >= 1.0)
        throw DegenerateMatrix("2x2 matrix has neither a PSNE nor an interior equilibrium");
    NashSolution s;
    s.x_star = Strategy({x1, 1.0 - x1});
    s.y_star = Strategy({y1, 1.0 - y1});
    s.value = (a * d - b * c) / D;
    s.support_x = {0, 1};
    s.support_y = {0, 1};
    s.unique = true;
    return s;
}

inline NashSolution solve_matrix(const Matrix& a) {
    const int n = a.rows(), m = a.cols();
    if (n == 2 && m == 2) return solve_2x2_closed_form(a);
    if (n == m) {
        // full-support attempt via the determinant ratios
        const Matrix ma = cramer_m_matrix(a);
        const Matrix mat = cramer_m_matrix(a.transposed());
        const double det_a = determinant(ma);
        const double det_at = determinant(mat);
        if (std::fabs(det_a) > kDetTol && std::fabs(det_at) > kDetTol) {
            bool interior = true;
            std::vector<double> yw(m), xw(n);
            for (int j = 0; j < m && interior; ++j) {
                const double num = determinant(cramer_m_replaced(a, j));
                if (num * det_a <= 0.0) interior = false;
                else yw[j] = num / det_a;
            }
            for (int i = 0; i < n && interior; ++i) {
                const double num = determinant(cramer_m_replaced(a.transposed(), i));
                if (num * det_at <= 0.0) interior = false;
                else xw[i] = num / det_at;
            }
            if (interior) {
                Strategy x(std::move(xw)), y(std::move(yw));
                double v = bilinear(a, x, y);
                if (is_equilibrium(a, x, y, v, 1e-9)) {
                    NashSolution s;
                    s.x_star = std::move(x);
                    s.y_star = std::move(y);
                    s.value = v;
                    s.support_x.resize(n);
                    s.support_y.resize(m);
                    for (int i = 0; i < n; ++i) s.support_x[i] = i;
                    for (int j = 0; j < m; ++j) s.support_y[j] = j;
                    s.unique = true;
                    return s;
                }
            }
        }
    }
    return solve_by_support_enumeration(a);
}

inline NashSolution solve(const GameMatrix& game) { return solve_matrix(game.entries()); }

// --- Empirical equilibrium -------------------------------------------------

// Some equilibrium of a (possibly noisy, possibly degenerate) matrix, chosen
// deterministically: smallest support size first, then lexicographic row and
// column supports. Falls back to uniform play when everything is degenerate.
struct EmpiricalEquilibrium {
    Strategy x, y;
    double value = 0.0;
    std::vector<int> support_x, support_y;
    bool fallback = false;
};

inline EmpiricalEquilibrium empirical_equilibrium(const Matrix& a) {
    const int n = a.rows(), m = a.cols();
    EmpiricalEquilibrium out;

    if (n == 2 && m == 2) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (a(i, j) >= a(1 - i, j) && a(i, j) <= a(i, 1 - j)) {
                    out.x = Strategy::pure(i, 2);
                    out.y = Strategy::pure(j, 2);
                    out.value = a(i, j);
                    out.support_x = {i};
                    out.support_y = {j};
                    return out;
                }
        const double D = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
        if (std::fabs(D) > kDetTol) {
            double x1 = (a(1, 1) - a(1, 0)) / D;
            double y1 = (a(1, 1) - a(0, 1)) / D;
            x1 = std::clamp(x1, 0.0, 1.0);
            y1 = std::clamp(y1, 0.0, 1.0);
            out.x = Strategy({x1, 1.0 - x1});
            out.y = Strategy({y1, 1.0 - y1});
            out.value = bilinear(a, out.x, out.y);
            out.support_x = out.x.support();
            out.support_y = out.y.support();
            return out;
        }
        out.x = Strategy::uniform(2);
        out.y = Strategy::uniform(2);
        out.value = bilinear(a, out.x, out.y);
        out.support_x = {0, 1};
        out.support_y = {0, 1};
        out.fallback = true;
        return out;
    }

    std::optional<detail::KernelCandidate> first;
    for (int k = 1; k <= std::min(n, m) && !first; ++k) {
        detail::enumerate_subsets(n, k, [&](const std::vector<int>& I) {
            if (first) return;
            detail::enumerate_subsets(m, k, [&](const std::vector<int>& J) {
                if (first) return;
                auto cand = detail::solve_kernel(a, I, J, false, 1e-9);
                if (cand) first = std::move(cand);
            });
        });
    }
    if (first) {
        out.x = first->x;
        out.y = first->y;
        out.value = first->value;
        out.support_x = out.x.support();
        out.support_y = out.y.support();
        return out;
    }
    out.x = Strategy::uniform(n);
    out.y = Strategy::uniform(m);
    out.value = bilinear(a, out.x, out.y);
    out.support_x = out.x.support();
    out.support_y = out.y.support();
    out.fallback = true;
    return out;
}

// --- Maximin ----------------------------------------------------------------

// max_x min_j x^T A e_j for an arbitrary matrix (no uniqueness assumptions);
// used by the optimistic baseline where the shifted matrix is often degenerate.
struct MaximinSolution {
    Strategy x;
    double value = 0.0;
};

inline MaximinSolution maximin(const Matrix& a) {
    const int n = a.rows(), m = a.cols();
    if (n == 2 && m == 2) {
        const double va = a(0, 0), vb = a(0, 1), vc = a(1, 0), vd = a(1, 1);
        const double D = va - vb - vc + vd;
        auto floor_of = [&](double x1) {
            return std::min(vc + (va - vc) * x1, vd + (vb - vd) * x1);
        };
        double best_x = 0.0, best_v = -std::numeric_limits<double>::infinity();
        if (std::fabs(D) > 0.0) {
            const double cross = (vd - vc) / D;
            if (cross >= 0.0 && cross <= 1.0) {
                best_x = cross;
                best_v = floor_of(cross);
            }
        }
        for (double x1 : {0.0, 1.0}) {
            const double v = floor_of(x1);
            if (v > best_v) { best_v = v; best_x = x1; }
        }
        MaximinSolution s;
        s.x = Strategy({best_x, 1.0 - best_x});
        s.value = best_v;
        return s;
    }

    std::optional<detail::KernelCandidate> found;
    for (int k = 1; k <= std::min(n, m) && !found; ++k) {
        detail::enumerate_subsets(n, k, [&](const std::vector<int>& I) {
            if (found) return;
            detail::enumerate_subsets(m, k, [&](const std::vector<int>& J) {
                if (found) return;
                auto cand = detail::solve_kernel(a, I, J, false, 1e-9);
                if (cand) found = std::move(cand);
            });
        });
    }
    MaximinSolution s;
    if (found) {
        s.x = found->x;
    } else {
        // no clean kernel survived the tolerances; best pure row is a safe floor
        int best_i = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double v = a(i, 0);
            for (int j = 1; j < m; ++j) v = std::min(v, a(i, j));
            if (v > best_v) { best_v = v; best_i = i; }
        }
        s.x = Strategy::pure(best_i, n);
    }
    double v = column_payoff(a, s.x, 0);
    for (int j = 1; j < m; ++j) v = std::min(v, column_payoff(a, s.x, j));
    s.value = v;
    return s;
}

inline int best_response_column(const GameMatrix& game, const Strategy& x) {
    return best_response_column(game.entries(), x);
}

}  // namespace zerosum
