#pragma once

// Full-feedback pipeline for n x m games:
//   identify   play the empirical equilibrium of the running mean matrix and
//              wait until one square submatrix passes both the determinant
//              separation test and the exclusion-gap test; its supports are
//              then fixed for good
//   burnin     keep playing the empirical equilibrium of the selected
//              submatrix until the determinant statistics have concentrated
//              (ratio test), which arms t* = 6.25 * t
//   exploit    from t >= t*, run the projected-drift subroutine around the
//              submatrix equilibrium with budgets T2 = min(t1, T - t1),
//              doubling t1 after every invocation
// A 1x1 selected support short-circuits to committing the pure row. When the
// submatrix loses its unique full-support equilibrium at the t* checkpoint,
// the learner just plays empirical equilibria to the horizon.

#include <optional>

#include "zerosum/environment.hpp"
#include "zerosum/gaps.hpp"
#include "zerosum/match.hpp"
#include "zerosum/subroutine.hpp"

namespace zerosum {

inline double det_family_min(const Matrix& b) {
    if (b.rows() == 2 && b.cols() == 2) {
        // the replaced-column determinants collapse to the entry gaps
        const double a = b(0, 0), c = b(0, 1), d = b(1, 0), e = b(1, 1);
        const double D = std::fabs(a - c - d + e);
        const double gaps = std::min(std::min(std::fabs(a - c), std::fabs(d - e)),
                                     std::min(std::fabs(a - d), std::fabs(c - e)));
        return std::min(D, gaps);
    }
    const Matrix bt = b.transposed();
    double mn = std::min(std::fabs(determinant(cramer_m_matrix(b))),
                         std::fabs(determinant(cramer_m_matrix(bt))));
    for (int l = 0; l < b.rows(); ++l) {
        mn = std::min(mn, std::fabs(determinant(cramer_m_replaced(b, l))));
        mn = std::min(mn, std::fabs(determinant(cramer_m_replaced(bt, l))));
    }
    return mn;
}

// 1 <= (dmin + infl)/(dmin - infl) <= 3/2 with infl = 2 k^2 k! Delta
inline bool separation_ratio_ok(double delta_min_tilde, double inflation) {
    const double denom = delta_min_tilde - inflation;
    if (!(denom > 0.0)) return false;
    return delta_min_tilde + inflation <= 1.5 * denom;
}

// Concentration test on a square empirical submatrix after t rounds of full
// feedback, radius sqrt(2 ln(k^2 T^2)/t).
inline bool check_separation_condition(const Matrix& b_bar, long long t, long long horizon) {
    const int k = b_bar.rows();
    if (k != b_bar.cols()) throw SupportMismatch();
    if (t < 1) throw Error("t must be positive");
    const double delta = std::sqrt(2.0 * std::log(static_cast<double>(k) * k * static_cast<double>(horizon) *
                                                  static_cast<double>(horizon)) /
                                   static_cast<double>(t));
    const double inflation = 2.0 * k * k * factorial(k) * delta;
    return separation_ratio_ok(det_family_min(b_bar), inflation);
}

// The submatrix return rule: the candidate supports of the empirical
// equilibrium pass the separation test and the empirical exclusion gap
// clears 5 k dtilde / Dtilde + 2 Delta, radius sqrt(2 ln(n m T^2)/t).
inline bool check_submatrix_return(const Matrix& a_bar, const EmpiricalEquilibrium& ee, long long t,
                                   long long horizon) {
    const int n = a_bar.rows(), m = a_bar.cols();
    if (ee.support_x.size() != ee.support_y.size()) throw SupportMismatch();
    const int k = static_cast<int>(ee.support_x.size());
    if (t < 1) throw Error("t must be positive");
    const double T = static_cast<double>(horizon);
    const double delta = std::sqrt(2.0 * std::log(static_cast<double>(n) * m * T * T) / static_cast<double>(t));
    const double delta_tilde = k * factorial(k) * delta;
    const Matrix b_bar = a_bar.submatrix(ee.support_x, ee.support_y);
    if (!separation_ratio_ok(det_family_min(b_bar), 2.0 * k * k * factorial(k) * delta)) return false;

    const double inf = std::numeric_limits<double>::infinity();
    const double v_bar = ee.value;
    double g1 = inf, g2 = inf;
    if (k != n) {
        double worst = -inf;
        for (int i = 0; i < n; ++i) {
            bool in = false;
            for (int s : ee.support_x) in = in || (s == i);
            if (!in) worst = std::max(worst, row_payoff(a_bar, i, ee.y));
        }
        g1 = v_bar - worst;
    }
    if (k != m) {
        double best = inf;
        for (int j = 0; j < m; ++j) {
            bool in = false;
            for (int s : ee.support_y) in = in || (s == j);
            if (!in) best = std::min(best, column_payoff(a_bar, ee.x, j));
        }
        g2 = best - v_bar;
    }
    const double gap = std::min(g1, g2);
    if (gap == inf) return true;  // full support on both sides: nothing to exclude
    const double d_tilde = std::min(std::fabs(determinant(cramer_m_matrix(b_bar))),
                                    std::fabs(determinant(cramer_m_matrix(b_bar.transposed()))));
    if (!(d_tilde > 0.0)) return false;
    return gap >= 5.0 * k * delta_tilde / d_tilde + 2.0 * delta;
}

class FullInfoLearner : public Learner {
public:
    enum class Phase { identify, burnin, exploit, commit_psne, empirical_hold };

    FullInfoLearner(int rows, int cols, long long horizon)
        : n_(rows), m_(cols), horizon_(horizon), emp_(rows, cols), current_(Strategy::uniform(rows)) {
        if (horizon < 1) throw Error("horizon must be positive");
    }

    FeedbackMode feedback() const override { return FeedbackMode::full; }

    const Strategy& next() override {
        if (t_ >= horizon_) throw HorizonExhausted();
        return current_;
    }

    void observe(const Observation& obs) override {
        if (obs.full == nullptr) throw ModeMismatch("full-feedback learner needs the full draw");
        emp_.record_full(*obs.full);
        ++t_;
        switch (phase_) {
            case Phase::identify: identify_step(); break;
            case Phase::burnin: burnin_step(); break;
            case Phase::exploit: exploit_step(obs.j); break;
            case Phase::commit_psne: break;
            case Phase::empirical_hold: hold_step(); break;
        }
    }

    const std::vector<PhaseEvent>& events() const override { return events_; }

    Phase phase() const { return phase_; }
    long long rounds() const { return t_; }
    const std::vector<int>& selected_rows() const { return sel_rows_; }
    const std::vector<int>& selected_cols() const { return sel_cols_; }
    double t_star() const { return t_star_; }
    int invocations() const { return invocations_; }
    long long invocation_clock() const { return t1_; }
    const EmpiricalState& empirical() const { return emp_; }

private:
    void identify_step() {
        const Matrix a_bar = emp_.mean_matrix();
        const EmpiricalEquilibrium ee = empirical_equilibrium(a_bar);
        embed(ee.x, nullptr);
        if (ee.support_x.size() != ee.support_y.size()) return;
        if (!check_submatrix_return(a_bar, ee, t_, horizon_)) return;
        sel_rows_ = ee.support_x;
        sel_cols_ = ee.support_y;
        k_ = static_cast<int>(sel_rows_.size());
        event("identify:supports k=" + std::to_string(k_));
        if (k_ == 1) {
            phase_ = Phase::commit_psne;
            current_ = Strategy::pure(sel_rows_[0], n_);
            event("commit_psne row=" + std::to_string(sel_rows_[0]));
        } else {
            phase_ = Phase::burnin;
            event("burnin");
        }
    }

    void burnin_step() {
        const Matrix b_bar = emp_.mean_matrix().submatrix(sel_rows_, sel_cols_);
        const EmpiricalEquilibrium ee = empirical_equilibrium(b_bar);
        embed(ee.x, &sel_rows_);
        if (!t_star_set_ && check_separation_condition(b_bar, t_, horizon_)) {
            t_star_ = 6.25 * static_cast<double>(t_);
            t_star_set_ = true;
            event("burnin:t_star=" + std::to_string(t_star_));
        }
        if (t_star_set_ && static_cast<double>(t_) >= t_star_) {
            if (auto x_prime = full_support_equilibrium(b_bar)) {
                phase_ = Phase::exploit;
                t1_ = t_;
                start_invocation(*x_prime, b_bar);
            } else {
                phase_ = Phase::empirical_hold;
                event("empirical_hold (no full-support equilibrium at t*)");
            }
        }
    }

    void exploit_step(int j_global) {
        if (!sub_) { hold_step(); return; }
        int local_j = -1;
        for (size_t c = 0; c < sel_cols_.size(); ++c)
            if (sel_cols_[c] == j_global) local_j = static_cast<int>(c);
        const bool finished = local_j >= 0 ? sub_->observe(local_j) : sub_->observe_out_of_support();
        if (!finished) {
            embed_sub();
            return;
        }
        t1_ *= 2;
        if (t1_ < horizon_) {
            const Matrix b_bar = emp_.mean_matrix().submatrix(sel_rows_, sel_cols_);
            if (auto x_prime = full_support_equilibrium(b_bar)) {
                start_invocation(*x_prime, b_bar);
                return;
            }
        }
        sub_.reset();
        phase_ = Phase::empirical_hold;
        event("empirical_hold (exploit done)");
        hold_step();
    }

    void hold_step() {
        const Matrix b_bar = emp_.mean_matrix().submatrix(sel_rows_, sel_cols_);
        const EmpiricalEquilibrium ee = empirical_equilibrium(b_bar);
        embed(ee.x, &sel_rows_);
    }

    // unique full-support equilibrium of a square empirical matrix, or nothing
    std::optional<Strategy> full_support_equilibrium(const Matrix& b) const {
        const int k = b.rows();
        const Matrix mb = cramer_m_matrix(b);
        const Matrix mbt = cramer_m_matrix(b.transposed());
        const double det_b = determinant(mb);
        const double det_bt = determinant(mbt);
        if (std::fabs(det_b) < kDetTol || std::fabs(det_bt) < kDetTol) return std::nullopt;
        std::vector<double> xw(k), yw(k);
        for (int l = 0; l < k; ++l) {
            const double ny = determinant(cramer_m_replaced(b, l));
            const double nx = determinant(cramer_m_replaced(b.transposed(), l));
            if (ny * det_b <= 0.0 || nx * det_bt <= 0.0) return std::nullopt;
            yw[l] = ny / det_b;
            xw[l] = nx / det_bt;
        }
        Strategy x(std::move(xw)), y(std::move(yw));
        if (!is_equilibrium(b, x, y, bilinear(b, x, y), 1e-9)) return std::nullopt;
        return x;
    }

    void start_invocation(const Strategy& x_prime, const Matrix& b_bar) {
        const double T = static_cast<double>(horizon_);
        const double delta = std::sqrt(2.0 * std::log(static_cast<double>(k_) * k_ * T * T) /
                                       static_cast<double>(t1_));
        const long long t2 = std::min<long long>(t1_, horizon_ - t1_);
        if (t2 < 1) {
            sub_.reset();
            phase_ = Phase::empirical_hold;
            event("empirical_hold (no budget left)");
            hold_step();
            return;
        }
        SubroutineConfig cfg;
        cfg.x_prime = x_prime;
        cfg.d1 = std::fabs(determinant(cramer_m_matrix(b_bar.transposed()))) / (5.0 * k_ * factorial(k_));
        cfg.t1 = 1.0 / (delta * delta);
        cfg.t2 = t2;
        cfg.a_hat = b_bar;
        cfg.mode = FeedbackMode::full;
        try {
            sub_.emplace(std::move(cfg));
            ++invocations_;
            event("exploit:subroutine t1=" + std::to_string(t1_) + " t2=" + std::to_string(t2));
            embed_sub();
        } catch (const Error&) {
            sub_.reset();
            phase_ = Phase::empirical_hold;
            event("empirical_hold (infeasible anchor)");
            hold_step();
        }
    }

    void embed_sub() {
        const Strategy& xs = sub_->next_strategy();
        for (double& w : current_.w) w = 0.0;
        for (size_t i = 0; i < sel_rows_.size(); ++i) current_.w[sel_rows_[i]] = xs.w[i];
    }

    void embed(const Strategy& x, const std::vector<int>* rows) {
        if (rows == nullptr) {
            current_ = x;
            return;
        }
        for (double& w : current_.w) w = 0.0;
        for (size_t i = 0; i < rows->size(); ++i) current_.w[(*rows)[i]] = x.w[i];
    }

    void event(std::string label) { events_.push_back({t_, std::move(label)}); }

    int n_, m_;
    long long horizon_;
    EmpiricalState emp_;
    Strategy current_;
    Phase phase_ = Phase::identify;

    std::vector<int> sel_rows_, sel_cols_;
    int k_ = 0;
    double t_star_ = 0.0;
    bool t_star_set_ = false;

    long long t1_ = 0;
    int invocations_ = 0;
    std::optional<DeltaSubroutine> sub_;

    long long t_ = 0;
    std::vector<PhaseEvent> events_;
};

}  // namespace zerosum
