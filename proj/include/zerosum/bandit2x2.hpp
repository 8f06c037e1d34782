#pragma once

// Bandit learner for 2x2 games: an exploration state machine that certifies
// the entry ordering of the matrix while granting the opponent no cheap
// regret, followed by an exploitation loop that repeatedly runs the
// projected-drift subroutine around the empirical equilibrium with a doubling
// sample budget.
//
// Exploration stages (all quantities on the rescaled [0,1] scale, confidence
// radii sqrt(2 ln(T^2)/n_ij)):
//   UniformHalf       play (1/2,1/2) until a column separates; orient so that
//                     Abar[i1][j1] > Abar[i2][j1]
//   AlternateTopHalf  alternate x1 = e_{i1} and x2 = (1/2,1/2); x1 -> x2 when
//                     column j2 is played, x2 -> x1 after a single round
//   Case1_x3x4        column j2 separated first: alternate x3 (1-delta0 on
//                     row i_l) and x4 (0 on row i_l) keyed on the cells
//                     (i_lbar, j_lbar) and (i_lbar, j_l)
//   Case1_x5x6        alternate x5 (delta2 on i1) and x6 (1-delta1 on i1)
//                     keyed on columns until the stopping condition holds
//   Case2_x7          row i1 separated first: play x7 (1-delta on i1) until
//                     column j2 separates
//   Case2_x7x8        alternate x7 and x8 (0 on i1) keyed on the cells
//                     (i2,j2) and (i2,j1)
//   Case2_x9x7        alternate x9 (delta3 on i1) and x7 keyed on columns
//                     until the stopping condition holds
// Terminal reasons: an empirical PSNE / dominant row, or the stopping
// condition 1 <= (dmin~+2D)/(dmin~-2D) <= 3/2 with D = max_ij radius.
//
// The skip_exploration switch drops the state machine and runs the
// exploitation loop from the start (a short uniform bootstrap, optimistic
// defaults for unseen cells, capped plain-play stints whenever the empirical
// equilibrium is too degenerate to anchor the subroutine).

#include <optional>

#include "zerosum/environment.hpp"
#include "zerosum/match.hpp"
#include "zerosum/nash.hpp"
#include "zerosum/subroutine.hpp"

namespace zerosum {

enum class ExplorationStage {
    Bootstrap,  // skip_exploration only
    UniformHalf,
    AlternateTopHalf,
    Case1_x3x4,
    Case1_x5x6,
    Case2_x7,
    Case2_x7x8,
    Case2_x9x7,
    Terminated,
};

enum class TerminationReason { none, psne, stopping_condition };

enum class Axis { row, column };

// Ratio certificate that the empirical gap along one row/column dominates its
// confidence radii: 1 <= (g+2d)/(g-2d) <= 3/2.
inline bool well_separated(const EmpiricalState& emp, Axis axis, int index, long long horizon) {
    const double log_term = 2.0 * std::log(static_cast<double>(horizon));
    double m0, m1, r0, r1;
    if (axis == Axis::row) {
        if (emp.count(index, 0) == 0 || emp.count(index, 1) == 0) throw UnsampledCell();
        m0 = emp.mean(index, 0);
        m1 = emp.mean(index, 1);
        r0 = emp.radius(index, 0, log_term);
        r1 = emp.radius(index, 1, log_term);
    } else {
        if (emp.count(0, index) == 0 || emp.count(1, index) == 0) throw UnsampledCell();
        m0 = emp.mean(0, index);
        m1 = emp.mean(1, index);
        r0 = emp.radius(0, index, log_term);
        r1 = emp.radius(1, index, log_term);
    }
    const double gap = std::fabs(m0 - m1);
    const double rad = std::max(r0, r1);
    const double denom = gap - 2.0 * rad;
    if (!(denom > 0.0)) return false;
    return gap + 2.0 * rad <= 1.5 * denom;
}

class Bandit2x2Learner : public Learner {
public:
    struct Config {
        long long horizon = 0;
        bool skip_exploration = false;
        long long bootstrap_cap = 100;
    };

    explicit Bandit2x2Learner(Config cfg)
        : cfg_(cfg), emp_(2, 2), current_(Strategy::uniform(2)), log_term_(2.0 * std::log(static_cast<double>(cfg.horizon))) {
        if (cfg.horizon < 1) throw Error("horizon must be positive");
        stage_ = cfg_.skip_exploration ? ExplorationStage::Bootstrap : ExplorationStage::UniformHalf;
        event(0, cfg_.skip_exploration ? "explore:bootstrap" : "explore:uniform");
    }

    FeedbackMode feedback() const override { return FeedbackMode::bandit; }

    const Strategy& next() override {
        if (t_ >= cfg_.horizon) throw HorizonExhausted();
        return current_;
    }

    void observe(const Observation& obs) override {
        if (obs.i < 0 || obs.i > 1 || obs.j < 0 || obs.j > 1) throw IndexOutOfRange();
        if (!(current_.w[obs.i] > 0.0)) throw InconsistentObservation();
        emp_.record(obs.i, obs.j, obs.value);
        ++t_;
        if (stage_ == ExplorationStage::Terminated) {
            exploit_observe(obs);
        } else if (stage_ == ExplorationStage::Bootstrap) {
            if (emp_.min_count() >= 1 || t_ >= cfg_.bootstrap_cap) {
                stage_ = ExplorationStage::Terminated;
                reason_ = TerminationReason::stopping_condition;
                event(t_, "exploit:bootstrap_done");
                enter_exploitation(false);
            }
        } else {
            explore_observe(obs);
        }
    }

    const std::vector<PhaseEvent>& events() const override { return events_; }

    // introspection
    ExplorationStage stage() const { return stage_; }
    TerminationReason termination() const { return reason_; }
    int psne_row() const { return psne_row_; }
    int psne_col() const { return psne_col_; }
    int committed_row() const { return committed_row_; }
    long long rounds() const { return t_; }
    long long exploit_budget() const { return t2_; }
    int invocations() const { return invocations_; }
    const EmpiricalState& empirical() const { return emp_; }
    bool subroutine_active() const { return sub_.has_value(); }
    int oriented_i1() const { return i1_; }
    int oriented_i2() const { return i2_; }
    int oriented_j1() const { return j1_; }
    int oriented_j2() const { return j2_; }
    // which shield strategy is current: 0 = uniform, 1..9 = x^(1)..x^(9)
    int current_xid() const { return static_cast<int>(cur_); }
    double cached_delta(int which) const {
        switch (which) {
            case 0: return d0_;
            case 1: return d1_;
            case 2: return d2_;
            case 3: return d3_;
            default: return d_;
        }
    }

    double delta_min_tilde() const {
        const double g0 = std::fabs(emp_.mean(0, 0) - emp_.mean(0, 1));
        const double g1 = std::fabs(emp_.mean(1, 0) - emp_.mean(1, 1));
        const double g2 = std::fabs(emp_.mean(0, 0) - emp_.mean(1, 0));
        const double g3 = std::fabs(emp_.mean(0, 1) - emp_.mean(1, 1));
        return std::min(std::min(g0, g1), std::min(g2, g3));
    }

    double max_radius() const {
        double r = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r = std::max(r, emp_.radius(i, j, log_term_));
        return r;
    }

private:
    // --- exploration ---------------------------------------------------------

    enum class XId { uniform, x1, x2, x3, x4, x5, x6, x7, x8, x9 };

    bool col_sep(int j) const {
        if (emp_.count(0, j) == 0 || emp_.count(1, j) == 0) return false;
        return well_separated(emp_, Axis::column, j, cfg_.horizon);
    }
    bool row_sep(int i) const {
        if (emp_.count(i, 0) == 0 || emp_.count(i, 1) == 0) return false;
        return well_separated(emp_, Axis::row, i, cfg_.horizon);
    }

    double mean(int i, int j) const { return emp_.mean(i, j); }
    double row_gap(int i) const { return std::fabs(mean(i, 0) - mean(i, 1)); }

    int il() const { return l_ == 1 ? i1_ : i2_; }
    int ilbar() const { return l_ == 1 ? i2_ : i1_; }
    int jl() const { return l_ == 1 ? j1_ : j2_; }
    int jlbar() const { return l_ == 1 ? j2_ : j1_; }

    std::optional<std::pair<int, int>> empirical_psne() const {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (mean(i, j) >= mean(1 - i, j) && mean(i, j) <= mean(i, 1 - j)) return std::make_pair(i, j);
        return std::nullopt;
    }

    bool stopping_condition() const {
        if (emp_.min_count() == 0) return false;
        const double dmin = delta_min_tilde();
        const double rad = max_radius();
        const double denom = dmin - 2.0 * rad;
        if (!(denom > 0.0)) return false;
        return dmin + 2.0 * rad <= 1.5 * denom;
    }

    void explore_observe(const Observation& obs) {
        switch (stage_) {
            case ExplorationStage::UniformHalf: {
                int sep = -1;
                for (int j = 0; j < 2 && sep < 0; ++j)
                    if (col_sep(j)) sep = j;
                if (sep >= 0) {
                    j1_ = sep;
                    j2_ = 1 - sep;
                    i1_ = mean(0, j1_) > mean(1, j1_) ? 0 : 1;
                    i2_ = 1 - i1_;
                    stage_ = ExplorationStage::AlternateTopHalf;
                    cur_ = XId::x1;
                    event(t_, "explore:alternate_top j1=" + std::to_string(j1_) + " i1=" + std::to_string(i1_));
                }
                break;
            }
            case ExplorationStage::AlternateTopHalf: {
                if (cur_ == XId::x1 && obs.j == j2_) cur_ = XId::x2;
                else if (cur_ == XId::x2) cur_ = XId::x1;
                if (col_sep(j2_)) enter_case1();
                else if (row_sep(i1_)) enter_case2();
                break;
            }
            case ExplorationStage::Case1_x3x4: {
                if (cur_ == XId::x3 && obs.i == ilbar() && obs.j == jlbar()) cur_ = XId::x4;
                else if (cur_ == XId::x4 && obs.i == ilbar() && obs.j == jl()) cur_ = XId::x3;
                if (row_sep(ilbar())) {
                    if (auto p = empirical_psne()) {
                        terminate_psne(p->first, p->second);
                    } else {
                        d1_ = row_gap(i1_) / 3.0;
                        d2_ = row_gap(i2_) / 3.0;
                        stage_ = ExplorationStage::Case1_x5x6;
                        cur_ = XId::x5;
                        event(t_, "explore:case1_x5x6");
                    }
                }
                break;
            }
            case ExplorationStage::Case1_x5x6: {
                if (cur_ == XId::x5 && obs.j == j1_) cur_ = XId::x6;
                else if (cur_ == XId::x6 && obs.j == j2_) cur_ = XId::x5;
                if (stopping_condition()) terminate_stopping();
                break;
            }
            case ExplorationStage::Case2_x7: {
                if (col_sep(j2_)) {
                    if (mean(i1_, j2_) > mean(i2_, j2_)) {
                        terminate_psne(i1_, j2_);
                    } else {
                        stage_ = ExplorationStage::Case2_x7x8;
                        cur_ = XId::x7;
                        event(t_, "explore:case2_x7x8");
                    }
                }
                break;
            }
            case ExplorationStage::Case2_x7x8: {
                if (cur_ == XId::x7 && obs.i == i2_ && obs.j == j2_) cur_ = XId::x8;
                else if (cur_ == XId::x8 && obs.i == i2_ && obs.j == j1_) cur_ = XId::x7;
                if (row_sep(i2_)) {
                    if (auto p = empirical_psne()) {
                        terminate_psne(p->first, p->second);
                    } else {
                        d3_ = row_gap(i2_) / 3.0;
                        stage_ = ExplorationStage::Case2_x9x7;
                        cur_ = XId::x9;
                        event(t_, "explore:case2_x9x7");
                    }
                }
                break;
            }
            case ExplorationStage::Case2_x9x7: {
                if (cur_ == XId::x9 && obs.j == j1_) cur_ = XId::x7;
                else if (cur_ == XId::x7 && obs.j == j2_) cur_ = XId::x9;
                if (stopping_condition()) terminate_stopping();
                break;
            }
            default:
                break;
        }
        if (stage_ != ExplorationStage::Terminated) rebuild_strategy();
    }

    void enter_case1() {
        if (mean(i1_, j2_) > mean(i2_, j2_)) {
            const int jstar = mean(i1_, 0) <= mean(i1_, 1) ? 0 : 1;
            terminate_psne(i1_, jstar);
            return;
        }
        l_ = std::fabs(mean(i1_, j1_) - mean(i1_, j2_)) >= std::fabs(mean(i2_, j1_) - mean(i2_, j2_)) ? 1 : 2;
        if (mean(il(), jl()) < mean(il(), jlbar())) {
            terminate_psne(il(), jl());
            return;
        }
        d0_ = row_gap(il()) / 3.0;
        stage_ = ExplorationStage::Case1_x3x4;
        cur_ = XId::x3;
        event(t_, "explore:case1_x3x4 l=" + std::to_string(l_));
    }

    void enter_case2() {
        if (mean(i1_, j1_) < mean(i1_, j2_)) {
            terminate_psne(i1_, j1_);
            return;
        }
        d_ = row_gap(i1_) / 3.0;
        stage_ = ExplorationStage::Case2_x7;
        cur_ = XId::x7;
        event(t_, "explore:case2_x7");
    }

    void terminate_psne(int i, int j) {
        stage_ = ExplorationStage::Terminated;
        reason_ = TerminationReason::psne;
        psne_row_ = i;
        psne_col_ = j;
        event(t_, "terminate:psne " + std::to_string(i) + "," + std::to_string(j));
        enter_exploitation(true);
    }

    void terminate_stopping() {
        stage_ = ExplorationStage::Terminated;
        reason_ = TerminationReason::stopping_condition;
        event(t_, "terminate:stopping_condition");
        enter_exploitation(false);
    }

    void set_mass_on(int row, double mass) {
        current_.w[row] = mass;
        current_.w[1 - row] = 1.0 - mass;
    }

    void rebuild_strategy() {
        switch (cur_) {
            case XId::uniform: set_mass_on(0, 0.5); break;
            case XId::x1: set_mass_on(i1_, 1.0); break;
            case XId::x2: set_mass_on(i1_, 0.5); break;
            case XId::x3: set_mass_on(il(), 1.0 - d0_); break;
            case XId::x4: set_mass_on(il(), 0.0); break;
            case XId::x5: set_mass_on(i1_, d2_); break;
            case XId::x6: set_mass_on(i1_, 1.0 - d1_); break;
            case XId::x7: set_mass_on(i1_, 1.0 - d_); break;
            case XId::x8: set_mass_on(i1_, 0.0); break;
            case XId::x9: set_mass_on(i1_, d3_); break;
        }
    }

    // --- exploitation --------------------------------------------------------

    void enter_exploitation(bool from_psne) {
        if (from_psne) {
            committed_row_ = psne_row_;
            set_mass_on(committed_row_, 1.0);
            event(t_, "exploit:commit_row " + std::to_string(committed_row_));
            return;
        }
        // dominant row: both columns certified and won by the same row
        if (col_sep(0) && col_sep(1)) {
            const int top0 = mean(0, 0) > mean(1, 0) ? 0 : 1;
            const int top1 = mean(0, 1) > mean(1, 1) ? 0 : 1;
            if (top0 == top1) {
                committed_row_ = top0;
                set_mass_on(committed_row_, 1.0);
                event(t_, "exploit:commit_row " + std::to_string(committed_row_) + " (dominant)");
                return;
            }
        }
        if (emp_.min_count() >= 1) {
            if (auto p = empirical_psne()) {
                committed_row_ = p->first;
                set_mass_on(committed_row_, 1.0);
                event(t_, "exploit:commit_row " + std::to_string(committed_row_) + " (psne)");
                return;
            }
        }
        t2_ = std::max<long long>(1, emp_.min_count());
        start_invocation();
    }

    void exploit_observe(const Observation& obs) {
        if (committed_row_ >= 0) return;
        if (sub_) {
            if (sub_->observe_cell(obs.j, obs.i)) {
                t2_ = std::max<long long>(1, emp_.min_count());
                start_invocation();
            } else {
                current_ = sub_->next_strategy();
            }
        } else {
            if (--stint_left_ <= 0) {
                t2_ = std::max<long long>(1, emp_.min_count());
                start_invocation();
            }
        }
    }

    void start_invocation() {
        const Matrix abar = emp_.mean_matrix(1.0);  // optimistic default for unseen cells
        const EmpiricalEquilibrium ee = empirical_equilibrium(abar);
        sub_.reset();
        if (ee.support_x.size() == 2) {
            double rad = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double c = static_cast<double>(std::max<long long>(1, emp_.count(i, j)));
                    rad = std::max(rad, std::sqrt(2.0 * log_term_ / c));
                }
            const double dtilde = std::fabs(abar(0, 0) - abar(0, 1) - abar(1, 0) + abar(1, 1));
            try {
                SubroutineConfig cfg;
                cfg.x_prime = ee.x;
                cfg.d1 = dtilde / 2.0;
                cfg.t1 = 1.0 / (rad * rad);
                cfg.t2 = t2_;
                cfg.a_hat = abar;
                cfg.mode = FeedbackMode::bandit;
                sub_.emplace(std::move(cfg));
                ++invocations_;
                current_ = sub_->next_strategy();
                event(t_, "exploit:subroutine t2=" + std::to_string(t2_));
                return;
            } catch (const Error&) {
                // radii still too wide to anchor the box; fall through to a plain stint
            }
        }
        stint_left_ = std::max<long long>(64, 2 * t2_);
        current_ = ee.x;
        event(t_, "exploit:plain_stint " + std::to_string(stint_left_));
    }

    void event(long long t, std::string label) { events_.push_back({t, std::move(label)}); }

    Config cfg_;
    EmpiricalState emp_;
    Strategy current_;
    double log_term_;

    ExplorationStage stage_ = ExplorationStage::UniformHalf;
    TerminationReason reason_ = TerminationReason::none;
    XId cur_ = XId::uniform;
    int i1_ = 0, i2_ = 1, j1_ = 0, j2_ = 1;
    int l_ = 1;
    double d0_ = 0.0, d1_ = 0.0, d2_ = 0.0, d3_ = 0.0, d_ = 0.0;
    int psne_row_ = -1, psne_col_ = -1;

    int committed_row_ = -1;
    long long t2_ = 1;
    long long stint_left_ = 0;
    int invocations_ = 0;
    std::optional<DeltaSubroutine> sub_;

    long long t_ = 0;
    std::vector<PhaseEvent> events_;
};

}  // namespace zerosum
