#include <doctest.h>

#include <set>

#include "zerosum/adversaries.hpp"
#include "zerosum/bandit2x2.hpp"
#include "zerosum/montecarlo.hpp"

using namespace zerosum;

namespace {

// feed one observation with a chosen value (the machine only sees values)
void feed(Bandit2x2Learner& l, int i, int j, double v) {
    Observation obs;
    obs.i = i;
    obs.j = j;
    obs.value = v;
    l.observe(obs);
}

// xid constants mirroring the learner's ladder
constexpr int X_UNIFORM = 0, X1 = 1, X2 = 2, X3 = 3, X4 = 4, X5 = 5, X6 = 6, X7 = 7, X9 = 9;

}  // namespace

TEST_CASE("separation ratio boundary cases") {
    // gap = 10 units, radius inflation = 2 units: ratio 12/8 = 3/2 exactly
    CHECK(separation_ratio_ok(10.0, 2.0));
    // denominator hits zero
    CHECK_FALSE(separation_ratio_ok(2.0, 2.0));
    // gap = 9 units: ratio 11/7 > 3/2
    CHECK_FALSE(separation_ratio_ok(9.0, 2.0));
}

TEST_CASE("well separated rows and columns") {
    const long long T = 1000;
    EmpiricalState emp(2, 2);
    CHECK_THROWS_AS(well_separated(emp, Axis::row, 0, T), UnsampledCell);

    const double L = 2.0 * std::log(static_cast<double>(T));
    const int n = 4000;
    const double rad = std::sqrt(2.0 * L / n);
    auto fill = [&](int i, int j, double v) {
        for (int k = 0; k < n; ++k) emp.record(i, j, v);
    };
    // row 0 gap: 10.5 radii -> separated; column 0 gap: 2 radii -> not
    fill(0, 0, 0.5 + 5.25 * rad);
    fill(0, 1, 0.5 - 5.25 * rad);
    fill(1, 0, 0.5 + 5.25 * rad - 2.0 * rad);
    fill(1, 1, 0.5);
    CHECK(well_separated(emp, Axis::row, 0, T));
    CHECK_FALSE(well_separated(emp, Axis::column, 0, T));
}

TEST_CASE("a fresh machine plays the fair coin") {
    Bandit2x2Learner learner({.horizon = 1000});
    CHECK(learner.stage() == ExplorationStage::UniformHalf);
    CHECK(learner.next().w[0] == 0.5);
    CHECK(learner.current_xid() == X_UNIFORM);
}

TEST_CASE("observations inconsistent with the played strategy are rejected") {
    Bandit2x2Learner learner({.horizon = 100000});
    // drive to AlternateTopHalf where x1 = e_{i1} is pure
    const long long T = 100000;
    const double L = 2.0 * std::log(static_cast<double>(T));
    const int n = static_cast<int>(2.0 * L / (0.08 * 0.08)) + 10;  // col gap 0.8 certified
    for (int k = 0; k < n; ++k) {
        feed(learner, 0, 0, 0.9);
        feed(learner, 1, 0, 0.1);
        feed(learner, 0, 1, 0.5);
        feed(learner, 1, 1, 0.5);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
    }
    REQUIRE(learner.stage() == ExplorationStage::AlternateTopHalf);
    REQUIRE(learner.current_xid() == X1);
    REQUIRE(learner.oriented_i1() == 0);
    // x1 puts zero mass on row 1
    CHECK_THROWS_AS(feed(learner, 1, 0, 0.5), InconsistentObservation);
}

// Scripted Case 1 walk on the matrix [[0.8,0.25],[0.2,0.7]] (already on the
// [0,1] scale): column 0 separates first, then column 1, then the x3/x4 and
// x5/x6 ladders down to the stopping condition.
TEST_CASE("case 1 runs its full ladder to the stopping condition") {
    const long long T = 10000000;
    const double m00 = 0.8, m01 = 0.25, m10 = 0.2, m11 = 0.7;
    Bandit2x2Learner learner({.horizon = T});

    // phase A: uniform play over all four cells until column 0 separates
    int guard = 2000000;
    while (learner.stage() == ExplorationStage::UniformHalf && guard-- > 0) {
        feed(learner, 0, 0, m00);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 1, 0, m10);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 0, 1, m01);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 1, 1, m11);
    }
    REQUIRE(learner.stage() == ExplorationStage::AlternateTopHalf);
    REQUIRE(learner.oriented_j1() == 0);
    REQUIRE(learner.oriented_i1() == 0);

    // phase B: x1 rounds observe (0, j2), x2 rounds observe (1, j2); row 0
    // stays starved of (0,0) samples, so column 1 must separate first
    while (learner.stage() == ExplorationStage::AlternateTopHalf && guard-- > 0) {
        if (learner.current_xid() == X1) feed(learner, 0, 1, m01);
        else feed(learner, 1, 1, m11);
    }
    REQUIRE(learner.stage() == ExplorationStage::Case1_x3x4);
    REQUIRE(learner.current_xid() == X3);
    const double d0 = learner.cached_delta(0);
    CHECK(d0 == doctest::Approx(0.55 / 3.0).epsilon(1e-3));
    CHECK(d0 > 0.0);
    CHECK(d0 <= 1.0 / 3.0 + 1e-12);
    // x3 puts 1 - delta0 on the strong row of the widest-gap row (l = 1 here)
    CHECK(learner.next().w[0] == doctest::Approx(1.0 - d0).epsilon(1e-12));
    // shield property: against column j_l the x3 payoff clears the game value
    const double value = (m00 * m11 - m01 * m10) / (m00 - m01 - m10 + m11);
    CHECK(learner.next().w[0] * m00 + learner.next().w[1] * m10 >= value - 1e-9);

    // phase C: alternate on the keyed cells until row 1 separates
    while (learner.stage() == ExplorationStage::Case1_x3x4 && guard-- > 0) {
        if (learner.current_xid() == X3) {
            feed(learner, 1, 1, m11);  // cell (i_lbar, j_lbar) switches x3 -> x4
            CHECK((learner.current_xid() == X4 || learner.stage() != ExplorationStage::Case1_x3x4));
        } else {
            feed(learner, 1, 0, m10);  // cell (i_lbar, j_l) switches back
        }
    }
    REQUIRE(learner.stage() == ExplorationStage::Case1_x5x6);
    REQUIRE(learner.current_xid() == X5);
    const double d1 = learner.cached_delta(1), d2 = learner.cached_delta(2);
    CHECK(d1 == doctest::Approx(0.55 / 3.0).epsilon(1e-2));
    CHECK(d2 == doctest::Approx(0.5 / 3.0).epsilon(1e-2));
    CHECK(learner.next().w[0] == doctest::Approx(d2).epsilon(1e-12));

    // phase D: keep every cell growing until the stopping condition fires;
    // any column-j1 observation flips x5 -> x6 and any column-j2 flips back
    bool flip_a = false, flip_b = false;
    while (learner.stage() == ExplorationStage::Case1_x5x6 && guard-- > 0) {
        if (learner.current_xid() == X5) {
            feed(learner, flip_a ? 1 : 0, 0, flip_a ? m10 : m00);
            flip_a = !flip_a;
        } else {
            CHECK(learner.next().w[0] == doctest::Approx(1.0 - d1).epsilon(1e-12));
            feed(learner, flip_b ? 1 : 0, 1, flip_b ? m11 : m01);
            flip_b = !flip_b;
        }
    }
    REQUIRE(guard > 0);
    REQUIRE(learner.stage() == ExplorationStage::Terminated);
    CHECK(learner.termination() == TerminationReason::stopping_condition);

    // at termination the empirical minimum gap sits within [3/4, 5/4] of the truth
    const double true_dmin = 0.45;
    const double ratio = learner.delta_min_tilde() / true_dmin;
    CHECK(ratio >= 0.75 - 1e-6);
    CHECK(ratio <= 1.25 + 1e-6);
}

TEST_CASE("case 1 terminates on a dominant row") {
    // [[0.8,0.9],[0.2,0.3]]: row 0 wins both columns; the machine should stop
    // as soon as column j2 separates and commit to row 0
    const long long T = 10000000;
    Bandit2x2Learner learner({.horizon = T});
    int guard = 2000000;
    while (learner.stage() == ExplorationStage::UniformHalf && guard-- > 0) {
        feed(learner, 0, 0, 0.8);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 1, 0, 0.2);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 0, 1, 0.9);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 1, 1, 0.3);
    }
    REQUIRE(learner.stage() == ExplorationStage::AlternateTopHalf);
    while (learner.stage() == ExplorationStage::AlternateTopHalf && guard-- > 0) {
        if (learner.current_xid() == X1) feed(learner, 0, 1, 0.9);
        else feed(learner, 1, 1, 0.3);
    }
    REQUIRE(learner.stage() == ExplorationStage::Terminated);
    CHECK(learner.termination() == TerminationReason::psne);
    CHECK(learner.psne_row() == 0);
    CHECK(learner.psne_col() == 0);  // row 0's smaller entry is column 0
    CHECK(learner.committed_row() == 0);
    CHECK(learner.next().w[0] == 1.0);
}

TEST_CASE("case 1 catches a flipped ordering as a pure cell") {
    // drive the means so that at the column-j2 check the argmax-gap row
    // favors the other column: terminates at (i_l, j_l)
    const long long T = 10000000;
    Bandit2x2Learner learner({.horizon = T});
    int guard = 4000000;
    while (learner.stage() == ExplorationStage::UniformHalf && guard-- > 0) {
        feed(learner, 0, 0, 0.9);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 1, 0, 0.1);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 0, 1, 0.5);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 1, 1, 0.5);
    }
    REQUIRE(learner.stage() == ExplorationStage::AlternateTopHalf);
    REQUIRE(learner.oriented_i1() == 0);
    const long long n0 = learner.empirical().count(0, 0);

    // drag the (0,0) mean down to ~0.3 while x1 keeps playing column j1
    for (long long k = 0; k < 2 * n0; ++k) feed(learner, 0, 0, 0.0);
    REQUIRE(learner.stage() == ExplorationStage::AlternateTopHalf);

    // raise row 1 on column 0, sink its column-1 cell to 0.45, and sink
    // (0,1) to zero until column 1 separates with the flipped pattern
    while (learner.stage() == ExplorationStage::AlternateTopHalf && guard-- > 0) {
        if (learner.current_xid() == X1) {
            feed(learner, 0, 1, 0.0);
        } else {
            if (learner.empirical().mean(1, 0) < 0.8) feed(learner, 1, 0, 1.0);
            else feed(learner, 1, 1, 0.45);
        }
    }
    REQUIRE(guard > 0);
    REQUIRE(learner.stage() == ExplorationStage::Terminated);
    CHECK(learner.termination() == TerminationReason::psne);
    // l = 2 row (= physical row 1), j_l = j2 (= physical column 1)
    CHECK(learner.psne_row() == 1);
    CHECK(learner.psne_col() == 1);
}

TEST_CASE("case 2 full pipeline against best response") {
    // rescaled [[0.9,0.1],[0.2,0.8]]; best response drives the machine down
    // the case-2 ladder, then the exploitation loop takes over
    const Matrix raw = Matrix::from_rows({{0.8, -0.8}, {-0.6, 0.6}});
    GameMatrix game(raw);
    const Matrix& res = game.rescaled();
    const NashSolution sol = solve(game);
    const double v_res = (sol.value + 1.0) / 2.0;

    const long long T = 500000;
    Bandit2x2Learner learner({.horizon = T});
    BestResponseAdversary adv(game);
    Environment env(game, NoiseModel{NoiseKind::none});
    RandomStream rng(91, 0);

    std::set<int> stages_seen;
    bool shields_ok = true;
    for (long long t = 1; t <= T; ++t) {
        const Strategy& x = learner.next();
        stages_seen.insert(static_cast<int>(learner.stage()));
        const int xid = learner.current_xid();
        if (learner.stage() != ExplorationStage::Terminated) {
            for (double w : x.w) {
                if (w < -1e-12 || w > 1.0 + 1e-12) shields_ok = false;
            }
            // non-positive regret of the shields on their guarded columns
            if (xid == X7 && column_payoff(res, x, learner.oriented_j1()) < v_res - 1e-9) shields_ok = false;
            if (xid == X9 && column_payoff(res, x, learner.oriented_j2()) < v_res - 1e-9) shields_ok = false;
        }
        const Strategy& y = adv.next(t, T, x);
        Observation obs;
        obs.t = t;
        obs.i = rng.sample(x);
        obs.j = rng.sample(y);
        obs.value = env.draw_entry(rng, obs.i, obs.j);
        learner.observe(obs);
        if (learner.termination() != TerminationReason::none && learner.invocations() >= 3) break;
    }
    CHECK(shields_ok);
    CHECK(learner.termination() == TerminationReason::stopping_condition);
    CHECK(stages_seen.count(static_cast<int>(ExplorationStage::Case2_x7)) == 1);
    CHECK(stages_seen.count(static_cast<int>(ExplorationStage::Case2_x7x8)) == 1);
    CHECK(stages_seen.count(static_cast<int>(ExplorationStage::Case2_x9x7)) == 1);

    // noiseless stopping condition lands the empirical gap on the truth
    const double true_dmin = 0.6;  // min rescaled gap of [[.9,.1],[.2,.8]]
    const double ratio = learner.delta_min_tilde() / true_dmin;
    CHECK(ratio >= 0.75 - 1e-6);
    CHECK(ratio <= 1.25 + 1e-6);

    // the sample budget doubles between completed invocations
    std::vector<long long> budgets;
    for (const auto& ev : learner.events())
        if (ev.label.rfind("exploit:subroutine t2=", 0) == 0)
            budgets.push_back(std::stoll(ev.label.substr(22)));
    REQUIRE(budgets.size() >= 2);
    for (size_t k = 0; k + 1 < budgets.size(); ++k) CHECK(budgets[k + 1] >= 2 * budgets[k]);
}

TEST_CASE("case 2 terminates on an early pure cell") {
    // [[0.55,0.95],[0.05,0.9]] on the [0,1] scale: column 0 separates first
    // (row 0 on top), then row 0 separates with its minimum on column 0,
    // which is the pure cell (i1, j1) = (0, 0)
    const long long T = 10000000;
    const double m00 = 0.55, m01 = 0.95, m10 = 0.05, m11 = 0.9;
    Bandit2x2Learner learner({.horizon = T});
    int guard = 4000000;
    while (learner.stage() == ExplorationStage::UniformHalf && guard-- > 0) {
        feed(learner, 0, 0, m00);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 1, 0, m10);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 0, 1, m01);
        if (learner.stage() != ExplorationStage::UniformHalf) break;
        feed(learner, 1, 1, m11);
    }
    REQUIRE(learner.stage() == ExplorationStage::AlternateTopHalf);
    REQUIRE(learner.oriented_i1() == 0);
    REQUIRE(learner.oriented_j1() == 0);
    // grow row i1 = 0 on both columns; column 1's tiny gap keeps it unresolved
    while (learner.stage() == ExplorationStage::AlternateTopHalf && guard-- > 0) {
        if (learner.current_xid() == X1) {
            // alternate the two row-0 cells; the (0,1) feed also flips to x2
            feed(learner, 0, 0, m00);
            if (learner.stage() != ExplorationStage::AlternateTopHalf) break;
            if (learner.current_xid() == X1) feed(learner, 0, 1, m01);
        } else {
            feed(learner, 0, 1, m01);
        }
    }
    REQUIRE(guard > 0);
    CHECK(learner.stage() == ExplorationStage::Terminated);
    CHECK(learner.termination() == TerminationReason::psne);
    CHECK(learner.psne_row() == 0);
    CHECK(learner.psne_col() == 0);
}

TEST_CASE("skip-exploration mode reaches the subroutine against best response") {
    GameMatrix game(Matrix::from_rows({{2.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0}}));
    RunSpec spec;
    spec.game = &game;
    spec.noise = NoiseModel{NoiseKind::none};
    spec.learner = LearnerKind::ours;
    spec.learner_options.skip_exploration = true;
    spec.adversary = AdversaryKind::best_response;
    spec.horizon = 200000;
    spec.base_seed = 92;
    const auto trials = monte_carlo_trials(spec, 4, 2);
    for (const auto& tr : trials) {
        CHECK_FALSE(tr.aborted);
        CHECK(tr.min_prefix_slack >= -1e-9);
        // polylog territory: far below the sqrt(T) ~ 450 scale of the baselines
        CHECK(tr.nash_regret < 450.0);
    }
}
