#pragma once

// The acceptance battery behind `zsim verify` and the ctest acceptance
// binary. Each criterion pins its own thresholds and prints one pass/fail
// line; stochastic criteria run fixed trial counts on seeds derived from the
// master seed.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "zerosum/gaps.hpp"
#include "zerosum/io.hpp"
#include "zerosum/montecarlo.hpp"

namespace zerosum {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace acceptance {

inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * (salt + 1));
    return splitmix64(s);
}

struct Audit {
    double min_prefix_slack = std::numeric_limits<double>::infinity();
    long long matches = 0;

    void absorb(double slack) {
        min_prefix_slack = std::min(min_prefix_slack, slack);
        ++matches;
    }
    void absorb(const SweepResult& sweep) {
        min_prefix_slack = std::min(min_prefix_slack, sweep.min_prefix_slack);
        for (const auto& c : sweep.cells) matches += c.agg.trials;
    }
};

// --- 1. solver correctness ---------------------------------------------------

inline CriterionResult solver_oracle(uint64_t seed) {
    CriterionResult r;
    r.name = "solver-oracle";
    RandomStream rng(seed, 101);
    int checked = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        Matrix m(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
        NashSolution closed, enumd;
        try {
            closed = solve_2x2_closed_form(m);
            enumd = solve_by_support_enumeration(m);
        } catch (const Error&) {
            continue;  // degenerate draw; measure zero but possible
        }
        ++checked;
        for (int i = 0; i < 2; ++i) {
            worst = std::max(worst, std::fabs(closed.x_star[i] - enumd.x_star[i]));
            worst = std::max(worst, std::fabs(closed.y_star[i] - enumd.y_star[i]));
        }
        worst = std::max(worst, std::fabs(closed.value - enumd.value));
    }
    const NashSolution diag = solve(GameMatrix(Matrix::from_rows({{2.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0}})));
    const NashSolution rps = solve(GameMatrix(Matrix::from_rows({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}})));
    const double diag_err = std::fabs(diag.value - 2.0 / 9.0);
    const double rps_err = std::fabs(rps.value);
    r.pass = checked >= 990 && worst <= 1e-12 && diag_err <= 1e-12 && rps_err <= 1e-12;
    std::ostringstream d;
    d << checked << "/1000 instances, max route disagreement " << format_sig12(worst) << ", |V(diag)-2/9| = "
      << format_sig12(diag_err) << ", |V(rps)| = " << format_sig12(rps_err);
    r.detail = d.str();
    return r;
}

// --- 2. subroutine exact bound ------------------------------------------------

struct BoundCase {
    Matrix a;  // [0,1] scale, interior equilibrium
    double d1;
    double t1;
};

inline std::vector<BoundCase> bound_cases() {
    std::vector<BoundCase> cases;
    // rescaled diag(2/3,1/3); margin 1/3, r = 0.2
    cases.push_back({Matrix::from_rows({{5.0 / 6.0, 0.5}, {0.5, 2.0 / 3.0}}), 0.5, 100.0});
    // rescaled rock-paper-scissors; margin 1/3, (n-1)r = 1/3
    cases.push_back({Matrix::from_rows({{0.5, 0.0, 1.0}, {1.0, 0.5, 0.0}, {0.0, 1.0, 0.5}}), 0.6, 100.0});
    // rescaled diag(.8,.8,.8,.8); margin 1/4, (n-1)r = 0.24
    Matrix d4(4, 4, 0.5);
    for (int i = 0; i < 4; ++i) d4(i, i) = 0.9;
    cases.push_back({d4, 0.5, 625.0});
    return cases;
}

inline double bound_value(int n, double d1, double t1, long long t2) {
    return 6.0 * n / d1 + 7.0 * n * static_cast<double>(t2) / (d1 * t1);
}

// exhaustive DFS over all column sequences of length <= depth_cap
inline bool exhaustive_bound_holds(const BoundCase& bc, int depth_cap, double& worst_slack) {
    const NashSolution sol = solve_matrix(bc.a);
    const int n = bc.a.rows();
    SubroutineConfig cfg;
    cfg.x_prime = sol.x_star;
    cfg.d1 = bc.d1;
    cfg.t1 = bc.t1;
    cfg.t2 = depth_cap;
    cfg.a_hat = bc.a;
    cfg.mode = FeedbackMode::full;
    const DeltaSubroutine root(cfg);
    const double v = sol.value;

    bool ok = true;
    std::function<void(const DeltaSubroutine&, double, int)> walk = [&](const DeltaSubroutine& node, double regret,
                                                                        int depth) {
        if (!ok || depth == depth_cap) return;
        for (int j = 0; j < n; ++j) {
            DeltaSubroutine child = node;
            const double payoff = column_payoff(bc.a, child.next_strategy(), j);
            const double child_regret = regret + (v - payoff);
            child.observe(j);
            const double bound = bound_value(n, bc.d1, bc.t1, depth + 1);
            worst_slack = std::min(worst_slack, bound - child_regret);
            if (child_regret > bound) {
                ok = false;
                return;
            }
            walk(child, child_regret, depth + 1);
        }
    };
    walk(root, 0.0, 0);
    return ok;
}

// one long run against a column chooser; asserts the bound at every prefix
template <class PickColumn>
inline bool run_bound_holds(const BoundCase& bc, long long t2, PickColumn pick, double& worst_slack) {
    const NashSolution sol = solve_matrix(bc.a);
    const int n = bc.a.rows();
    SubroutineConfig cfg;
    cfg.x_prime = sol.x_star;
    cfg.d1 = bc.d1;
    cfg.t1 = bc.t1;
    cfg.t2 = t2;
    cfg.a_hat = bc.a;
    cfg.mode = FeedbackMode::full;
    DeltaSubroutine sub(cfg);
    double regret = 0.0;
    for (long long t = 1; t <= t2; ++t) {
        const Strategy& x = sub.next_strategy();
        const int j = pick(x, t);
        regret += sol.value - column_payoff(bc.a, x, j);
        sub.observe(j);
        const double bound = bound_value(n, bc.d1, bc.t1, t);
        worst_slack = std::min(worst_slack, bound - regret);
        if (regret > bound) return false;
    }
    return true;
}

inline CriterionResult subroutine_bound(uint64_t seed, int threads) {
    CriterionResult r;
    r.name = "subroutine-bound";
    const auto cases = bound_cases();
    std::vector<int> oks(cases.size(), 1);
    double worst_slack = std::numeric_limits<double>::infinity();
    std::vector<double> slacks(cases.size(), worst_slack);

    parallel_for(static_cast<int>(cases.size()), threads, [&](int ci) {
        const BoundCase& bc = cases[ci];
        double slack = std::numeric_limits<double>::infinity();
        bool ok = exhaustive_bound_holds(bc, 12, slack);
        if (ok)
            ok = run_bound_holds(bc, 400, [&](const Strategy& x, long long) { return best_response_column(bc.a, x); },
                                 slack);
        for (int rep = 0; rep < 200 && ok; ++rep) {
            RandomStream rng(seed, 20000 + 100 * ci + rep);
            ok = run_bound_holds(bc, 400,
                                 [&](const Strategy&, long long) { return static_cast<int>(rng.next_u64() % bc.a.cols()); },
                                 slack);
        }
        oks[ci] = ok ? 1 : 0;
        slacks[ci] = slack;
    });
    bool all = true;
    for (size_t i = 0; i < cases.size(); ++i) {
        all = all && oks[i] == 1;
        worst_slack = std::min(worst_slack, slacks[i]);
    }
    r.pass = all;
    std::ostringstream d;
    d << "n in {2,3,4}: exhaustive 4^12 + best-response + 200 random runs each; min bound slack "
      << format_sig12(worst_slack);
    r.detail = d.str();
    return r;
}

// --- 3. swap identity ----------------------------------------------------------

inline CriterionResult swap_identity(uint64_t seed) {
    CriterionResult r;
    r.name = "swap-identity";
    RandomStream rng(seed, 303);
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const int len = 1 + static_cast<int>(rng.next_u64() % 200);
        std::vector<int> labels(len);
        for (int& v : labels) v = 1 + static_cast<int>(rng.next_u64() % 2);
        const auto [lhs, rhs] = swap_identity_check(labels);
        ok = lhs == rhs;
    }
    r.pass = ok;
    r.detail = "1000 random {1,2} sequences of length <= 200, lhs == rhs exactly";
    return r;
}

// --- 4. figure reproduction ------------------------------------------------------

struct FigureBatch {
    bool pass_a = false;
    bool pass_b = false;
    std::string note;
};

inline CriterionResult figure_reproduction(uint64_t seed, int threads, Audit& audit) {
    CriterionResult r;
    r.name = "figure-reproduction";
    const GameMatrix game(Matrix::from_rows({{2.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0}}));
    const std::vector<long long> horizons = {10, 100, 1000, 10000, 100000, 1000000};
    const int trials = 32;
    const std::vector<AdversaryKind> advs = {AdversaryKind::hybrid, AdversaryKind::best_response,
                                             AdversaryKind::adaptive};
    const std::vector<LearnerKind> lrns = {LearnerKind::ours, LearnerKind::ucb, LearnerKind::exp3};

    int batches_ok = 0;
    std::ostringstream notes;
    for (int batch = 0; batch < 10; ++batch) {
        // mean(10^6) per (adversary, learner) and final-decade slopes
        double final_mean[3][3];
        double final_slope[3][3];
        for (int ai = 0; ai < 3; ++ai) {
            for (int li = 0; li < 3; ++li) {
                RunSpec spec;
                spec.game = &game;
                spec.noise = NoiseModel{NoiseKind::bernoulli};
                spec.learner = lrns[li];
                spec.learner_options.skip_exploration = true;  // the experiment protocol variant
                spec.adversary = advs[ai];
                spec.base_seed = mix_seed(seed, 40000 + batch * 100 + ai * 10 + li);
                const SweepResult sweep = horizon_sweep(spec, horizons, trials, threads);
                audit.absorb(sweep);
                final_mean[ai][li] = sweep.cells.back().agg.mean;
                final_slope[ai][li] = sweep.slopes.back();
            }
        }
        bool a_ok = true;
        for (int ai = 0; ai < 3; ++ai)
            a_ok = a_ok && final_mean[ai][0] < final_mean[ai][1] && final_mean[ai][0] < final_mean[ai][2];
        const double s_ours = final_slope[1][0], s_ucb = final_slope[1][1], s_exp3 = final_slope[1][2];
        const bool b_ok = s_ours <= 0.35 && s_ucb >= 0.35 && s_ucb <= 0.65 && s_exp3 >= 0.35 && s_exp3 <= 0.65;
        if (a_ok && b_ok) ++batches_ok;
        notes << (batch ? " " : "") << "b" << batch << (a_ok && b_ok ? "+" : "-");
        if (batch == 0) {
            notes << " [T=1e6 br: ours=" << format_sig12(final_mean[1][0]) << " ucb=" << format_sig12(final_mean[1][1])
                  << " exp3=" << format_sig12(final_mean[1][2]) << "; slopes ours=" << format_sig12(s_ours)
                  << " ucb=" << format_sig12(s_ucb) << " exp3=" << format_sig12(s_exp3) << "]";
        }
    }
    r.pass = batches_ok >= 9;
    r.detail = std::to_string(batches_ok) + "/10 seed batches passed; " + notes.str();
    return r;
}

// --- 5. the ucb failure demo ------------------------------------------------------

inline CriterionResult ucb_failure(uint64_t seed, int threads, Audit& audit) {
    CriterionResult r;
    r.name = "ucb-failure";
    const HardInstance inst = generate_hard_instance(HardFamily::ucb_burnin, {.horizon = 1000000});
    const std::vector<long long> horizons = {1000, 10000, 100000, 1000000};
    const int trials = 16;

    RunSpec ucb_spec;
    ucb_spec.game = &inst.game;
    ucb_spec.noise = inst.noise;
    ucb_spec.learner = LearnerKind::ucb;
    ucb_spec.adversary = AdversaryKind::ucb_killer;
    ucb_spec.base_seed = mix_seed(seed, 50001);
    const SweepResult ucb_sweep = horizon_sweep(ucb_spec, horizons, trials, threads);
    audit.absorb(ucb_sweep);

    RunSpec ours_spec = ucb_spec;
    ours_spec.learner = LearnerKind::ours;
    ours_spec.learner_options.skip_exploration = true;
    ours_spec.base_seed = mix_seed(seed, 50002);
    const SweepResult ours_sweep = horizon_sweep(ours_spec, horizons, trials, threads);
    audit.absorb(ours_sweep);

    bool ratios_ok = true;
    std::ostringstream d;
    d << "ucb R/sqrt(T):";
    double prev = 0.0;
    for (size_t h = 0; h < horizons.size(); ++h) {
        const double ratio = ucb_sweep.cells[h].agg.mean / std::sqrt(static_cast<double>(horizons[h]));
        d << ' ' << format_sig12(ratio);
        if (h > 0 && ratio < 0.8 * prev) ratios_ok = false;
        prev = ratio;
    }
    const double ours_slope = ours_sweep.slopes.back();
    d << "; ours final-decade slope " << format_sig12(ours_slope);
    r.pass = ratios_ok && ours_slope <= 0.35;
    r.detail = d.str();
    return r;
}

// --- 6. the myopic bandit failure demo ---------------------------------------------

inline CriterionResult exp3_failure(uint64_t seed, int threads, Audit& audit) {
    CriterionResult r;
    r.name = "exp3-failure";
    const long long T = 1000000;
    const HardInstance inst = generate_hard_instance(HardFamily::bandit_failure, {.horizon = T});
    RunSpec spec;
    spec.game = &inst.game;
    spec.noise = inst.noise;
    spec.learner = LearnerKind::exp3;
    spec.adversary = AdversaryKind::fixed_mixed;
    spec.adversary_params.fixed_y = inst.column_strategies[0].w;
    spec.horizon = T;
    spec.base_seed = mix_seed(seed, 60001);
    const auto trials = monte_carlo_trials(spec, 32, threads);
    for (const auto& t : trials) audit.absorb(t.min_prefix_slack);
    const Aggregate agg = aggregate_nash(trials);
    const double threshold = 0.003 * std::sqrt(static_cast<double>(T));
    r.pass = agg.mean >= threshold;
    r.detail = "mean nash regret " + format_sig12(agg.mean) + " (stderr " + format_sig12(agg.stderr_) +
               ") vs threshold " + format_sig12(threshold);
    return r;
}

// --- 7. submatrix identification ----------------------------------------------------

inline GameMatrix submatrix_instance() {
    // rescaled [[1,0,1],[0,1,1],[0,0,.5]]: inner 2x2 equilibrium x*=y*=(1/2,1/2),
    // excluded row/column gaps 0.5 on the rescaled scale
    return GameMatrix(Matrix::from_rows({{1, -1, 1}, {-1, 1, 1}, {-1, -1, 0}}));
}

// Runs the identification phase until it fixes supports or the horizon ends.
inline bool identify_supports(const GameMatrix& game, NoiseModel noise, long long horizon, RandomStream rng,
                              long long* rounds_out = nullptr) {
    FullInfoLearner learner(game.rows(), game.cols(), horizon);
    NashOracleAdversary adversary(game);
    Environment env(game, noise);
    long long t = 0;
    while (t < horizon && learner.phase() == FullInfoLearner::Phase::identify) {
        const Strategy& x = learner.next();
        const Strategy& y = adversary.next(t + 1, horizon, x);
        Observation obs;
        obs.t = ++t;
        obs.i = rng.sample(x);
        obs.j = rng.sample(y);
        const Matrix draw = env.draw_full(rng);
        obs.value = draw(obs.i, obs.j);
        obs.full = &draw;
        learner.observe(obs);
    }
    if (rounds_out) *rounds_out = t;
    if (learner.phase() == FullInfoLearner::Phase::identify) return false;
    const NashSolution truth = solve(game);
    return learner.selected_rows() == truth.support_x && learner.selected_cols() == truth.support_y;
}

inline CriterionResult submatrix_identification(uint64_t seed, int threads) {
    CriterionResult r;
    r.name = "submatrix-identification";
    const GameMatrix game = submatrix_instance();
    const long long T = 1000000;

    long long noiseless_rounds = 0;
    const bool noiseless_ok =
        identify_supports(game, NoiseModel{NoiseKind::none}, T, RandomStream(mix_seed(seed, 70001), 0), &noiseless_rounds);

    std::vector<int> hits(100, 0);
    parallel_for(100, threads, [&](int trial) {
        hits[trial] = identify_supports(game, NoiseModel{NoiseKind::bernoulli}, T,
                                        RandomStream(mix_seed(seed, 70002), static_cast<uint64_t>(trial)))
                          ? 1
                          : 0;
    });
    int hit_count = 0;
    for (int h : hits) hit_count += h;
    r.pass = noiseless_ok && hit_count >= 95;
    r.detail = "noiseless: " + std::string(noiseless_ok ? "exact supports" : "WRONG") + " at t=" +
               std::to_string(noiseless_rounds) + "; noisy: " + std::to_string(hit_count) + "/100 trials";
    return r;
}

// --- 8. ledger invariants -------------------------------------------------------------

inline CriterionResult ledger_invariants(uint64_t seed, int threads, const Audit& audit) {
    CriterionResult r;
    r.name = "ledger-invariants";
    const GameMatrix game(Matrix::from_rows({{2.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0}}));
    const NashSolution sol = solve(game);

    Audit local = audit;
    const std::vector<LearnerKind> lrns = {LearnerKind::ours, LearnerKind::ucb, LearnerKind::exp3,
                                           LearnerKind::uniform};
    const std::vector<AdversaryKind> advs = {AdversaryKind::nash_oracle, AdversaryKind::best_response,
                                             AdversaryKind::hybrid};
    for (LearnerKind lk : lrns)
        for (AdversaryKind ak : advs) {
            RunSpec spec;
            spec.game = &game;
            spec.noise = NoiseModel{NoiseKind::bernoulli};
            spec.learner = lk;
            spec.learner_options.skip_exploration = true;
            spec.adversary = ak;
            spec.horizon = 10000;
            spec.base_seed = mix_seed(seed, 80001);
            const auto trials = monte_carlo_trials(spec, 4, threads);
            for (const auto& t : trials) local.absorb(t.min_prefix_slack);
        }
    // the equilibrium fixed point: zero regret at every prefix
    {
        FixedLearner fixed(sol.x_star);
        NashOracleAdversary oracle(game);
        MatchRecord rec = run_match(fixed, oracle, game, NoiseModel{NoiseKind::none}, 1000,
                                    RandomStream(mix_seed(seed, 80002), 0), sol.value);
        local.absorb(rec.min_prefix_slack);
        if (std::fabs(rec.nash_regret) > 1e-9) {
            r.pass = false;
            r.detail = "equilibrium fixed point has nonzero regret";
            return r;
        }
    }

    // determinism: the same config run twice, and serial vs threaded, must
    // produce byte-identical CSV text
    auto render = [&](int nthreads) {
        RunSpec spec;
        spec.game = &game;
        spec.noise = NoiseModel{NoiseKind::bernoulli};
        spec.learner = LearnerKind::ours;
        spec.learner_options.skip_exploration = true;
        spec.adversary = AdversaryKind::best_response;
        spec.base_seed = mix_seed(seed, 80003);
        const SweepResult sweep = horizon_sweep(spec, {10, 100, 1000}, 8, nthreads);
        std::vector<SweepRow> rows;
        for (const auto& cell : sweep.cells)
            for (const auto& tr : cell.trials)
                rows.push_back({"ours", "best_response", "diag", cell.horizon, tr.trial, tr.stream_id,
                                tr.nash_regret, tr.external_regret});
        return raw_csv(rows);
    };
    const std::string csv1 = render(threads);
    const std::string csv2 = render(threads);
    const std::string csv3 = render(1);
    const bool deterministic = csv1 == csv2 && csv1 == csv3;

    const bool slack_ok = local.min_prefix_slack >= -1e-9;
    r.pass = deterministic && slack_ok;
    r.detail = "min external-nash prefix slack " + format_sig12(local.min_prefix_slack) + " over " +
               std::to_string(local.matches) + " audited matches; determinism " +
               (deterministic ? "byte-identical" : "VIOLATED");
    return r;
}

}  // namespace acceptance

inline std::vector<CriterionResult> run_acceptance(uint64_t seed, const std::vector<std::string>& only, int threads,
                                                   std::ostream* log) {
    using namespace acceptance;
    Audit audit;
    std::vector<CriterionResult> results;
    auto wanted = [&](const std::string& name) {
        if (only.empty()) return true;
        for (const auto& o : only)
            if (o == name) return true;
        return false;
    };
    auto run = [&](const std::string& name, const std::function<CriterionResult()>& fn) {
        if (!wanted(name)) return;
        const auto start = std::chrono::steady_clock::now();
        CriterionResult res = fn();
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (log)
            (*log) << (res.pass ? "[PASS] " : "[FAIL] ") << res.name << " (" << format_sig12(res.seconds)
                   << "s): " << res.detail << std::endl;
        results.push_back(std::move(res));
    };

    run("solver-oracle", [&] { return solver_oracle(seed); });
    run("subroutine-bound", [&] { return subroutine_bound(seed, threads); });
    run("swap-identity", [&] { return swap_identity(seed); });
    run("figure-reproduction", [&] { return figure_reproduction(seed, threads, audit); });
    run("ucb-failure", [&] { return ucb_failure(seed, threads, audit); });
    run("exp3-failure", [&] { return exp3_failure(seed, threads, audit); });
    run("submatrix-identification", [&] { return submatrix_identification(seed, threads); });
    run("ledger-invariants", [&] { return ledger_invariants(seed, threads, audit); });
    return results;
}

}  // namespace zerosum
