#pragma once

// Monte Carlo aggregation and horizon sweeps. Every trial is fully isolated:
// fresh learner, fresh adversary, its own RandomStream derived from
// (base_seed, stream id). Trials run on a small worker pool; results land in
// preassigned slots, so aggregates are independent of scheduling and thread
// count.

#include <atomic>
#include <cmath>
#include <memory>
#include <thread>

#include "zerosum/adversaries.hpp"
#include "zerosum/baselines.hpp"
#include "zerosum/bandit2x2.hpp"
#include "zerosum/full_info.hpp"
#include "zerosum/match.hpp"

namespace zerosum {

template <class Fn>
inline void parallel_for(int jobs, int threads, Fn fn) {
    threads = std::max(1, std::min(threads, jobs));
    if (threads == 1) {
        for (int i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i = cursor.fetch_add(1); i < jobs; i = cursor.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

enum class LearnerKind { ours, ucb, exp3, full_info, uniform };

struct LearnerOptions {
    bool skip_exploration = false;
};

inline std::unique_ptr<Learner> make_learner(LearnerKind kind, const GameMatrix& game, long long horizon,
                                             const LearnerOptions& opt = {}) {
    switch (kind) {
        case LearnerKind::ours: {
            if (game.rows() != 2 || game.cols() != 2) throw Error("the bandit learner requires a 2x2 game");
            Bandit2x2Learner::Config cfg;
            cfg.horizon = horizon;
            cfg.skip_exploration = opt.skip_exploration;
            return std::make_unique<Bandit2x2Learner>(cfg);
        }
        case LearnerKind::ucb:
            return std::make_unique<UcbLearner>(game.rows(), game.cols(), horizon);
        case LearnerKind::exp3:
            return std::make_unique<Exp3Learner>(game.rows(), horizon);
        case LearnerKind::full_info:
            return std::make_unique<FullInfoLearner>(game.rows(), game.cols(), horizon);
        case LearnerKind::uniform:
            return std::make_unique<FixedLearner>(Strategy::uniform(game.rows()));
    }
    throw Error("unknown learner kind");
}

struct RunSpec {
    const GameMatrix* game = nullptr;
    NoiseModel noise;
    LearnerKind learner = LearnerKind::ours;
    LearnerOptions learner_options;
    AdversaryKind adversary = AdversaryKind::best_response;
    AdversaryParams adversary_params;
    long long horizon = 0;
    uint64_t base_seed = 0;
};

struct TrialResult {
    long long horizon = 0;
    int trial = 0;
    uint64_t stream_id = 0;
    double nash_regret = 0.0;
    double external_regret = 0.0;
    double min_prefix_slack = 0.0;
    bool aborted = false;
};

inline TrialResult run_trial(const RunSpec& spec, uint64_t stream_id, int trial_index) {
    auto learner = make_learner(spec.learner, *spec.game, spec.horizon, spec.learner_options);
    auto adversary = make_adversary(spec.adversary, spec.adversary_params, *spec.game);
    const double value = solve(*spec.game).value;
    MatchRecord rec = run_match(*learner, *adversary, *spec.game, spec.noise, spec.horizon,
                                RandomStream(spec.base_seed, stream_id), value);
    TrialResult r;
    r.horizon = spec.horizon;
    r.trial = trial_index;
    r.stream_id = stream_id;
    r.nash_regret = rec.nash_regret;
    r.external_regret = rec.external_regret;
    r.min_prefix_slack = rec.min_prefix_slack;
    r.aborted = rec.aborted;
    return r;
}

struct Aggregate {
    double mean = 0.0;
    double stderr_ = 0.0;
    int trials = 0;
};

inline Aggregate aggregate_nash(const std::vector<TrialResult>& rs) {
    Aggregate a;
    a.trials = static_cast<int>(rs.size());
    if (rs.empty()) return a;
    double sum = 0.0;
    for (const auto& r : rs) sum += r.nash_regret;
    a.mean = sum / a.trials;
    if (a.trials > 1) {
        double ss = 0.0;
        for (const auto& r : rs) ss += (r.nash_regret - a.mean) * (r.nash_regret - a.mean);
        a.stderr_ = std::sqrt(ss / (a.trials - 1)) / std::sqrt(static_cast<double>(a.trials));
    }
    return a;
}

inline std::vector<TrialResult> monte_carlo_trials(const RunSpec& spec, int n, int threads) {
    std::vector<TrialResult> out(n);
    parallel_for(n, threads, [&](int i) { out[i] = run_trial(spec, static_cast<uint64_t>(i), i); });
    return out;
}

inline Aggregate monte_carlo(const RunSpec& spec, int n, int threads = 1) {
    return aggregate_nash(monte_carlo_trials(spec, n, threads));
}

struct SweepCell {
    long long horizon = 0;
    Aggregate agg;
    std::vector<TrialResult> trials;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<double> slopes;  // slopes[k] between horizons k and k+1
    double min_prefix_slack = std::numeric_limits<double>::infinity();

    double slope_between(size_t k) const { return slopes.at(k); }
    double final_slope() const { return slopes.empty() ? std::numeric_limits<double>::quiet_NaN() : slopes.back(); }
};

// Horizons run independently; stream ids mix the horizon index and trial so
// no two cells share randomness.
inline SweepResult horizon_sweep(RunSpec spec, const std::vector<long long>& horizons, int trials, int threads) {
    for (size_t h = 1; h < horizons.size(); ++h)
        if (horizons[h] <= horizons[h - 1]) throw Error("horizons must be strictly increasing");
    SweepResult res;
    res.cells.resize(horizons.size());
    for (size_t h = 0; h < horizons.size(); ++h) {
        res.cells[h].horizon = horizons[h];
        res.cells[h].trials.resize(trials);
    }
    const int jobs = static_cast<int>(horizons.size()) * trials;
    parallel_for(jobs, threads, [&](int job) {
        const int h = job / trials;
        const int trial = job % trials;
        RunSpec cell_spec = spec;
        cell_spec.horizon = horizons[h];
        const uint64_t stream_id = static_cast<uint64_t>(h) * 1000003ull + static_cast<uint64_t>(trial);
        res.cells[h].trials[trial] = run_trial(cell_spec, stream_id, trial);
    });
    for (auto& cell : res.cells) {
        cell.agg = aggregate_nash(cell.trials);
        for (const auto& tr : cell.trials) res.min_prefix_slack = std::min(res.min_prefix_slack, tr.min_prefix_slack);
    }
    for (size_t h = 0; h + 1 < res.cells.size(); ++h) {
        const double r0 = res.cells[h].agg.mean;
        const double r1 = res.cells[h + 1].agg.mean;
        if (r0 > 0.0 && r1 > 0.0) {
            res.slopes.push_back((std::log(r1) - std::log(r0)) /
                                 (std::log(static_cast<double>(res.cells[h + 1].horizon)) -
                                  std::log(static_cast<double>(res.cells[h].horizon))));
        } else {
            res.slopes.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    return res;
}

}  // namespace zerosum
