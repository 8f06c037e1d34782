#pragma once

// The match loop. Per round: the learner emits x_t, the adversary (who may
// inspect x_t and the true matrix) emits y_t, indices i_t ~ x_t and j_t ~ y_t
// are sampled, feedback is routed per the learner's declared mode, and the
// ledgers advance on expected payoffs x_t^T A y_t over the original [-1,1]
// entries. RNG order per round is fixed: i_t, j_t, then the feedback draws.

#include <memory>
#include <string>
#include <vector>

#include "zerosum/environment.hpp"
#include "zerosum/nash.hpp"
#include "zerosum/subroutine.hpp"

namespace zerosum {

struct Observation {
    long long t = 0;
    int i = -1;
    int j = -1;
    double value = 0.0;       // observed entry for (i,j), rescaled scale
    const Matrix* full = nullptr;  // full draw when the learner asked for it
};

struct PhaseEvent {
    long long t = 0;
    std::string label;
};

class Learner {
public:
    virtual ~Learner() = default;
    virtual FeedbackMode feedback() const = 0;
    // x_t; the reference stays valid until the next call
    virtual const Strategy& next() = 0;
    virtual void observe(const Observation& obs) = 0;
    virtual const std::vector<PhaseEvent>& events() const { return no_events_; }

private:
    std::vector<PhaseEvent> no_events_;
};

class Adversary {
public:
    virtual ~Adversary() = default;
    virtual const Strategy& next(long long t, long long horizon, const Strategy& x) = 0;
};

struct TraceRow {
    long long t;
    int i, j;
    double reward_raw;
    double expected_raw;
};

struct MatchRecord {
    long long horizon = 0;
    double value_raw = 0.0;       // V* of the true game, original scale
    double nash_regret = 0.0;     // T*V* - sum x^T A y
    double external_regret = 0.0; // max_i sum e_i^T A y - sum x^T A y
    double realized_sum = 0.0;    // sum of realized rewards, original scale
    double expected_sum = 0.0;    // sum of expected payoffs, original scale
    double min_prefix_slack = 0.0;  // min over prefixes of external - nash
    uint64_t base_seed = 0;
    uint64_t stream_id = 0;
    bool aborted = false;
    std::string abort_reason;
    std::vector<PhaseEvent> events;
    std::vector<TraceRow> trace;
};

inline MatchRecord run_match(Learner& learner, Adversary& adversary, const GameMatrix& game,
                             NoiseModel noise, long long horizon, RandomStream rng,
                             double value_raw, bool keep_trace = false) {
    const Matrix& raw = game.entries();
    const int n = raw.rows(), m = raw.cols();
    Environment env(game, noise);

    MatchRecord rec;
    rec.horizon = horizon;
    rec.value_raw = value_raw;
    rec.base_seed = rng.base_seed();
    rec.stream_id = rng.stream_id();
    rec.min_prefix_slack = std::numeric_limits<double>::infinity();
    if (keep_trace) rec.trace.reserve(static_cast<size_t>(horizon));

    std::vector<double> row_cum(n, 0.0);
    double total = 0.0;
    Matrix full_draw;
    const bool full_mode = learner.feedback() == FeedbackMode::full;

    try {
        for (long long t = 1; t <= horizon; ++t) {
            const Strategy& x = learner.next();
            const Strategy& y = adversary.next(t, horizon, x);
            const int i = rng.sample(x);
            const int j = rng.sample(y);

            Observation obs;
            obs.t = t;
            obs.i = i;
            obs.j = j;
            if (full_mode) {
                full_draw = env.draw_full(rng);
                obs.value = full_draw(i, j);
                obs.full = &full_draw;
            } else {
                obs.value = env.draw_entry(rng, i, j);
            }

            double expected = 0.0;
            for (int r = 0; r < n; ++r) {
                double rp = 0.0;
                for (int c = 0; c < m; ++c) rp += raw(r, c) * y.w[c];
                row_cum[r] += rp;
                expected += x.w[r] * rp;
            }
            total += expected;
            rec.expected_sum += expected;
            rec.realized_sum += 2.0 * obs.value - 1.0;  // back to the original scale

            double best_row = row_cum[0];
            for (int r = 1; r < n; ++r) best_row = std::max(best_row, row_cum[r]);
            const double nash = static_cast<double>(t) * value_raw - total;
            const double external = best_row - total;
            rec.min_prefix_slack = std::min(rec.min_prefix_slack, external - nash);

            if (keep_trace) rec.trace.push_back({t, i, j, 2.0 * obs.value - 1.0, expected});

            learner.observe(obs);
        }
        const double best_row = *std::max_element(row_cum.begin(), row_cum.end());
        rec.nash_regret = static_cast<double>(horizon) * value_raw - total;
        rec.external_regret = best_row - total;
    } catch (const Error& e) {
        rec.aborted = true;
        rec.abort_reason = e.what();
    }
    rec.events = learner.events();
    return rec;
}

// fixed-strategy learner, handy for ledger checks
class FixedLearner : public Learner {
public:
    explicit FixedLearner(Strategy x) : x_(std::move(x)) {}
    FeedbackMode feedback() const override { return FeedbackMode::bandit; }
    const Strategy& next() override { return x_; }
    void observe(const Observation&) override {}

private:
    Strategy x_;
};

}  // namespace zerosum
