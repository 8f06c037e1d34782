#pragma once

// Column players and hard-instance generators. Adversaries see the true
// matrix and the row player's mixed strategy x_t before committing to y_t;
// best-response ties always break toward the lowest index.

#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "zerosum/match.hpp"

namespace zerosum {

enum class AdversaryKind {
    fixed_mixed,
    nash_oracle,
    best_response,
    hybrid,     // equilibrium for the first switch_fraction*T rounds, then best response
    adaptive,   // punish visible deviation in the first half, then best response
    ucb_killer, // the burn-in construction for the optimistic baseline
    external_regret_pair,
};

struct AdversaryParams {
    double switch_fraction = 0.5;
    double threshold = 0.05;   // adaptive: deviation tolerance in infinity norm
    int which = 1;             // external_regret_pair: plays y^(1) or y^(2)
    std::vector<double> fixed_y;
};

class FixedMixedAdversary : public Adversary {
public:
    explicit FixedMixedAdversary(Strategy y) : y_(std::move(y)) {}
    const Strategy& next(long long, long long, const Strategy&) override { return y_; }

private:
    Strategy y_;
};

class NashOracleAdversary : public Adversary {
public:
    explicit NashOracleAdversary(const GameMatrix& game) : y_(solve(game).y_star) {}
    const Strategy& next(long long, long long, const Strategy&) override { return y_; }

private:
    Strategy y_;
};

class BestResponseAdversary : public Adversary {
public:
    explicit BestResponseAdversary(const GameMatrix& game) : game_(&game), y_(Strategy::uniform(game.cols())) {}
    const Strategy& next(long long, long long, const Strategy& x) override {
        const int j = best_response_column(game_->entries(), x);
        for (double& w : y_.w) w = 0.0;
        y_.w[j] = 1.0;
        return y_;
    }

private:
    const GameMatrix* game_;
    Strategy y_;
};

class HybridAdversary : public Adversary {
public:
    HybridAdversary(const GameMatrix& game, double switch_fraction)
        : game_(&game), switch_fraction_(switch_fraction), y_star_(solve(game).y_star),
          y_(Strategy::uniform(game.cols())) {}
    const Strategy& next(long long t, long long horizon, const Strategy& x) override {
        if (static_cast<double>(t) <= switch_fraction_ * static_cast<double>(horizon)) return y_star_;
        const int j = best_response_column(game_->entries(), x);
        for (double& w : y_.w) w = 0.0;
        y_.w[j] = 1.0;
        return y_;
    }

private:
    const GameMatrix* game_;
    double switch_fraction_;
    Strategy y_star_;
    Strategy y_;
};

// First half: best-respond whenever the row player visibly strays from x*
// (infinity norm above the threshold), otherwise feed it the equilibrium.
// Second half: best response throughout.
class AdaptiveAdversary : public Adversary {
public:
    AdaptiveAdversary(const GameMatrix& game, double threshold, double switch_fraction)
        : game_(&game), threshold_(threshold), switch_fraction_(switch_fraction) {
        const NashSolution sol = solve(game);
        x_star_ = sol.x_star;
        y_star_ = sol.y_star;
        y_ = Strategy::uniform(game.cols());
    }
    const Strategy& next(long long t, long long horizon, const Strategy& x) override {
        if (static_cast<double>(t) <= switch_fraction_ * static_cast<double>(horizon)) {
            double dev = 0.0;
            for (int i = 0; i < x.size(); ++i) dev = std::max(dev, std::fabs(x.w[i] - x_star_.w[i]));
            if (dev <= threshold_) return y_star_;
        }
        const int j = best_response_column(game_->entries(), x);
        for (double& w : y_.w) w = 0.0;
        y_.w[j] = 1.0;
        return y_;
    }

private:
    const GameMatrix* game_;
    double threshold_;
    double switch_fraction_;
    Strategy x_star_, y_star_;
    Strategy y_;
};

// Burn-in adversary for the optimistic baseline on a 2x2 game. Until
// t0 = T/2 + sqrt(T ln T): pure column 1 when (x_t)_1 < 0.33, pure column 2
// when (x_t)_1 > 0.34, the equilibrium in between. Afterwards best response.
class UcbKillerAdversary : public Adversary {
public:
    explicit UcbKillerAdversary(const GameMatrix& game) : game_(&game), y_(Strategy::uniform(game.cols())) {
        if (game.cols() != 2 || game.rows() != 2) throw Error("ucb_killer requires a 2x2 game");
        y_star_ = solve(game).y_star;
    }
    const Strategy& next(long long t, long long horizon, const Strategy& x) override {
        const double t0 = static_cast<double>(horizon) / 2.0 +
                          std::sqrt(static_cast<double>(horizon) * std::log(static_cast<double>(horizon)));
        if (static_cast<double>(t) <= t0) {
            if (x.w[0] < 0.33) return set_pure(0);
            if (x.w[0] > 0.34) return set_pure(1);
            return y_star_;
        }
        return set_pure(best_response_column(game_->entries(), x));
    }

private:
    const Strategy& set_pure(int j) {
        y_.w[0] = y_.w[1] = 0.0;
        y_.w[j] = 1.0;
        return y_;
    }
    const GameMatrix* game_;
    Strategy y_star_;
    Strategy y_;
};

inline std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, const AdversaryParams& params,
                                                 const GameMatrix& game) {
    switch (kind) {
        case AdversaryKind::fixed_mixed:
            return std::make_unique<FixedMixedAdversary>(Strategy(params.fixed_y));
        case AdversaryKind::nash_oracle:
            return std::make_unique<NashOracleAdversary>(game);
        case AdversaryKind::best_response:
            return std::make_unique<BestResponseAdversary>(game);
        case AdversaryKind::hybrid:
            return std::make_unique<HybridAdversary>(game, params.switch_fraction);
        case AdversaryKind::adaptive:
            return std::make_unique<AdaptiveAdversary>(game, params.threshold, params.switch_fraction);
        case AdversaryKind::ucb_killer:
            return std::make_unique<UcbKillerAdversary>(game);
        case AdversaryKind::external_regret_pair:
            return std::make_unique<FixedMixedAdversary>(Strategy(params.fixed_y));
    }
    throw Error("unknown adversary kind");
}

// --- Hard-instance generators ----------------------------------------------

enum class HardFamily {
    indistinguishable_pair,  // two 2x2 matrices split by a 1/sqrt(T) perturbation
    external_regret_pair,    // 2x2 with the +-sqrt(delta_min/(64 D T)) column pair
    rps_pair,                // rock-paper-scissors with the +-1/(16 sqrt(T)) pair
    bandit_failure,          // the two-armed trap for myopic bandit learners
    ucb_burnin,              // diag(2/3,1/3), noiseless, with the burn-in adversary
};

struct HardInstanceParams {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    long long horizon = 0;
    int which = 1;  // for the paired families: 1 or 2
};

struct HardInstance {
    GameMatrix game;
    std::vector<Strategy> column_strategies;  // fixed strategies the family defines
    NoiseModel noise;
    AdversaryKind paired_adversary = AdversaryKind::best_response;
};

inline HardInstance generate_hard_instance(HardFamily family, const HardInstanceParams& p) {
    if (p.horizon < 1) throw InvalidFamilyParams("horizon must be positive");
    const double T = static_cast<double>(p.horizon);

    switch (family) {
        case HardFamily::indistinguishable_pair: {
            const double a = p.a, b = p.b, c = p.c, d = p.d;
            if (!(a > b && a > c && d > b && d > c))
                throw InvalidFamilyParams("need a>b, a>c, d>b, d>c");
            if (a > 0.5 || b > 0.5 || c > 0.5 || d > 0.5 || b <= 0.0 || c <= 0.0)
                throw InvalidFamilyParams("entries must lie in (0, 1/2]");
            const double delta_min = std::min(b, c);
            const double e1 = std::sqrt(delta_min) * (a - c) / (32.0 * std::sqrt(T));
            const double e2 = std::sqrt(delta_min) * (d - b) / (32.0 * std::sqrt(T));
            const double s = (p.which == 1) ? -1.0 : 1.0;
            Matrix m = Matrix::from_rows({{a + s * e1, b - s * e2}, {c + s * e1, d - s * e2}});
            HardInstance h{GameMatrix(std::move(m)), {}, NoiseModel{NoiseKind::bernoulli}, AdversaryKind::best_response};
            return h;
        }
        case HardFamily::external_regret_pair: {
            const double a = p.a, b = p.b, c = p.c, d = p.d;
            Matrix m = Matrix::from_rows({{a, b}, {c, d}});
            GameMatrix game(m);
            const NashSolution sol = solve(game);
            if (sol.is_psne) throw InvalidFamilyParams("family needs a full-support equilibrium");
            const double D = a - b - c + d;
            const double delta_min = std::min(std::min(std::fabs(a - b), std::fabs(c - d)),
                                              std::min(std::fabs(a - c), std::fabs(b - d)));
            if (D * T <= 0.0) throw InvalidFamilyParams("need positive D");
            const double eps = std::sqrt(delta_min / (64.0 * D * T));
            const double y1 = (d - b) / D;
            const double y2 = (a - c) / D;
            if (y1 + eps > 1.0 || y1 - eps < 0.0)
                throw InvalidFamilyParams("horizon too small: perturbed strategies leave the simplex");
            HardInstance h{std::move(game),
                           {Strategy({y1 + eps, y2 - eps}), Strategy({y1 - eps, y2 + eps})},
                           NoiseModel{NoiseKind::none},
                           AdversaryKind::external_regret_pair};
            return h;
        }
        case HardFamily::rps_pair: {
            Matrix m = Matrix::from_rows({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
            const double eps = 1.0 / (16.0 * std::sqrt(T));
            if (1.0 / 3.0 - eps < 0.0) throw InvalidFamilyParams("horizon too small for the perturbation");
            HardInstance h{GameMatrix(std::move(m)),
                           {Strategy({1.0 / 3.0 + eps, 2.0 / 3.0 - eps, 0.0}),
                            Strategy({1.0 / 3.0 - eps, 2.0 / 3.0 + eps, 0.0})},
                           NoiseModel{NoiseKind::none},
                           AdversaryKind::external_regret_pair};
            return h;
        }
        case HardFamily::bandit_failure: {
            Matrix m = Matrix::from_rows({{0.75, 0.25}, {0.0, 1.0}});
            const double eps = 1.0 / (100.0 * std::sqrt(T));
            HardInstance h{GameMatrix(std::move(m)),
                           {Strategy({0.5 + eps, 0.5 - eps})},
                           NoiseModel{NoiseKind::bernoulli},
                           AdversaryKind::fixed_mixed};
            return h;
        }
        case HardFamily::ucb_burnin: {
            Matrix m = Matrix::from_rows({{2.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0}});
            HardInstance h{GameMatrix(std::move(m)), {}, NoiseModel{NoiseKind::none}, AdversaryKind::ucb_killer};
            return h;
        }
    }
    throw InvalidFamilyParams("unknown family");
}

}  // namespace zerosum
