#include <doctest.h>

#include "zerosum/adversaries.hpp"
#include "zerosum/baselines.hpp"
#include "zerosum/match.hpp"
#include "zerosum/random.hpp"

using namespace zerosum;

namespace {
GameMatrix diag_game() { return GameMatrix(Matrix::from_rows({{2.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0}})); }
}

TEST_CASE("equal optimism leaves the maximin argument unchanged") {
    UcbLearner ucb(2, 2, 1000);
    // feed every cell the exact rescaled value the same number of times
    const Matrix r = diag_game().rescaled();
    for (int k = 0; k < 50; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Observation obs;
                obs.i = i;
                obs.j = j;
                obs.value = r(i, j);
                ucb.observe(obs);
            }
    const Strategy& x = ucb.next();
    CHECK(x.w[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(x.w[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("the burn-in count regime tilts the maximin point down") {
    // counts as in the burn-in analysis: n11 ~ 0.056T, n12 = n21 ~ 0.112T,
    // n22 ~ 0.222T; then D22 - D21 <= -0.5 sqrt(ln(64 T^4)/T) and the maximin
    // first coordinate drops below 1/3 by at least that much
    const double T = 1e6;
    const double L = std::log(64.0 * T * T * T * T);
    const double d11 = std::sqrt(L / (0.056 * T));
    const double d12 = std::sqrt(L / (0.112 * T));
    const double d21 = std::sqrt(L / (0.112 * T));
    const double d22 = std::sqrt(L / (0.222 * T));
    const double dd = d22 - d21;
    REQUIRE(dd <= -0.5 * std::sqrt(L / T));
    REQUIRE(d11 - d12 - d21 + d22 >= 0.0);

    Matrix tilde = Matrix::from_rows({{2.0 / 3.0 + d11, d12}, {d21, 1.0 / 3.0 + d22}});
    const MaximinSolution s = maximin(tilde);
    CHECK(s.x.w[0] <= 1.0 / 3.0 - 0.5 * std::sqrt(L / T) + 1e-12);
}

TEST_CASE("an unsampled cell pulls play toward its row") {
    UcbLearner ucb(2, 2, 1000000);
    const Matrix r = diag_game().rescaled();
    // sample everything except (1,0) heavily
    for (int k = 0; k < 2000; ++k) {
        for (auto [i, j] : {std::pair<int, int>{0, 0}, {0, 1}, {1, 1}}) {
            Observation obs;
            obs.i = i;
            obs.j = j;
            obs.value = r(i, j);
            ucb.observe(obs);
        }
    }
    const Strategy& x = ucb.next();
    CHECK(x.w[1] > 0.9);  // the optimistic unseen cell dominates row 1
}

TEST_CASE("ucb optimism holds on almost every round") {
    GameMatrix game = diag_game();
    const long long T = 2000;
    UcbLearner ucb(2, 2, T);
    BestResponseAdversary adv(game);
    Environment env(game, NoiseModel{NoiseKind::bernoulli});
    RandomStream rng(61, 0);
    int failures = 0;
    for (long long t = 1; t <= T; ++t) {
        const Strategy& x = ucb.next();
        bool optimistic = true;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                optimistic = optimistic && ucb.optimistic_matrix()(i, j) >= game.rescaled()(i, j);
        if (!optimistic) ++failures;
        const Strategy& y = adv.next(t, T, x);
        Observation obs;
        obs.i = rng.sample(x);
        obs.j = rng.sample(y);
        obs.value = env.draw_entry(rng, obs.i, obs.j);
        ucb.observe(obs);
    }
    CHECK(failures <= 2);  // at least a 1 - 1/T fraction of rounds
}

TEST_CASE("exp3 stays uniform under zero rewards") {
    Exp3Learner exp3(2, 1000);
    for (int t = 0; t < 500; ++t) {
        const Strategy& x = exp3.next();
        CHECK(x.w[0] == 0.5);
        Observation obs;
        obs.i = t % 2;
        obs.j = 0;
        obs.value = 0.0;
        exp3.observe(obs);
    }
}

TEST_CASE("exp3 exploits a deterministic best row") {
    const long long T = 10000;
    Exp3Learner exp3(2, T);
    RandomStream rng(62, 0);
    long long last_quarter_row0 = 0;
    for (long long t = 1; t <= T; ++t) {
        const Strategy& x = exp3.next();
        const int i = rng.sample(x);
        if (t > 3 * T / 4 && i == 0) ++last_quarter_row0;
        Observation obs;
        obs.i = i;
        obs.j = 0;
        obs.value = i == 0 ? 1.0 : 0.0;
        exp3.observe(obs);
    }
    CHECK(static_cast<double>(last_quarter_row0) / (T / 4) >= 0.9);
}

TEST_CASE("exp3 pulls symmetric arms equally in expectation") {
    // the weight random walk makes per-trial pull counts spread far beyond the
    // binomial band, so the band here is three standard errors over trials
    const long long T = 10000;
    const int trials = 256;
    double sum_frac = 0.0, sum_sq = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        Exp3Learner exp3(2, T);
        RandomStream rng(65, static_cast<uint64_t>(trial));
        long long n0 = 0;
        for (long long t = 1; t <= T; ++t) {
            const Strategy& x = exp3.next();
            const int i = rng.sample(x);
            n0 += (i == 0);
            Observation obs;
            obs.i = i;
            obs.j = 0;
            obs.value = static_cast<double>(rng.bernoulli(0.5));
            exp3.observe(obs);
        }
        const double frac = static_cast<double>(n0) / T;
        sum_frac += frac;
        sum_sq += frac * frac;
    }
    const double mean = sum_frac / trials;
    const double var = (sum_sq - trials * mean * mean) / (trials - 1);
    const double stderr_mean = std::sqrt(var / trials);
    CHECK(std::fabs(mean - 0.5) <= 3.0 * stderr_mean + 1e-3);
}

TEST_CASE("importance-weighted estimates are unbiased") {
    RandomStream rng(64, 0);
    const double p[2] = {0.3, 0.7};
    const double mu[2] = {0.6, 0.4};
    double est[2] = {0.0, 0.0};
    const int rounds = 200000;
    for (int t = 0; t < rounds; ++t) {
        const int i = rng.uniform01() < p[0] ? 0 : 1;
        const double r = static_cast<double>(rng.bernoulli(mu[i]));
        est[i] += r / p[i];
    }
    for (int i = 0; i < 2; ++i) {
        const double mean_est = est[i] / rounds;
        // 3 sigma of the importance-weighted estimator, var <= mu/p per round
        const double sigma = 3.0 * std::sqrt(mu[i] / p[i] / rounds);
        CHECK(std::fabs(mean_est - mu[i]) <= sigma + 1e-3);
    }
}

TEST_CASE("rewards outside [0,1] are rejected") {
    Exp3Learner exp3(2, 100);
    exp3.next();
    Observation obs;
    obs.i = 0;
    obs.j = 0;
    obs.value = 1.5;
    CHECK_THROWS_AS(exp3.observe(obs), RewardOutOfRange);
}
