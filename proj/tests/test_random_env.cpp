#include <doctest.h>

#include "zerosum/environment.hpp"

using namespace zerosum;

TEST_CASE("streams reproduce bit for bit and split cleanly") {
    RandomStream a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
        all_equal = all_equal && (va == vb);
        any_diff = any_diff || (va != vc);
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform01 stays in [0,1)") {
    RandomStream rng(1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("noiseless draws return the rescaled entries exactly") {
    const GameMatrix game(Matrix::from_rows({{2.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0}}));
    Environment env(game, NoiseModel{NoiseKind::none});
    RandomStream rng(3, 0);
    CHECK(env.draw_entry(rng, 0, 0) == (2.0 / 3.0 + 1.0) / 2.0);  // 5/6
    CHECK(env.draw_full(rng) == game.rescaled());
    CHECK_THROWS_AS(env.draw_entry(rng, 2, 0), IndexOutOfRange);
}

TEST_CASE("bernoulli draws have the right means") {
    // a degenerate mean-1 cell is always 1
    const GameMatrix game(Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}));  // rescaled (1,1) entry = 1
    Environment env(game, NoiseModel{NoiseKind::bernoulli});
    RandomStream rng(4, 0);
    for (int i = 0; i < 1000; ++i) CHECK(env.draw_entry(rng, 0, 0) == 1.0);

    // rescaled entry 1/2: empirical mean over 1e5 draws within the 3-sigma band
    const GameMatrix half(Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
    Environment henv(half, NoiseModel{NoiseKind::bernoulli});
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) sum += henv.draw_entry(rng, 0, 0);
    const double mean = sum / 100000.0;
    CHECK(mean >= 0.494);
    CHECK(mean <= 0.506);
}

TEST_CASE("index sampling from strategies") {
    RandomStream rng(5, 0);
    const Strategy point = Strategy::pure(0, 2);
    for (int i = 0; i < 200; ++i) CHECK(rng.sample(point) == 0);

    const Strategy even = Strategy::uniform(2);
    long long ones = 0;
    for (int i = 0; i < 100000; ++i) ones += rng.sample(even);
    const double freq = static_cast<double>(ones) / 100000.0;
    CHECK(freq >= 0.494);
    CHECK(freq <= 0.506);
}

TEST_CASE("empirical means concentrate within the sub-gaussian radius") {
    const GameMatrix game(Matrix::from_rows({{0.5, -0.5}, {-0.2, 0.3}}));
    Environment env(game, NoiseModel{NoiseKind::bernoulli});
    const long long draws = 1000;
    const double horizon = 100000.0;  // radius sqrt(2 ln(T^2)/n)
    const double radius = std::sqrt(2.0 * 2.0 * std::log(horizon) / static_cast<double>(draws));
    int within = 0, total = 0;
    for (int trial = 0; trial < 50; ++trial) {
        RandomStream rng(900 + trial, trial);
        EmpiricalState emp(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (long long k = 0; k < draws; ++k) emp.record(i, j, env.draw_entry(rng, i, j));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                ++total;
                if (std::fabs(emp.mean(i, j) - game.rescaled()(i, j)) <= radius) ++within;
            }
    }
    CHECK(static_cast<double>(within) / total >= 0.99);
}

TEST_CASE("empirical state bookkeeping") {
    EmpiricalState emp(2, 2);
    CHECK(emp.min_count() == 0);
    CHECK(emp.radius(0, 0, 1.0) == std::numeric_limits<double>::infinity());
    emp.record(0, 0, 1.0);
    emp.record(0, 0, 0.0);
    CHECK(emp.count(0, 0) == 2);
    CHECK(emp.mean(0, 0) == doctest::Approx(0.5));
    CHECK(emp.mean(1, 1, 0.75) == 0.75);  // unsampled default
    CHECK(emp.radius(0, 0, 2.0) == doctest::Approx(std::sqrt(2.0)));
}
