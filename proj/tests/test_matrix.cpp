#include <doctest.h>

#include "zerosum/matrix.hpp"
#include "zerosum/random.hpp"

using namespace zerosum;

TEST_CASE("determinant on known matrices") {
    CHECK(determinant(Matrix::from_rows({{2, 0}, {0, 3}})) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(determinant(Matrix::from_rows({{1, 2}, {3, 4}})) == doctest::Approx(-2.0).epsilon(1e-14));
    // singular
    CHECK(determinant(Matrix::from_rows({{1, 2}, {2, 4}})) == doctest::Approx(0.0));
    // 3x3 with known value 9 (the M_A of rock-paper-scissors)
    CHECK(determinant(Matrix::from_rows({{-1, -1, 2}, {1, -2, 1}, {1, 1, 1}})) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("determinant multiplies under row scaling") {
    RandomStream rng(7, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        Matrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1, 1);
        const double d = determinant(a);
        Matrix b = a;
        for (int j = 0; j < n; ++j) b(0, j) *= 3.0;
        CHECK(determinant(b) == doctest::Approx(3.0 * d).epsilon(1e-9));
    }
}

TEST_CASE("strategy validation") {
    CHECK_THROWS_AS(Strategy({0.5, 0.6}), Error);       // sum too large
    CHECK_THROWS_AS(Strategy({1.2, -0.2}), Error);      // negative weight
    CHECK_NOTHROW(Strategy({0.5, 0.5 + 5e-10}));        // renormalized within tolerance
    const Strategy s({0.25, 0.75});
    CHECK(s.support() == std::vector<int>{0, 1});
    CHECK(Strategy::pure(1, 3).support() == std::vector<int>{1});
}

TEST_CASE("game matrix rescaling is exact") {
    GameMatrix g(Matrix::from_rows({{2.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0}}));
    CHECK(g.rescaled()(0, 0) == (2.0 / 3.0 + 1.0) / 2.0);
    CHECK(g.rescaled()(0, 1) == 0.5);
    CHECK(g.rescaled()(1, 1) == (1.0 / 3.0 + 1.0) / 2.0);
    CHECK_THROWS_AS(GameMatrix(Matrix::from_rows({{1.5, 0}, {0, 1}})), Error);
    CHECK_THROWS_AS(GameMatrix(Matrix(1, 2, 0.0)), Error);
    CHECK_THROWS_AS(GameMatrix(Matrix(9, 9, 0.0)), Error);
}

TEST_CASE("payoff helpers") {
    const Matrix a = Matrix::from_rows({{2.0 / 3.0, 0.0}, {0.0, 1.0 / 3.0}});
    const Strategy x({1.0 / 3.0, 2.0 / 3.0});
    const Strategy y({1.0 / 3.0, 2.0 / 3.0});
    CHECK(column_payoff(a, x, 0) == doctest::Approx(2.0 / 9.0));
    CHECK(row_payoff(a, 0, y) == doctest::Approx(2.0 / 9.0));
    CHECK(bilinear(a, x, y) == doctest::Approx(2.0 / 9.0));
}
