#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qadd/companion.hpp"
#include "qadd/fibonacci.hpp"
#include "qadd/rational.hpp"

using namespace qadd;

TEST_CASE("Fibonacci numbers at x = y = 1") {
    const int expected[7] = {0, 1, 1, 2, 3, 5, 8};
    for (int n = 0; n <= 6; ++n)
        CHECK(fibonacci_hybrid(n, 1, 1) == Rational(expected[n]));

    // Pair recurrence as an independent exact reference through n = 40.
    Integer prev = 0, cur = 1;
    for (int n = 1; n <= 40; ++n) {
        CHECK(fibonacci_hybrid(n, 1, 1) == Rational(cur));
        const Integer next = cur + prev;
        prev = cur;
        cur = next;
    }
    CHECK(fibonacci_hybrid(40, 1, 1) == Rational(102334155));
}

TEST_CASE("low-degree polynomials in exact rationals") {
    const Rational x(3, 7), y(-2, 5);
    CHECK(fibonacci_hybrid(0, x, y) == Rational(0));
    CHECK(fibonacci_hybrid(1, x, y) == Rational(1));
    CHECK(fibonacci_hybrid(2, x, y) == y);
    CHECK(fibonacci_hybrid(3, x, y) == x + y * y);
    CHECK(fibonacci_hybrid(4, x, y) == 2 * x * y + y * y * y);
}

TEST_CASE("recurrence identity holds exactly through n = 40") {
    const Rational points[3][2] = {
        {Rational(3, 7), Rational(-2, 5)},
        {Rational(-5, 4), Rational(9, 11)},
        {Rational(1), Rational(0)},
    };
    for (const auto& p : points) {
        const Rational& x = p[0];
        const Rational& y = p[1];
        Rational f_prev = fibonacci_hybrid(0, x, y);
        Rational f_cur = fibonacci_hybrid(1, x, y);
        for (int n = 2; n <= 40; ++n) {
            const Rational f_next = fibonacci_hybrid(n, x, y);
            CHECK(f_next == y * f_cur + x * f_prev);
            f_prev = f_cur;
            f_cur = f_next;
        }
    }
}

TEST_CASE("weighted homogeneity: F_n(t^2 x, t y) = t^{n-1} F_n(x, y)") {
    const Rational x(3, 7), y(-2, 5), t(5, 2);
    for (int n = 1; n <= 14; ++n)
        CHECK(fibonacci_hybrid(n, t * t * x, t * y) == rpow(t, n - 1) * fibonacci_hybrid(n, x, y));
}

TEST_CASE("order-2 lattice values via Fibonacci polynomials") {
    const Rational e(3, 4), f(5, 4), x(2), y(3);
    CHECK(fibonacci_2additive_eval(e, f, x, y, 1) == f);
    CHECK(fibonacci_2additive_eval(e, f, x, y, 2) == x * e + y * f);
    CHECK(fibonacci_2additive_eval(e, f, x, y, 4) ==
          x * (x + y * y) * e + y * (2 * x + y * y) * f);
    CHECK_THROWS_AS(fibonacci_2additive_eval(e, f, x, y, 0), validation_error);
}

TEST_CASE("Fibonacci route equals the order-2 recurrence oracle exactly") {
    const Rational rationals[2][2] = {
        {Rational(3, 7), Rational(-2, 5)},
        {Rational(2), Rational(3)},
    };
    for (const auto& p : rationals) {
        const Rational& x = p[0];
        const Rational& y = p[1];
        const ScalingModel model(2, ClosureSpec(std::vector<Rational>{x, y}),
                                 EVector({0.75, 1.25}));
        const Rational e(0.75), f(1.25);
        for (int n = 1; n <= 30; ++n)
            CHECK(oracle_eval_exact(model, n) == fibonacci_2additive_eval(e, f, x, y, n));
    }
}

TEST_CASE("Binet cross-check") {
    CHECK(fibonacci_hybrid(10, 1, 1) == Rational(55));
    CHECK(binet_check(10, 1.0, 1.0) <= 1e-10 * (1.0 + 55.0));

    // x = -2, y = 3: eigenvalues 2 and 1, F_5 = 2^5 - 1 = 31.
    CHECK(fibonacci_hybrid(5, -2, 3) == Rational(31));
    CHECK(binet_check(5, -2.0, 3.0) <= 1e-10 * (1.0 + 31.0));

    CHECK(binet_check(0, 1.0, 1.0) == 0.0);
    for (int n = 1; n <= 30; ++n)
        CHECK(binet_check(n, 0.5, 1.25) <= 1e-10 *
              (1.0 + std::abs(fibonacci_hybrid(n, Rational(0.5), Rational(1.25))
                                  .convert_to<double>())));

    CHECK_THROWS_AS(binet_check(3, -1.0, 1.0), validation_error);
    CHECK_THROWS_AS(binet_check(3, -2.25, 3.0), validation_error);
}
