#include "qadd/fibonacci.hpp"

#include <cmath>

namespace qadd {

namespace {

Integer binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Integer r = 1;
    for (int i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1; // divides exactly: r is always a binomial prefix
    }
    return r;
}

} // namespace

HybridFibonacci HybridFibonacci::make(int n) {
    if (n < 0) throw validation_error("HybridFibonacci: degree must be >= 0");
    HybridFibonacci p;
    p.degree = n;
    if (n == 0) return p; // F_0 = 0, the empty sum
    for (int k = 0; k <= (n - 1) / 2; ++k) p.coeffs.push_back(binomial(n - 1 - k, k));
    return p;
}

Rational HybridFibonacci::eval(const Rational& x, const Rational& y) const {
    Rational acc = 0;
    for (int k = 0; k < static_cast<int>(coeffs.size()); ++k)
        acc += Rational(coeffs[static_cast<std::size_t>(k)]) * rpow(x, k) *
               rpow(y, degree - 1 - 2 * k);
    return acc;
}

Rational fibonacci_hybrid(int n, const Rational& x, const Rational& y) {
    return HybridFibonacci::make(n).eval(x, y);
}

Rational fibonacci_2additive_eval(const Rational& e, const Rational& f, const Rational& x,
                                  const Rational& y, int n) {
    if (n < 1) throw validation_error("fibonacci_2additive_eval: n must be >= 1");
    return x * fibonacci_hybrid(n - 1, x, y) * e + fibonacci_hybrid(n, x, y) * f;
}

double binet_check(int n, double x, double y) {
    const long double z = 4.0L * x + static_cast<long double>(y) * y;
    if (!(z > 0.0L)) throw validation_error("binet_check: requires 4x + y^2 > 0");
    const long double root_z = std::sqrt(z);
    const long double lam1 = (y + root_z) / 2.0L;
    const long double lam2 = (y - root_z) / 2.0L;
    const long double binet = (std::pow(lam1, n) - std::pow(lam2, n)) / root_z;
    const long double exact =
        fibonacci_hybrid(n, Rational(x), Rational(y)).convert_to<long double>();
    return static_cast<double>(std::abs(exact - binet));
}

} // namespace qadd
