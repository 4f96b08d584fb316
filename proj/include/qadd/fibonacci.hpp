#pragma once

#include <vector>

#include "qadd/rational.hpp"

namespace qadd {

/// Hybrid Fibonacci polynomial of two variables: F_0 = 0, F_1 = 1,
/// F_n = y F_{n-1} + x F_{n-2}. Explicitly,
///   F_n(x, y) = sum_{k=0}^{floor((n-1)/2)} C(n-1-k, k) x^k y^{n-1-2k},
/// and F_n(1, 1) is the n-th Fibonacci number. Exact integer coefficients.
struct HybridFibonacci {
    int degree = 0;
    std::vector<Integer> coeffs; // coeffs[k] multiplies x^k y^{degree-1-2k}

    static HybridFibonacci make(int n);

    Rational eval(const Rational& x, const Rational& y) const;
};

/// F_n(x, y) evaluated exactly.
Rational fibonacci_hybrid(int n, const Rational& x, const Rational& y);

/// The 2-additive lattice value x F_{n-1} e + F_n f; equals the q=2
/// recurrence oracle exactly.
Rational fibonacci_2additive_eval(const Rational& e, const Rational& f, const Rational& x,
                                  const Rational& y, int n);

/// |F_n(x,y) - (lambda_1^n - lambda_2^n)/sqrt(Z)| with lambda = (y +- sqrt(Z))/2,
/// Z = 4x + y^2. Requires Z > 0; the float-path cross-check of the exact sum.
double binet_check(int n, double x, double y);

} // namespace qadd
