#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>

#include "qadd/errors.hpp"

namespace qadd {

// Exact arithmetic backing the recurrence oracle. Every finite double is a
// binary rational, so conversion from double is lossless.
using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer ipow(std::int64_t base, int exp) {
    if (exp < 0) throw validation_error("ipow: negative exponent");
    Integer r = 1, b = base;
    while (exp > 0) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

inline Rational rpow(const Rational& base, int exp) {
    if (exp < 0) {
        if (base == 0) throw validation_error("rpow: 0 to a negative power");
        return 1 / rpow(base, -exp);
    }
    Rational r = 1, b = base;
    while (exp > 0) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

/// A point N = a^n on the copy lattice P_a = {1, a, a^2, ...}.
struct CopyLattice {
    std::int64_t base_a = 2;
    int exponent_n = 0;
    Integer copies; // N = a^n, exact

    CopyLattice(std::int64_t a, int n) : base_a(a), exponent_n(n) {
        if (a < 2) throw validation_error("CopyLattice: base must be >= 2");
        if (n < 0) throw validation_error("CopyLattice: exponent must be >= 0");
        copies = ipow(a, n);
    }

    // Membership test: N is on the lattice iff log_a N is a non-negative integer.
    static std::optional<int> exponent_of(std::int64_t a, const Integer& n_copies) {
        if (a < 2 || n_copies < 1) return std::nullopt;
        Integer v = 1;
        int n = 0;
        while (v < n_copies) {
            v *= a;
            ++n;
        }
        if (v == n_copies) return n;
        return std::nullopt;
    }

    static bool contains(std::int64_t a, const Integer& n_copies) {
        return exponent_of(a, n_copies).has_value();
    }
};

} // namespace qadd
