#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qadd/errors.hpp"
#include "qadd/rational.hpp"

namespace qadd {

/// Closure parameters (x, y, z, ...): the values the recursion assigns at a^q
/// copies, i.e. the last column of the companion matrix. Stored exactly;
/// doubles convert without loss.
struct ClosureSpec {
    std::vector<Rational> params;

    ClosureSpec() = default;
    explicit ClosureSpec(std::vector<Rational> p) : params(std::move(p)) {
        if (params.empty()) throw validation_error("ClosureSpec: order must be >= 1");
    }
    explicit ClosureSpec(const std::vector<double>& p)
        : ClosureSpec(std::vector<Rational>(p.begin(), p.end())) {}

    int order() const { return static_cast<int>(params.size()); }

    std::vector<double> params_real() const {
        std::vector<double> out(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) out[i] = static_cast<double>(params[i]);
        return out;
    }
};

/// Quantifier values at 1, a, ..., a^{q-1} copies. Component j is the value
/// at a^{j-1} copies; all components are non-negative.
struct EVector {
    std::vector<double> components;

    EVector() = default;
    explicit EVector(std::vector<double> c, bool require_monotone = false)
        : components(std::move(c)) {
        if (components.empty()) throw validation_error("EVector: must have at least one component");
        for (double v : components)
            if (!(v >= 0.0)) throw validation_error("EVector: components must be non-negative");
        if (require_monotone)
            for (std::size_t i = 1; i < components.size(); ++i)
                if (components[i] < components[i - 1])
                    throw validation_error("EVector: components must be non-decreasing");
    }

    int size() const { return static_cast<int>(components.size()); }
    double operator[](int i) const { return components[static_cast<std::size_t>(i)]; }
};

/// One eigenvalue cluster of the companion matrix.
struct SpectrumRoot {
    std::complex<double> eigenvalue;  // lambda_k, cluster representative
    int multiplicity = 1;             // m_k
    std::complex<double> exponent;    // nu_k = log_a lambda_k
};

/// Companion-matrix spectrum: eigenvalue clusters with multiplicities summing
/// to q, plus the exponents nu_k = log_a lambda_k. Negative or complex roots
/// are kept and flagged, not rejected.
struct Spectrum {
    std::int64_t base_a = 2;
    std::vector<SpectrumRoot> roots;
    double max_charpoly_residual = 0.0;
    bool has_complex = false;     // some root has a material imaginary part
    bool has_nonpositive = false; // some root has Re <= 0 or is not positive real

    int order() const {
        int q = 0;
        for (const auto& r : roots) q += r.multiplicity;
        return q;
    }
};

/// Full description of a q-additive quantifier: lattice base, closure
/// parameters, and the e-vector. The spectrum is optional; builders that know
/// the exponents exactly fill it in so downstream code does not have to
/// re-derive them from the (rounded) closure.
struct ScalingModel {
    std::int64_t base_a = 2;
    ClosureSpec closure;
    EVector evector;
    std::optional<Spectrum> spectrum;
    std::vector<std::string> warnings;

    ScalingModel() = default;
    ScalingModel(std::int64_t a, ClosureSpec c, EVector e)
        : base_a(a), closure(std::move(c)), evector(std::move(e)) {
        if (base_a < 2) throw validation_error("ScalingModel: base must be >= 2");
        if (closure.order() != evector.size())
            throw validation_error("ScalingModel: closure order must match e-vector length");
    }

    int order() const { return closure.order(); }
};

} // namespace qadd
