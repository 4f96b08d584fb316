#pragma once

#include <cstdint>
#include <vector>

#include "qadd/model.hpp"

namespace qadd {

struct SpectrumOptions {
    // Roots closer than this (relative to scale) are merged into one cluster.
    // Vandermonde conditioning degrades well before exact coincidence.
    double clustering_radius = 1e-7;
    // Acceptance bound for |charpoly(lambda_k)|, scaled by (1+|lambda|^q)(1+|params|_1).
    double residual_tol = 1e-6;
};

/// All q roots of the characteristic polynomial
///   lambda^q - params[q-1] lambda^{q-1} - ... - params[0],
/// clustered by multiplicity, with exponents nu_k = log_a lambda_k attached.
/// Throws numeric_error when the eigensolver fails or a root's polynomial
/// residual exceeds the bound.
Spectrum eigen_spectrum(const ClosureSpec& closure, std::int64_t base_a,
                        const SpectrumOptions& opts = {});

/// Spectrum assembled directly from known real exponents (lambda_k = a^{nu_k}),
/// clustering coincident ones. Keeps the exponents exact instead of
/// round-tripping them through the closure.
Spectrum spectrum_from_exponents(const std::vector<double>& exponents, std::int64_t base_a,
                                 const SpectrumOptions& opts = {});

/// Closure parameters whose companion matrix has eigenvalues a^{nu_k}:
/// signed elementary symmetric polynomials of the lambda_k, computed by
/// expanding prod_k (lambda - a^{nu_k}).
ClosureSpec closure_from_exponents(const std::vector<double>& exponents, std::int64_t base_a);

} // namespace qadd
