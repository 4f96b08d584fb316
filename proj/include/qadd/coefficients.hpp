#pragma once

#include <complex>
#include <vector>

#include "qadd/model.hpp"

namespace qadd {

/// Coefficients C^m_{k,j} of the closed form
///   eta^m(N) = sum_k sum_j C^m_{k,j} n^j lambda_k^n,   n = log_a N,
/// solved from the boundary conditions eta^m(a^l) = delta^{m-1}_l, l = 0..q-1.
/// Distinct roots give the transposed Vandermonde systems (all j = 0); a root
/// of multiplicity m_k contributes the confluent basis n^j lambda^n,
/// j = 0..m_k-1.
struct CoefficientTable {
    // entry[m][k][j]: m = 0..q-1 over e-components, k over spectrum clusters,
    // j = 0..multiplicity_k-1 over powers of n. Kept in extended precision:
    // the weights can cancel almost completely against lambda^n growth, and
    // rounding them to double costs exactly the digits that cancellation
    // needs back.
    std::vector<std::vector<std::vector<std::complex<long double>>>> entry;
    double boundary_residual = 0.0; // max |V C - I| over all entries
    double condition_estimate = 1.0;

    int order() const { return static_cast<int>(entry.size()); }
};

struct CoefficientOptions {
    double condition_limit = 1e12;   // beyond this the solve is refused
    double boundary_tol = 1e-10;     // verification bound on |V C - I|
};

/// Solve the q boundary-condition systems for the spectrum's roots.
/// Throws conditioning_error when the (confluent) Vandermonde matrix is too
/// ill-conditioned, numeric_error when the verification residual fails.
CoefficientTable solve_coefficients(const Spectrum& spectrum,
                                    const CoefficientOptions& opts = {});

} // namespace qadd
