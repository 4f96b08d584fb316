#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qadd/analysis.hpp"
#include "qadd/errors.hpp"
#include "qadd/model.hpp"

namespace qadd {

/// One observation: the total (not per-copy) quantifier value at some copy
/// number. Copy numbers need not sit on the lattice.
struct DataPoint {
    double copies = 1.0;
    double value = 0.0;
};

/// A fitting task: which parameters of a q-additive model are pinned and
/// which are estimated from the data. Exponent slots left unset are searched
/// over [exponent_lo, exponent_hi]; component slots left unset are solved by
/// least squares.
struct FitProblem {
    std::vector<DataPoint> data;
    std::int64_t base_a = 2;
    int order = 2;

    std::vector<std::optional<double>> fixed_exponents;  // size order
    std::vector<std::optional<double>> fixed_components; // size order

    double exponent_lo = 0.0;
    double exponent_hi = 1.5;
    // Minimize per-copy residuals (matches regularized plots); switch off to
    // minimize total-value residuals instead. Reported RMS stays per copy.
    bool per_copy_objective = true;
    // Project fitted components onto e_m >= 0 by an active-set sweep.
    bool nonnegative_components = true;

    FitProblem(std::vector<DataPoint> d, std::int64_t a, int q);

    int free_exponent_count() const;
    int free_component_count() const;
};

struct FitResult {
    std::vector<double> exponents;  // full exponent vector at the optimum
    std::vector<double> components; // full e-vector (fixed slots included)
    double rms_per_copy = 0.0;
    std::vector<double> residuals; // per-copy residual at each data point
    FeasibilityReport feasibility;
    // Present whenever the fitted components form a valid e-vector; absent
    // only in diagnostic runs that allowed negative components.
    std::optional<ScalingModel> model;
};

/// Exponent search ran out of sweeps while still improving. Carries the best
/// parameters seen so the caller can inspect how close it got.
struct fit_convergence_error : numeric_error {
    FitResult best;
    fit_convergence_error(const std::string& msg, FitResult b)
        : numeric_error(msg), best(std::move(b)) {}
};

/// Least-squares e-vector with all exponents fixed. The model value is
/// linear in e, so this is one weighted linear solve; when the point count
/// equals the free-component count it interpolates exactly. Throws
/// conditioning_error when the design matrix is rank-deficient.
FitResult fit_evector(const FitProblem& problem);

/// Outer search over the free exponents (coarse grid, step 0.05, then
/// per-coordinate golden-section refinement; fully deterministic), with
/// fit_evector as the inner solve. Supports order <= 4.
FitResult fit_exponents(const FitProblem& problem);

/// Per-copy RMS disagreement between a model and a dataset:
/// sqrt(mean_i (E^(N_i)/N_i - value_i/N_i)^2).
double hypothesis_residual(const ScalingModel& model, const std::vector<DataPoint>& data);

} // namespace qadd
