#pragma once

#include "qadd/coefficients.hpp"
#include "qadd/model.hpp"
#include "qadd/spectrum.hpp"

namespace qadd {

/// Prepared closed form E^(N) = sum_m sum_{k,j} C^m_{k,j} n^j N^{nu_k} e_m.
/// Builds the spectrum and coefficient table once; evaluation is then cheap,
/// so curves over many N reuse one evaluator.
class ClosedFormEvaluator {
public:
    explicit ClosedFormEvaluator(const ScalingModel& model);

    /// Evaluate at real N >= 1 (off-lattice N permitted). Complex arithmetic
    /// internally; throws numeric_error when the imaginary residue exceeds
    /// 1e-9 * (1 + |Re|).
    double eval(double n_copies) const;

    /// Per-copy value E^(N)/N.
    double eval_per_copy(double n_copies) const { return eval(n_copies) / n_copies; }

    /// Basis values eta^m(N) for m = 1..q: E^(N) as a linear function of the
    /// e-vector, so eval(N) is the dot product of this row with e. Used as a
    /// design-matrix row when fitting e-components.
    std::vector<double> basis(double n_copies) const;

    const Spectrum& spectrum() const { return spectrum_; }
    const CoefficientTable& coefficients() const { return table_; }

private:
    std::int64_t base_a_;
    std::vector<double> evector_;
    Spectrum spectrum_;
    CoefficientTable table_;
};

/// One-shot evaluation of the general closed form.
double closed_form_eval(const ScalingModel& model, double n_copies);

/// Explicit 2-additive closed form in the exponents nu_1, nu_2 derived from
/// (x, y); independent of the companion/Vandermonde path. Complex eigenvalues
/// are routed through complex arithmetic and must leave no material residue.
double closed_form_2additive(double e, double f, double x, double y, double n_copies,
                             std::int64_t base_a);

/// Explicit three-term 3-additive closed form for pairwise distinct
/// exponents. Near-coincident exponents are refused; use
/// degenerate_3additive or the generic confluent path instead.
double closed_form_3additive(double e1, double e2, double e3, double nu1, double nu2, double nu3,
                             double n_copies, std::int64_t base_a);

/// Confluent limit of the 2-additive form for nu_1 = nu_2 = nu:
///   -N^nu (log_a N - 1) e + (N/a)^nu log_a N f.
double degenerate_2additive(double e, double f, double nu, double n_copies, std::int64_t base_a);

/// Confluent limit for a triple exponent nu, with coefficients solved from
/// the boundary conditions E(1)=e1, E(a)=e2, E(a^2)=e3:
///   N^nu [1 - 3n/2 + n^2/2] e1 + (N/a)^nu [2n - n^2] e2
///   + (N/a^2)^nu [(n^2 - n)/2] e3,   n = log_a N.
double degenerate_3additive(double e1, double e2, double e3, double nu, double n_copies,
                            std::int64_t base_a);

} // namespace qadd
