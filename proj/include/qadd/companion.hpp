#pragma once

#include <Eigen/Dense>

#include <vector>

#include "qadd/model.hpp"

namespace qadd {

/// The q x q companion matrix Q: sub-diagonal identity block, last column =
/// closure params, zeros elsewhere. For q=1 this is the 1x1 matrix [x].
Eigen::MatrixXd build_companion(const ClosureSpec& closure);

/// Coefficient vector eta_n = Q^n u1 with u1 = (1,0,...,0)^T, computed in
/// exact rational arithmetic. eta_l is the l-th unit vector for l < q
/// (boundary conditions), and E^(a^n) = eta_n . e.
std::vector<Rational> recurrence_oracle(const ScalingModel& model, int n);

/// Exact lattice evaluation: eta_n . e as a rational (e-vector components are
/// binary rationals, so nothing is lost).
Rational oracle_eval_exact(const ScalingModel& model, int n);

/// Same value rounded once to double.
double oracle_eval(const ScalingModel& model, int n);

/// Result of checking the composition identity
///   eta^j(N) = sum_l eta^j(a^{l-1} K) eta^l(N/K),  N = a^n, K = a^k,
/// with exact oracle values. The residual is exact, hence zero whenever the
/// model really is q-additive.
struct ConsistencyResult {
    bool holds = false;
    Rational max_residual; // max |lhs - rhs| over all components j
};

ConsistencyResult scalability_consistency_check(const ScalingModel& model, int n, int k);

} // namespace qadd
