#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qadd/model.hpp"

namespace qadd {

/// One named constraint with its signed slack. margin > 0 means satisfied
/// with room to spare, margin < 0 quantifies the violation.
struct Constraint {
    std::string name;
    bool satisfied = false;
    double margin = 0.0;
};

struct FeasibilityReport {
    std::vector<Constraint> constraints;

    bool all_satisfied() const {
        for (const auto& c : constraints)
            if (!c.satisfied) return false;
        return true;
    }
};

enum class AsymptoteKind {
    vanishes,        // dominant exponent below 1, E/N -> 0
    finite,          // simple unit exponent, E/N -> value
    power_divergent, // dominant exponent above 1
    log_divergent,   // repeated unit exponent, E/N ~ (log_a N)^order
};

struct AsymptoteReport {
    AsymptoteKind kind = AsymptoteKind::vanishes;
    std::optional<double> value; // set for kind == finite only
    double nu_max = 0.0;         // dominant exponent (real part)
    int multiplicity = 1;        // multiplicity of the dominant exponent

    // Power of log_a N in the leading per-copy term when log-divergent.
    int log_order() const { return multiplicity - 1; }
};

/// Inputs of the one-shot-distillable entanglement model for isotropic
/// states: the superactivation copy number a (E is zero below a copies, so
/// e1 = 0), the value e2 at a copies and e3 at a^2 copies, with the exponent
/// triple fixed at (1, 1/2, 0).
struct OsdModelSpec {
    std::int64_t superactivation_copies = 2;
    double e2 = 1.0;
    double e3 = 1.0;

    OsdModelSpec(std::int64_t a, double e2_at_a, double e3_at_a2);
};

/// Constraints a 2-additive quantifier with E(1) = e, E(a) = f and closure
/// (x, y) must satisfy: a negative cross term x, a non-negative discriminant
/// y^2 >= 4|x| (real spectrum), and monotonicity under tensoring expressed
/// multiplicatively as f (y - 1) >= |x| e so that e = 0 (superactivation)
/// and y = 1 stay in the domain. Reports, never throws.
FeasibilityReport check_2additive_feasibility(double e, double f, double x, double y);

/// Internal consistency of OSD model inputs: e3 >= (sqrt(a) + 1) e2.
/// The margin is e3 - (sqrt(a) + 1) e2.
FeasibilityReport check_osd_consistency(std::int64_t superactivation_copies, double e2,
                                        double e3);

/// Classify the growth of E^(N)/N as N -> infinity by the dominant exponent.
/// Requires the dominant eigenvalue to be positive real (its exponent real);
/// complex or nonpositive dominant eigenvalues throw numeric_error because
/// the per-copy limit oscillates.
AsymptoteReport asymptote(const ScalingModel& model);

/// Assemble the 3-additive OSD model from its inputs: e-vector (0, e2, e3),
/// exponents (1, 1/2, 0), base a. A failed consistency check attaches a
/// warning to the model instead of throwing; the check exists to falsify the
/// hypothesis, not to gate construction.
ScalingModel build_osd_model(const OsdModelSpec& spec);

/// Per-copy curve (N, E^(N)/N) over the given copy numbers.
std::vector<std::pair<double, double>> regularized_curve(const ScalingModel& model,
                                                         const std::vector<double>& copies);

} // namespace qadd
