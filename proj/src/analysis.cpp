#include "qadd/analysis.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qadd/closed_form.hpp"
#include "qadd/coefficients.hpp"
#include "qadd/errors.hpp"
#include "qadd/spectrum.hpp"

namespace qadd {

namespace {

// Exponents whose real parts differ by less than this are treated as tied,
// and an exponent this close to 1 counts as the unit exponent.
constexpr double kExponentTieTol = 1e-9;

Constraint make_constraint(std::string name, double margin, bool strict = false) {
    Constraint c;
    c.name = std::move(name);
    c.margin = margin;
    c.satisfied = strict ? (margin > 0.0) : (margin >= 0.0);
    return c;
}

} // namespace

OsdModelSpec::OsdModelSpec(std::int64_t a, double e2_at_a, double e3_at_a2)
    : superactivation_copies(a), e2(e2_at_a), e3(e3_at_a2) {
    if (a < 2) throw validation_error("OsdModelSpec: superactivation copy number must be >= 2");
    if (!(e2 > 0.0)) throw validation_error("OsdModelSpec: e2 must be positive");
    if (!(e3 > 0.0)) throw validation_error("OsdModelSpec: e3 must be positive");
}

FeasibilityReport check_2additive_feasibility(double e, double f, double x, double y) {
    FeasibilityReport report;
    report.constraints.push_back(make_constraint("negative cross term (x < 0)", -x,
                                                 /*strict=*/true));
    report.constraints.push_back(
        make_constraint("real spectrum (y^2 >= 4|x|)", y * y - 4.0 * std::abs(x)));
    report.constraints.push_back(
        make_constraint("monotonicity (f (y - 1) >= |x| e)", f * (y - 1.0) - std::abs(x) * e));
    return report;
}

FeasibilityReport check_osd_consistency(std::int64_t superactivation_copies, double e2,
                                        double e3) {
    if (superactivation_copies < 2)
        throw validation_error("check_osd_consistency: copy number must be >= 2");
    const double bound = (std::sqrt(static_cast<double>(superactivation_copies)) + 1.0) * e2;
    FeasibilityReport report;
    report.constraints.push_back(
        make_constraint("value growth (e3 >= (sqrt(a) + 1) e2)", e3 - bound));
    return report;
}

AsymptoteReport asymptote(const ScalingModel& model) {
    const Spectrum spectrum =
        model.spectrum ? *model.spectrum : eigen_spectrum(model.closure, model.base_a);

    // Roots at zero contribute nothing beyond the boundary segment; with no
    // other root E^(N) is eventually zero and the per-copy rate vanishes.
    int dominant = -1;
    for (std::size_t k = 0; k < spectrum.roots.size(); ++k) {
        if (std::abs(spectrum.roots[k].eigenvalue) < 1e-300) continue;
        if (dominant < 0 ||
            spectrum.roots[k].exponent.real() >
                spectrum.roots[static_cast<std::size_t>(dominant)].exponent.real())
            dominant = static_cast<int>(k);
    }

    AsymptoteReport report;
    if (dominant < 0) {
        report.kind = AsymptoteKind::vanishes;
        report.nu_max = -std::numeric_limits<double>::infinity();
        report.multiplicity = spectrum.order();
        return report;
    }

    const SpectrumRoot& top = spectrum.roots[static_cast<std::size_t>(dominant)];
    report.nu_max = top.exponent.real();
    report.multiplicity = top.multiplicity;

    // A tie in Re(nu) between distinct clusters means a complex pair or a
    // sign pair (a^nu, -a^nu); either way the dominant term oscillates.
    for (std::size_t k = 0; k < spectrum.roots.size(); ++k) {
        if (static_cast<int>(k) == dominant) continue;
        if (std::abs(spectrum.roots[k].eigenvalue) < 1e-300) continue;
        if (std::abs(spectrum.roots[k].exponent.real() - report.nu_max) < kExponentTieTol)
            throw numeric_error(
                "asymptote: several eigenvalues share the dominant magnitude, the per-copy "
                "limit oscillates");
    }
    if (std::abs(top.exponent.imag()) > kExponentTieTol) {
        std::ostringstream msg;
        msg << "asymptote: dominant eigenvalue " << top.eigenvalue.real();
        if (top.eigenvalue.imag() != 0.0) msg << " + " << top.eigenvalue.imag() << "i";
        msg << " is not positive real, the per-copy limit oscillates";
        throw numeric_error(msg.str());
    }

    if (report.nu_max < 1.0 - kExponentTieTol) {
        report.kind = AsymptoteKind::vanishes;
    } else if (report.nu_max > 1.0 + kExponentTieTol) {
        report.kind = AsymptoteKind::power_divergent;
    } else if (report.multiplicity > 1) {
        report.kind = AsymptoteKind::log_divergent;
    } else {
        report.kind = AsymptoteKind::finite;
        // E^(N)/N -> sum_m C^m_{k*,0} e_m: every subdominant term decays and
        // the unit-exponent coefficient survives division by N = a^n.
        const CoefficientTable table = solve_coefficients(spectrum);
        long double value = 0.0L;
        for (int m = 0; m < model.order(); ++m)
            value += table.entry[static_cast<std::size_t>(m)][static_cast<std::size_t>(dominant)]
                                [0]
                         .real() *
                     static_cast<long double>(model.evector[m]);
        report.value = static_cast<double>(value);
    }
    return report;
}

ScalingModel build_osd_model(const OsdModelSpec& spec) {
    const std::vector<double> exponents = {1.0, 0.5, 0.0};
    const std::int64_t a = spec.superactivation_copies;

    ScalingModel model(a, closure_from_exponents(exponents, a),
                       EVector({0.0, spec.e2, spec.e3}));
    // Keep the exact exponents; recovering them from the rounded closure
    // parameters would cost a few ulps for no reason.
    model.spectrum = spectrum_from_exponents(exponents, a);

    const FeasibilityReport consistency = check_osd_consistency(a, spec.e2, spec.e3);
    if (!consistency.all_satisfied()) {
        std::ostringstream msg;
        msg << "consistency check failed: e3 = " << spec.e3 << " is below (sqrt(" << a
            << ") + 1) * e2 = "
            << (std::sqrt(static_cast<double>(a)) + 1.0) * spec.e2
            << "; the 3-additive hypothesis with exponents (1, 1/2, 0) cannot fit these values";
        model.warnings.push_back(msg.str());
    }
    return model;
}

std::vector<std::pair<double, double>> regularized_curve(const ScalingModel& model,
                                                         const std::vector<double>& copies) {
    const ClosedFormEvaluator evaluator(model);
    std::vector<std::pair<double, double>> curve;
    curve.reserve(copies.size());
    for (double n_copies : copies)
        curve.emplace_back(n_copies, evaluator.eval_per_copy(n_copies));
    return curve;
}

} // namespace qadd
