#include "qadd/closed_form.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace qadd {

namespace {

using cplxl = std::complex<long double>;

constexpr double kImagResidueTol = 1e-9;

// log_a N, snapped to the nearest integer when N sits on the lattice up to
// roundoff. Keeps the confluent n^j factors exact at lattice points.
long double copy_exponent(double n_copies, std::int64_t base_a) {
    const long double n =
        std::log(static_cast<long double>(n_copies)) / std::log(static_cast<long double>(base_a));
    const long double r = std::round(n);
    if (std::abs(n - r) <= 1e-12L * std::max(1.0L, std::abs(r))) return r;
    return n;
}

double check_residue(cplxl value, const char* who) {
    if (std::abs(value.imag()) > kImagResidueTol * (1.0L + std::abs(value.real()))) {
        std::ostringstream msg;
        msg << who << ": imaginary residue " << static_cast<double>(value.imag())
            << " above tolerance; complex-eigenvalue model evaluated off the lattice";
        throw numeric_error(msg.str());
    }
    return static_cast<double>(value.real());
}

void require_copies(double n_copies, const char* who) {
    if (!(n_copies >= 1.0)) throw validation_error(std::string(who) + ": need N >= 1");
}

} // namespace

ClosedFormEvaluator::ClosedFormEvaluator(const ScalingModel& model)
    : base_a_(model.base_a),
      evector_(model.evector.components),
      spectrum_(model.spectrum ? *model.spectrum : eigen_spectrum(model.closure, model.base_a)),
      table_(solve_coefficients(spectrum_)) {}

double ClosedFormEvaluator::eval(double n_copies) const {
    require_copies(n_copies, "closed_form_eval");
    const long double n = copy_exponent(n_copies, base_a_);
    const int q = static_cast<int>(evector_.size());

    cplxl acc = 0.0L;
    for (std::size_t k = 0; k < spectrum_.roots.size(); ++k) {
        const auto& root = spectrum_.roots[k];
        const cplxl lam(root.eigenvalue.real(), root.eigenvalue.imag());
        cplxl lam_n; // lambda^n = N^{nu_k}
        if (std::abs(lam) < 1e-300) {
            lam_n = (n == 0.0L) ? cplxl(1.0L) : cplxl(0.0L);
        } else {
            lam_n = std::exp(n * std::log(lam));
        }
        long double n_pow = 1.0L;
        for (int j = 0; j < root.multiplicity; ++j) {
            cplxl weight = 0.0L;
            for (int m = 0; m < q; ++m) {
                weight += table_.entry[static_cast<std::size_t>(m)][k][static_cast<std::size_t>(j)] *
                          static_cast<long double>(evector_[static_cast<std::size_t>(m)]);
            }
            acc += weight * n_pow * lam_n;
            n_pow *= n;
        }
    }
    return check_residue(acc, "closed_form_eval");
}

std::vector<double> ClosedFormEvaluator::basis(double n_copies) const {
    require_copies(n_copies, "closed_form_basis");
    const long double n = copy_exponent(n_copies, base_a_);
    const int q = static_cast<int>(evector_.size());

    std::vector<cplxl> acc(static_cast<std::size_t>(q), cplxl(0.0L));
    for (std::size_t k = 0; k < spectrum_.roots.size(); ++k) {
        const auto& root = spectrum_.roots[k];
        const cplxl lam(root.eigenvalue.real(), root.eigenvalue.imag());
        cplxl lam_n;
        if (std::abs(lam) < 1e-300) {
            lam_n = (n == 0.0L) ? cplxl(1.0L) : cplxl(0.0L);
        } else {
            lam_n = std::exp(n * std::log(lam));
        }
        long double n_pow = 1.0L;
        for (int j = 0; j < root.multiplicity; ++j) {
            for (int m = 0; m < q; ++m) {
                acc[static_cast<std::size_t>(m)] +=
                    table_.entry[static_cast<std::size_t>(m)][k][static_cast<std::size_t>(j)] *
                    n_pow * lam_n;
            }
            n_pow *= n;
        }
    }
    std::vector<double> row(static_cast<std::size_t>(q));
    for (int m = 0; m < q; ++m)
        row[static_cast<std::size_t>(m)] = check_residue(acc[static_cast<std::size_t>(m)],
                                                          "closed_form_basis");
    return row;
}

double closed_form_eval(const ScalingModel& model, double n_copies) {
    return ClosedFormEvaluator(model).eval(n_copies);
}

double closed_form_2additive(double e, double f, double x, double y, double n_copies,
                             std::int64_t base_a) {
    require_copies(n_copies, "closed_form_2additive");
    const cplxl z = cplxl(static_cast<long double>(y) * y + 4.0L * x);
    const cplxl root_z = std::sqrt(z);
    const cplxl lam1 = (static_cast<long double>(y) + root_z) / 2.0L;
    const cplxl lam2 = (static_cast<long double>(y) - root_z) / 2.0L;
    if (std::abs(lam1 - lam2) <= 1e-7L * std::max(1.0L, std::abs(lam1)))
        throw numeric_error(
            "closed_form_2additive: coincident eigenvalues; use degenerate_2additive");

    const long double ln_a = std::log(static_cast<long double>(base_a));
    const cplxl nu1 = std::log(lam1) / ln_a;
    const cplxl nu2 = std::log(lam2) / ln_a;
    const long double ln_n = std::log(static_cast<long double>(n_copies));
    const cplxl n_nu1 = std::exp(nu1 * ln_n);
    const cplxl n_nu2 = std::exp(nu2 * ln_n);
    const cplxl a_nu1 = lam1;
    const cplxl a_nu2 = lam2;

    const cplxl coef_e = (n_nu2 * a_nu1 - n_nu1 * a_nu2) / (a_nu1 - a_nu2);
    const cplxl coef_f = (n_nu1 - n_nu2) / (a_nu1 - a_nu2);
    return check_residue(coef_e * static_cast<long double>(e) + coef_f * static_cast<long double>(f),
                         "closed_form_2additive");
}

double closed_form_3additive(double e1, double e2, double e3, double nu1, double nu2, double nu3,
                             double n_copies, std::int64_t base_a) {
    require_copies(n_copies, "closed_form_3additive");
    const long double a = static_cast<long double>(base_a);
    const long double A1 = std::pow(a, static_cast<long double>(nu1));
    const long double A2 = std::pow(a, static_cast<long double>(nu2));
    const long double A3 = std::pow(a, static_cast<long double>(nu3));
    const long double sep = 1e-7L * std::max({1.0L, std::abs(A1), std::abs(A2), std::abs(A3)});
    if (std::abs(A1 - A2) <= sep || std::abs(A1 - A3) <= sep || std::abs(A2 - A3) <= sep)
        throw numeric_error(
            "closed_form_3additive: near-coincident exponents; use degenerate_3additive or the "
            "confluent path");

    const long double ln_n = std::log(static_cast<long double>(n_copies));
    const long double p1 = std::exp(static_cast<long double>(nu1) * ln_n);
    const long double p2 = std::exp(static_cast<long double>(nu2) * ln_n);
    const long double p3 = std::exp(static_cast<long double>(nu3) * ln_n);

    const long double t1 =
        (A2 * A3 * e1 - (A2 + A3) * e2 + e3) / ((A1 - A2) * (A1 - A3)) * p1;
    const long double t2 =
        (A1 * A3 * e1 - (A1 + A3) * e2 + e3) / ((A2 - A1) * (A2 - A3)) * p2;
    const long double t3 =
        (A1 * A2 * e1 - (A1 + A2) * e2 + e3) / ((A3 - A1) * (A3 - A2)) * p3;
    return static_cast<double>(t1 + t2 + t3);
}

double degenerate_2additive(double e, double f, double nu, double n_copies, std::int64_t base_a) {
    require_copies(n_copies, "degenerate_2additive");
    const long double ln_a = std::log(static_cast<long double>(base_a));
    const long double n = copy_exponent(n_copies, base_a);
    // (N/a^j)^nu as exp(nu (n-j) ln a): exactly 1 at the boundary points.
    const long double pow0 = std::exp(static_cast<long double>(nu) * n * ln_a);
    const long double pow1 = std::exp(static_cast<long double>(nu) * (n - 1.0L) * ln_a);
    return static_cast<double>(-pow0 * (n - 1.0L) * e + pow1 * n * f);
}

double degenerate_3additive(double e1, double e2, double e3, double nu, double n_copies,
                            std::int64_t base_a) {
    require_copies(n_copies, "degenerate_3additive");
    const long double ln_a = std::log(static_cast<long double>(base_a));
    const long double n = copy_exponent(n_copies, base_a);
    const long double vnu = static_cast<long double>(nu);
    const long double pow0 = std::exp(vnu * n * ln_a);
    const long double pow1 = std::exp(vnu * (n - 1.0L) * ln_a);
    const long double pow2 = std::exp(vnu * (n - 2.0L) * ln_a);
    const long double b1 = 1.0L - 1.5L * n + 0.5L * n * n;
    const long double b2 = 2.0L * n - n * n;
    const long double b3 = 0.5L * (n * n - n);
    return static_cast<double>(pow0 * b1 * e1 + pow1 * b2 * e2 + pow2 * b3 * e3);
}

} // namespace qadd
