#include "qadd/spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "qadd/companion.hpp"

namespace qadd {

namespace {

using cplx = std::complex<double>;
using cplxl = std::complex<long double>;

// charpoly(lambda) = lambda^q - sum_m params[m] lambda^m  (m = 0..q-1)
cplx charpoly(const std::vector<double>& params, cplx lambda) {
    const int q = static_cast<int>(params.size());
    cplx acc = 1.0;
    for (int m = q; m-- > 0;) acc = acc * lambda - params[static_cast<std::size_t>(m)];
    return acc;
}

// charpoly and its derivative in extended precision, shared Horner pass.
std::pair<cplxl, cplxl> charpoly_ld(const std::vector<double>& params, cplxl z) {
    const int q = static_cast<int>(params.size());
    cplxl p = 1.0L;
    cplxl dp = 0.0L;
    for (int m = q; m-- > 0;) {
        dp = dp * z + p;
        p = p * z - static_cast<long double>(params[static_cast<std::size_t>(m)]);
    }
    return {p, dp};
}

// The eigensolve is backward stable in the companion matrix norm, which for
// closures with large parameters leaves roots several digits short of what
// lambda^n extrapolation needs. A few Newton steps against the exact
// characteristic polynomial finish the job. Steps are accepted only when
// they shrink |p|, so multiple roots (linear convergence) and vanishing
// derivatives degrade to the unpolished value instead of diverging.
cplx polish_root(const std::vector<double>& params, cplx raw) {
    cplxl z(raw.real(), raw.imag());
    auto [p, dp] = charpoly_ld(params, z);
    for (int iter = 0; iter < 4; ++iter) {
        if (std::abs(dp) == 0.0L) break;
        const cplxl trial = z - p / dp;
        const auto [tp, tdp] = charpoly_ld(params, trial);
        if (!(std::abs(tp) < std::abs(p))) break;
        z = trial;
        p = tp;
        dp = tdp;
    }
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// Union-find clustering of roots under a relative radius, cluster value = mean.
std::vector<SpectrumRoot> cluster_roots(const std::vector<cplx>& raw, double radius) {
    const std::size_t q = raw.size();
    std::vector<std::size_t> parent(q);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i + 1; j < q; ++j) {
            const double scale = std::max({1.0, std::abs(raw[i]), std::abs(raw[j])});
            if (std::abs(raw[i] - raw[j]) <= radius * scale) parent[find(i)] = find(j);
        }

    std::vector<SpectrumRoot> out;
    std::vector<bool> done(q, false);
    for (std::size_t i = 0; i < q; ++i) {
        const std::size_t r = find(i);
        if (done[r]) continue;
        done[r] = true;
        cplx sum = 0.0;
        int count = 0;
        for (std::size_t j = 0; j < q; ++j)
            if (find(j) == r) {
                sum += raw[j];
                ++count;
            }
        out.push_back({sum / static_cast<double>(count), count, 0.0});
    }
    // Dominant first; deterministic order for everything downstream.
    std::sort(out.begin(), out.end(), [](const SpectrumRoot& a, const SpectrumRoot& b) {
        if (a.eigenvalue.real() != b.eigenvalue.real())
            return a.eigenvalue.real() > b.eigenvalue.real();
        return a.eigenvalue.imag() < b.eigenvalue.imag();
    });
    return out;
}

void attach_flags(Spectrum& s) {
    for (auto& r : s.roots) {
        const double im_scale = 1e-9 * (1.0 + std::abs(r.eigenvalue));
        if (std::abs(r.eigenvalue.imag()) > im_scale) s.has_complex = true;
        if (!(r.eigenvalue.real() > 0.0) || std::abs(r.eigenvalue.imag()) > im_scale)
            s.has_nonpositive = true;
    }
}

void attach_exponents(Spectrum& s) {
    const double ln_a = std::log(static_cast<double>(s.base_a));
    // Complex log: negative roots get Im = pi / ln a, zero roots Re = -inf.
    for (auto& r : s.roots) r.exponent = std::log(r.eigenvalue) / ln_a;
}

} // namespace

Spectrum eigen_spectrum(const ClosureSpec& closure, std::int64_t base_a,
                        const SpectrumOptions& opts) {
    if (base_a < 2) throw validation_error("eigen_spectrum: base must be >= 2");
    const int q = closure.order();
    const auto params = closure.params_real();

    std::vector<cplx> raw;
    raw.reserve(static_cast<std::size_t>(q));
    if (q == 1) {
        raw.emplace_back(params[0], 0.0);
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(build_companion(closure),
                                                   /*computeEigenvectors=*/false);
        if (solver.info() != Eigen::Success)
            throw numeric_error("eigen_spectrum: eigensolver failed to converge");
        for (int i = 0; i < q; ++i) raw.push_back(solver.eigenvalues()(i));
        for (auto& r : raw) r = polish_root(params, r);
    }

    Spectrum s;
    s.base_a = base_a;
    s.roots = cluster_roots(raw, opts.clustering_radius);
    attach_exponents(s);
    attach_flags(s);

    double param_norm = 0.0;
    for (double p : params) param_norm += std::abs(p);
    for (const auto& r : s.roots) {
        const double resid = std::abs(charpoly(params, r.eigenvalue));
        s.max_charpoly_residual = std::max(s.max_charpoly_residual, resid);
        const double bound =
            opts.residual_tol * (1.0 + std::pow(std::abs(r.eigenvalue), q)) * (1.0 + param_norm);
        if (!(resid <= bound)) {
            std::ostringstream msg;
            msg << "eigen_spectrum: root residual " << resid << " exceeds bound " << bound;
            throw numeric_error(msg.str());
        }
    }
    return s;
}

Spectrum spectrum_from_exponents(const std::vector<double>& exponents, std::int64_t base_a,
                                 const SpectrumOptions& opts) {
    if (base_a < 2) throw validation_error("spectrum_from_exponents: base must be >= 2");
    if (exponents.empty()) throw validation_error("spectrum_from_exponents: need q >= 1");

    // Cluster in exponent space, then assign lambda = a^nu per cluster so
    // coincident exponents become one confluent root.
    const std::size_t q = exponents.size();
    std::vector<bool> used(q, false);
    Spectrum s;
    s.base_a = base_a;
    for (std::size_t i = 0; i < q; ++i) {
        if (used[i]) continue;
        double sum = exponents[i];
        int count = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < q; ++j) {
            const double scale = std::max({1.0, std::abs(exponents[i]), std::abs(exponents[j])});
            if (!used[j] && std::abs(exponents[i] - exponents[j]) <= opts.clustering_radius * scale) {
                sum += exponents[j];
                ++count;
                used[j] = true;
            }
        }
        const double nu = sum / count;
        SpectrumRoot r;
        r.exponent = nu;
        r.multiplicity = count;
        r.eigenvalue = std::pow(static_cast<double>(base_a), nu);
        s.roots.push_back(r);
    }
    std::sort(s.roots.begin(), s.roots.end(), [](const SpectrumRoot& a, const SpectrumRoot& b) {
        return a.exponent.real() > b.exponent.real();
    });
    attach_flags(s);
    return s;
}

ClosureSpec closure_from_exponents(const std::vector<double>& exponents, std::int64_t base_a) {
    if (exponents.empty()) throw validation_error("closure_from_exponents: need q >= 1");
    const std::size_t q = exponents.size();

    // Expand prod_k (lambda - a^{nu_k}); poly[i] is the lambda^i coefficient.
    std::vector<double> lambdas(q);
    for (std::size_t k = 0; k < q; ++k)
        lambdas[k] = std::pow(static_cast<double>(base_a), exponents[k]);
    std::vector<double> poly{1.0};
    for (std::size_t k = 0; k < q; ++k) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= lambdas[k] * poly[i];
        }
        poly = std::move(next);
    }
    // charpoly = lambda^q - sum_m params[m] lambda^m, so params[m] = -poly[m].
    std::vector<double> params(q);
    for (std::size_t m = 0; m < q; ++m) params[m] = -poly[m];
    return ClosureSpec(params);
}

} // namespace qadd
