#include "qadd/coefficients.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace qadd {

namespace {

using cplxl = std::complex<long double>;
using MatrixXcl = Eigen::Matrix<cplxl, Eigen::Dynamic, Eigen::Dynamic>;

// l^j with 0^0 = 1.
long double int_pow(int l, int j) {
    long double r = 1.0L;
    for (int i = 0; i < j; ++i) r *= static_cast<long double>(l);
    return r;
}

} // namespace

CoefficientTable solve_coefficients(const Spectrum& spectrum, const CoefficientOptions& opts) {
    const int q = spectrum.order();
    if (q < 1) throw validation_error("solve_coefficients: empty spectrum");

    // Column layout: cluster-major, then power of n within the cluster.
    struct Col {
        int cluster;
        int power;
    };
    std::vector<Col> cols;
    for (int k = 0; k < static_cast<int>(spectrum.roots.size()); ++k)
        for (int j = 0; j < spectrum.roots[static_cast<std::size_t>(k)].multiplicity; ++j)
            cols.push_back({k, j});

    // Row l encodes the boundary at a^l copies: basis value l^j lambda_k^l.
    MatrixXcl vand(q, q);
    for (int l = 0; l < q; ++l) {
        for (int c = 0; c < q; ++c) {
            const auto& root = spectrum.roots[static_cast<std::size_t>(cols[static_cast<std::size_t>(c)].cluster)];
            const cplxl lam(root.eigenvalue.real(), root.eigenvalue.imag());
            cplxl lam_l = 1.0L;
            for (int p = 0; p < l; ++p) lam_l *= lam;
            vand(l, c) = int_pow(l, cols[static_cast<std::size_t>(c)].power) * lam_l;
        }
    }

    Eigen::JacobiSVD<MatrixXcl> svd(vand);
    const long double smin = svd.singularValues()(q - 1);
    const long double smax = svd.singularValues()(0);
    const double cond =
        smin > 0.0L ? static_cast<double>(smax / smin) : std::numeric_limits<double>::infinity();
    if (!(cond <= opts.condition_limit))
        throw conditioning_error("solve_coefficients: boundary system is ill-conditioned", cond);

    // All q systems share the matrix; the right-hand sides are the identity
    // columns, so the stacked solution is vand^{-1}.
    MatrixXcl solution = vand.fullPivLu().solve(MatrixXcl::Identity(q, q));

    double residual = 0.0;
    MatrixXcl check = vand * solution - MatrixXcl::Identity(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            residual = std::max(residual, static_cast<double>(std::abs(check(i, j))));
    if (!(residual <= opts.boundary_tol))
        throw numeric_error("solve_coefficients: boundary verification failed, residual " +
                            std::to_string(residual));

    CoefficientTable table;
    table.boundary_residual = residual;
    table.condition_estimate = cond;
    table.entry.resize(static_cast<std::size_t>(q));
    for (int m = 0; m < q; ++m) {
        auto& per_m = table.entry[static_cast<std::size_t>(m)];
        per_m.resize(spectrum.roots.size());
        for (std::size_t k = 0; k < spectrum.roots.size(); ++k)
            per_m[k].assign(static_cast<std::size_t>(spectrum.roots[k].multiplicity), {0.0L, 0.0L});
        for (int c = 0; c < q; ++c) {
            per_m[static_cast<std::size_t>(cols[static_cast<std::size_t>(c)].cluster)]
                 [static_cast<std::size_t>(cols[static_cast<std::size_t>(c)].power)] = solution(c, m);
        }
    }
    return table;
}

} // namespace qadd
