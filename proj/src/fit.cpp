#include "qadd/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "qadd/closed_form.hpp"
#include "qadd/spectrum.hpp"

namespace qadd {

namespace {

// Components this far below zero are treated as genuinely negative by the
// active-set projection; anything closer is clamped to zero.
constexpr double kNonnegativeTol = 1e-12;
// Golden-section interval width at which a coordinate search stops.
constexpr double kGoldenTol = 1e-12;
// A full refinement sweep that moves no exponent farther than this ends the search.
constexpr double kSweepTol = 1e-11;
constexpr double kGridStep = 0.05;
constexpr int kMaxSweeps = 80;

struct BasisSystem {
    Spectrum spectrum;
    ClosureSpec closure;
    Eigen::MatrixXd values; // values(i, m) = eta^m(N_i)
};

BasisSystem build_basis(const std::vector<double>& exponents, std::int64_t base_a,
                        const std::vector<DataPoint>& data) {
    BasisSystem sys{spectrum_from_exponents(exponents, base_a),
                    closure_from_exponents(exponents, base_a),
                    Eigen::MatrixXd(static_cast<Eigen::Index>(data.size()),
                                    static_cast<Eigen::Index>(exponents.size()))};

    ScalingModel scaffold(base_a, sys.closure,
                          EVector(std::vector<double>(exponents.size(), 0.0)));
    scaffold.spectrum = sys.spectrum;
    const ClosedFormEvaluator evaluator(scaffold);

    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::vector<double> row = evaluator.basis(data[i].copies);
        for (std::size_t m = 0; m < row.size(); ++m)
            sys.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = row[m];
    }
    return sys;
}

struct InnerFit {
    std::vector<double> components; // full e-vector, fixed slots included
    double objective = 0.0;         // weighted RMS actually minimized
};

// One linear solve for the free components given a fully specified exponent
// vector. The weighted system is A e_free = b with rows scaled by 1/N_i when
// the objective is per copy.
InnerFit solve_components(const FitProblem& problem, const BasisSystem& sys) {
    const int q = problem.order;
    const Eigen::Index rows = static_cast<Eigen::Index>(problem.data.size());

    std::vector<int> free_idx;
    for (int m = 0; m < q; ++m)
        if (!problem.fixed_components[static_cast<std::size_t>(m)]) free_idx.push_back(m);
    const Eigen::Index cols = static_cast<Eigen::Index>(free_idx.size());

    Eigen::VectorXd weight(rows), b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& point = problem.data[static_cast<std::size_t>(i)];
        weight(i) = problem.per_copy_objective ? 1.0 / point.copies : 1.0;
        double shift = 0.0;
        for (int m = 0; m < q; ++m)
            if (const auto& fixed = problem.fixed_components[static_cast<std::size_t>(m)])
                shift += sys.values(i, m) * *fixed;
        b(i) = weight(i) * (point.value - shift);
    }

    InnerFit fit;
    fit.components.assign(static_cast<std::size_t>(q), 0.0);
    for (int m = 0; m < q; ++m)
        if (const auto& fixed = problem.fixed_components[static_cast<std::size_t>(m)])
            fit.components[static_cast<std::size_t>(m)] = *fixed;

    Eigen::VectorXd solution = Eigen::VectorXd::Zero(cols);
    if (cols > 0) {
        Eigen::MatrixXd design(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            design.col(c) = weight.asDiagonal() * sys.values.col(free_idx[static_cast<std::size_t>(c)]);

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(design,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sigma = svd.singularValues();
        const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
        const double threshold = sigma_max * static_cast<double>(std::max(rows, cols)) *
                                 std::numeric_limits<double>::epsilon();
        Eigen::Index rank = 0;
        for (Eigen::Index s = 0; s < sigma.size(); ++s)
            if (sigma(s) > threshold) ++rank;
        if (rank < cols) {
            const double sigma_min = sigma(sigma.size() - 1);
            const double condition = sigma_min > 0.0
                                         ? sigma_max / sigma_min
                                         : std::numeric_limits<double>::infinity();
            std::ostringstream msg;
            msg << "fit: design matrix rank " << rank << " is below the " << cols
                << " free components; the data cannot separate them (coincident exponents or "
                   "too few distinct copy numbers)";
            throw conditioning_error(msg.str(), condition);
        }
        solution = svd.solve(b);

        if (problem.nonnegative_components) {
            // Active-set projection: pin the most negative component to zero
            // and re-solve the rest until none is materially negative.
            std::vector<char> pinned(static_cast<std::size_t>(cols), 0);
            for (Eigen::Index pass = 0; pass < cols; ++pass) {
                Eigen::Index worst = -1;
                for (Eigen::Index c = 0; c < cols; ++c)
                    if (!pinned[static_cast<std::size_t>(c)] &&
                        solution(c) < -kNonnegativeTol &&
                        (worst < 0 || solution(c) < solution(worst)))
                        worst = c;
                if (worst < 0) break;
                pinned[static_cast<std::size_t>(worst)] = 1;

                std::vector<Eigen::Index> active;
                for (Eigen::Index c = 0; c < cols; ++c)
                    if (!pinned[static_cast<std::size_t>(c)]) active.push_back(c);
                solution.setZero();
                if (!active.empty()) {
                    Eigen::MatrixXd sub(rows, static_cast<Eigen::Index>(active.size()));
                    for (std::size_t c = 0; c < active.size(); ++c)
                        sub.col(static_cast<Eigen::Index>(c)) = design.col(active[c]);
                    Eigen::JacobiSVD<Eigen::MatrixXd> sub_svd(
                        sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
                    const Eigen::VectorXd sub_solution = sub_svd.solve(b);
                    for (std::size_t c = 0; c < active.size(); ++c)
                        solution(active[c]) = sub_solution(static_cast<Eigen::Index>(c));
                }
            }
            for (Eigen::Index c = 0; c < cols; ++c)
                if (solution(c) < 0.0) solution(c) = 0.0;
        }

        Eigen::VectorXd fitted = Eigen::VectorXd::Zero(rows);
        fitted = design * solution;
        fit.objective =
            std::sqrt((fitted - b).squaredNorm() / static_cast<double>(rows));
        for (Eigen::Index c = 0; c < cols; ++c)
            fit.components[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(c)])] =
                solution(c);
    } else {
        fit.objective = std::sqrt(b.squaredNorm() / static_cast<double>(rows));
    }
    return fit;
}

FeasibilityReport fitted_feasibility(const std::vector<double>& components,
                                     const ClosureSpec& closure) {
    FeasibilityReport report;
    for (std::size_t m = 0; m < components.size(); ++m) {
        std::ostringstream name;
        name << "e" << (m + 1) << " >= 0";
        report.constraints.push_back(
            Constraint{name.str(), components[m] >= 0.0, components[m]});
    }
    if (components.size() == 2) {
        const std::vector<double> params = closure.params_real();
        const FeasibilityReport pair =
            check_2additive_feasibility(components[0], components[1], params[0], params[1]);
        report.constraints.insert(report.constraints.end(), pair.constraints.begin(),
                                  pair.constraints.end());
    }
    return report;
}

FitResult finalize(const FitProblem& problem, const std::vector<double>& exponents,
                   const BasisSystem& sys, const InnerFit& inner) {
    FitResult result;
    result.exponents = exponents;
    result.components = inner.components;
    result.feasibility = fitted_feasibility(inner.components, sys.closure);

    const bool representable = std::all_of(inner.components.begin(), inner.components.end(),
                                           [](double c) { return c >= 0.0; });
    result.residuals.resize(problem.data.size());
    if (representable) {
        ScalingModel model(problem.base_a, sys.closure, EVector(inner.components));
        model.spectrum = sys.spectrum;
        const ClosedFormEvaluator evaluator(model);
        for (std::size_t i = 0; i < problem.data.size(); ++i) {
            const auto& point = problem.data[i];
            result.residuals[i] =
                evaluator.eval_per_copy(point.copies) - point.value / point.copies;
        }
        result.model = std::move(model);
    } else {
        for (std::size_t i = 0; i < problem.data.size(); ++i) {
            const auto& point = problem.data[i];
            double total = 0.0;
            for (int m = 0; m < problem.order; ++m)
                total += sys.values(static_cast<Eigen::Index>(i), m) *
                         inner.components[static_cast<std::size_t>(m)];
            result.residuals[i] = (total - point.value) / point.copies;
        }
    }
    double sum = 0.0;
    for (double r : result.residuals) sum += r * r;
    result.rms_per_copy = std::sqrt(sum / static_cast<double>(result.residuals.size()));
    return result;
}

std::vector<double> require_all_exponents(const FitProblem& problem, const char* who) {
    std::vector<double> exponents(static_cast<std::size_t>(problem.order));
    for (int j = 0; j < problem.order; ++j) {
        const auto& fixed = problem.fixed_exponents[static_cast<std::size_t>(j)];
        if (!fixed)
            throw validation_error(std::string(who) +
                                   ": every exponent must be fixed for a component-only fit");
        exponents[static_cast<std::size_t>(j)] = *fixed;
    }
    return exponents;
}

} // namespace

FitProblem::FitProblem(std::vector<DataPoint> d, std::int64_t a, int q)
    : data(std::move(d)), base_a(a), order(q) {
    if (q < 1) throw validation_error("FitProblem: order must be >= 1");
    if (a < 2) throw validation_error("FitProblem: base must be >= 2");
    if (data.empty()) throw validation_error("FitProblem: dataset is empty");
    for (const auto& point : data)
        if (!(point.copies >= 1.0))
            throw validation_error("FitProblem: copy numbers must be >= 1");
    fixed_exponents.assign(static_cast<std::size_t>(q), std::nullopt);
    fixed_components.assign(static_cast<std::size_t>(q), std::nullopt);
}

int FitProblem::free_exponent_count() const {
    int n = 0;
    for (const auto& f : fixed_exponents)
        if (!f) ++n;
    return n;
}

int FitProblem::free_component_count() const {
    int n = 0;
    for (const auto& f : fixed_components)
        if (!f) ++n;
    return n;
}

FitResult fit_evector(const FitProblem& problem) {
    const std::vector<double> exponents = require_all_exponents(problem, "fit_evector");
    if (static_cast<int>(problem.data.size()) < problem.free_component_count())
        throw validation_error("fit_evector: fewer data points than free components");

    const BasisSystem sys = build_basis(exponents, problem.base_a, problem.data);
    return finalize(problem, exponents, sys, solve_components(problem, sys));
}

FitResult fit_exponents(const FitProblem& problem) {
    if (problem.order > 4)
        throw validation_error("fit_exponents: exponent search supports order <= 4");
    if (!(problem.exponent_lo < problem.exponent_hi))
        throw validation_error("fit_exponents: search interval is empty");

    std::vector<int> free_idx;
    for (int j = 0; j < problem.order; ++j)
        if (!problem.fixed_exponents[static_cast<std::size_t>(j)]) free_idx.push_back(j);
    if (free_idx.empty()) return fit_evector(problem);

    if (static_cast<int>(problem.data.size()) <
        static_cast<int>(free_idx.size()) + problem.free_component_count())
        throw validation_error("fit_exponents: fewer data points than free parameters");

    std::vector<double> exponents(static_cast<std::size_t>(problem.order), 0.0);
    for (int j = 0; j < problem.order; ++j)
        if (const auto& fixed = problem.fixed_exponents[static_cast<std::size_t>(j)])
            exponents[static_cast<std::size_t>(j)] = *fixed;

    const auto objective = [&](const std::vector<double>& full) -> double {
        try {
            const BasisSystem sys = build_basis(full, problem.base_a, problem.data);
            return solve_components(problem, sys).objective;
        } catch (const numeric_error&) {
            // Ill-conditioned corner of the search domain; steer away from it.
            return std::numeric_limits<double>::infinity();
        }
    };

    // Coarse pass: full grid over the free coordinates.
    std::vector<double> grid;
    for (double v = problem.exponent_lo; v <= problem.exponent_hi + 1e-12; v += kGridStep)
        grid.push_back(std::min(v, problem.exponent_hi));
    if (grid.back() < problem.exponent_hi - 1e-12) grid.push_back(problem.exponent_hi);

    std::vector<std::size_t> odometer(free_idx.size(), 0);
    std::vector<double> best;
    double best_value = std::numeric_limits<double>::infinity();
    while (true) {
        for (std::size_t c = 0; c < free_idx.size(); ++c)
            exponents[static_cast<std::size_t>(free_idx[c])] = grid[odometer[c]];
        const double value = objective(exponents);
        if (value < best_value) {
            best_value = value;
            best = exponents;
        }
        std::size_t c = 0;
        for (; c < odometer.size(); ++c) {
            if (++odometer[c] < grid.size()) break;
            odometer[c] = 0;
        }
        if (c == odometer.size()) break;
    }
    if (!std::isfinite(best_value))
        throw numeric_error("fit_exponents: no feasible exponent assignment on the search grid");
    exponents = best;

    // Refinement: cyclic golden-section over each free coordinate within one
    // grid step of the current point.
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        double moved = 0.0;
        for (int j : free_idx) {
            const std::size_t slot = static_cast<std::size_t>(j);
            const double center = exponents[slot];
            double lo = std::max(problem.exponent_lo, center - kGridStep);
            double hi = std::min(problem.exponent_hi, center + kGridStep);
            const auto eval_at = [&](double t) {
                std::vector<double> trial = exponents;
                trial[slot] = t;
                return objective(trial);
            };
            double c = hi - phi * (hi - lo);
            double d = lo + phi * (hi - lo);
            double fc = eval_at(c), fd = eval_at(d);
            while (hi - lo > kGoldenTol) {
                if (fc <= fd) {
                    hi = d;
                    d = c;
                    fd = fc;
                    c = hi - phi * (hi - lo);
                    fc = eval_at(c);
                } else {
                    lo = c;
                    c = d;
                    fc = fd;
                    d = lo + phi * (hi - lo);
                    fd = eval_at(d);
                }
            }
            const double candidate = 0.5 * (lo + hi);
            const double candidate_value = eval_at(candidate);
            // Strict improvement only: accepting ties would chase roundoff
            // noise across the plateau of an exactly-fitting model and spend
            // the whole sweep budget moving without getting better.
            if (candidate_value < best_value) {
                best_value = candidate_value;
                moved = std::max(moved, std::abs(candidate - center));
                exponents[slot] = candidate;
            }
        }
        converged = moved <= kSweepTol;
    }

    const BasisSystem sys = build_basis(exponents, problem.base_a, problem.data);
    FitResult result = finalize(problem, exponents, sys, solve_components(problem, sys));
    if (!converged)
        throw fit_convergence_error(
            "fit_exponents: refinement still moving after the sweep budget", std::move(result));
    return result;
}

double hypothesis_residual(const ScalingModel& model, const std::vector<DataPoint>& data) {
    if (data.empty()) throw validation_error("hypothesis_residual: dataset is empty");
    const ClosedFormEvaluator evaluator(model);
    double sum = 0.0;
    for (const auto& point : data) {
        const double r = evaluator.eval_per_copy(point.copies) - point.value / point.copies;
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(data.size()));
}

} // namespace qadd
