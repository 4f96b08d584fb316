#include "qadd/companion.hpp"

#include <utility>

namespace qadd {

Eigen::MatrixXd build_companion(const ClosureSpec& closure) {
    const int q = closure.order();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(q, q);
    for (int i = 1; i < q; ++i) m(i, i - 1) = 1.0;
    const auto params = closure.params_real();
    for (int i = 0; i < q; ++i) m(i, q - 1) = params[static_cast<std::size_t>(i)];
    return m;
}

namespace {

// One step eta -> Q eta without forming Q: (Q v)_i = v_{i-1} + params_i v_{q-1}.
void advance(std::vector<Rational>& eta, const std::vector<Rational>& params) {
    const std::size_t q = params.size();
    const Rational last = eta[q - 1];
    for (std::size_t i = q; i-- > 1;) eta[i] = eta[i - 1] + params[i] * last;
    eta[0] = params[0] * last;
}

std::vector<Rational> eta_at(const ClosureSpec& closure, int n) {
    const std::size_t q = static_cast<std::size_t>(closure.order());
    std::vector<Rational> eta(q);
    eta[0] = 1;
    for (int s = 0; s < n; ++s) advance(eta, closure.params);
    return eta;
}

} // namespace

std::vector<Rational> recurrence_oracle(const ScalingModel& model, int n) {
    if (n < 0) throw validation_error("recurrence_oracle: n must be >= 0");
    return eta_at(model.closure, n);
}

Rational oracle_eval_exact(const ScalingModel& model, int n) {
    const auto eta = recurrence_oracle(model, n);
    Rational acc = 0;
    for (int j = 0; j < model.order(); ++j)
        acc += eta[static_cast<std::size_t>(j)] * Rational(model.evector[j]);
    return acc;
}

double oracle_eval(const ScalingModel& model, int n) {
    return static_cast<double>(oracle_eval_exact(model, n));
}

ConsistencyResult scalability_consistency_check(const ScalingModel& model, int n, int k) {
    if (k < 0 || n < 0 || k > n)
        throw validation_error("scalability_consistency_check: need 0 <= k <= n");
    const int q = model.order();
    const auto lhs = recurrence_oracle(model, n);

    // eta vectors at exponents l-1+k (l = 1..q) and at n-k.
    std::vector<std::vector<Rational>> blocks;
    blocks.reserve(static_cast<std::size_t>(q));
    for (int l = 0; l < q; ++l) blocks.push_back(eta_at(model.closure, l + k));
    const auto tail = eta_at(model.closure, n - k);

    ConsistencyResult res;
    res.max_residual = 0;
    for (int j = 0; j < q; ++j) {
        Rational rhs = 0;
        for (int l = 0; l < q; ++l)
            rhs += blocks[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] *
                   tail[static_cast<std::size_t>(l)];
        Rational diff = lhs[static_cast<std::size_t>(j)] - rhs;
        if (diff < 0) diff = -diff;
        if (diff > res.max_residual) res.max_residual = diff;
    }
    res.holds = (res.max_residual == 0);
    return res;
}

} // namespace qadd
