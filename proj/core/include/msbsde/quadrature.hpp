#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msbsde {

class QuadratureError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr int kMaxHermiteOrder = 64;

/// Gauss-Hermite rule for the weight e^{-q^2} (physicists' convention).
///
/// Nodes are ascending and symmetric about zero; weights sum to sqrt(pi).
class HermiteRule {
public:
    /// Throws QuadratureError unless 1 <= order <= kMaxHermiteOrder.
    explicit HermiteRule(int order);

    [[nodiscard]] int order() const noexcept { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] double max_abs_node() const noexcept { return nodes_.back(); }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

HermiteRule hermite_rule(int order);

namespace detail {
[[noreturn]] void throw_non_finite(double x, double dt);
void check_dt(double dt);
}  // namespace detail

/// E[g(x + dW)] for dW ~ N(0, dt): (1/sqrt(pi)) sum_i w_i g(x + sqrt(2 dt) q_i).
template <typename G>
double expect(const HermiteRule& rule, G&& g, double x, double dt) {
    detail::check_dt(dt);
    const double scale = std::sqrt(2.0 * dt);
    const auto q = rule.nodes();
    const auto w = rule.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) sum += w[i] * g(x + scale * q[i]);
    if (!std::isfinite(sum)) detail::throw_non_finite(x, dt);
    return sum * std::numbers::inv_sqrtpi;
}

/// E[g(x + dW) dW] for dW ~ N(0, dt).
template <typename G>
double expect_weighted(const HermiteRule& rule, G&& g, double x, double dt) {
    detail::check_dt(dt);
    const double scale = std::sqrt(2.0 * dt);
    const auto q = rule.nodes();
    const auto w = rule.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double dw = scale * q[i];
        sum += w[i] * g(x + dw) * dw;
    }
    if (!std::isfinite(sum)) detail::throw_non_finite(x, dt);
    return sum * std::numbers::inv_sqrtpi;
}

}  // namespace msbsde
