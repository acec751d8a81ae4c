#include "msbsde/stencil.hpp"

#include "msbsde/convergence.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>

namespace msbsde {

namespace {

// Reduced fraction over int64; every operation reports overflow instead of wrapping.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    [[nodiscard]] double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
};

std::optional<Rational> normalize(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    if (den < 0) {
        if (num == std::numeric_limits<std::int64_t>::min() ||
            den == std::numeric_limits<std::int64_t>::min()) {
            return std::nullopt;
        }
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return Rational{num / g, den / g};
}

std::optional<Rational> mul(Rational a, Rational b) {
    const std::int64_t g1 = std::gcd(a.num, b.den);
    const std::int64_t g2 = std::gcd(b.num, a.den);
    const std::int64_t an = g1 ? a.num / g1 : a.num;
    const std::int64_t bd = g1 ? b.den / g1 : b.den;
    const std::int64_t bn = g2 ? b.num / g2 : b.num;
    const std::int64_t ad = g2 ? a.den / g2 : a.den;
    std::int64_t num = 0;
    std::int64_t den = 0;
    if (__builtin_mul_overflow(an, bn, &num) || __builtin_mul_overflow(ad, bd, &den)) {
        return std::nullopt;
    }
    return normalize(num, den);
}

std::optional<Rational> add(Rational a, Rational b) {
    const std::int64_t g = std::gcd(a.den, b.den);
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;
    std::int64_t den = 0;
    std::int64_t num = 0;
    if (__builtin_mul_overflow(a.num, b.den / g, &lhs) ||
        __builtin_mul_overflow(b.num, a.den / g, &rhs) ||
        __builtin_mul_overflow(a.den / g, b.den, &den) ||
        __builtin_add_overflow(lhs, rhs, &num)) {
        return std::nullopt;
    }
    return normalize(num, den);
}

// Lagrange basis derivatives at 0 for nodes {0, a_1..a_k}:
//   L_0'(0) = -sum_j 1/a_j
//   L_i'(0) = (1/a_i) prod_{j>=1, j!=i} a_j / (a_j - a_i)
std::optional<std::vector<double>> exact_weights(std::span<const int> a) {
    std::vector<double> gamma(a.size() + 1);
    Rational g0{0, 1};
    for (int aj : a) {
        auto next = add(g0, Rational{-1, aj});
        if (!next) return std::nullopt;
        g0 = *next;
    }
    gamma[0] = g0.to_double();
    for (std::size_t i = 0; i < a.size(); ++i) {
        Rational gi{1, a[i]};
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j == i) continue;
            auto factor = normalize(a[j], a[j] - a[i]);
            if (!factor) return std::nullopt;
            auto next = mul(gi, *factor);
            if (!next) return std::nullopt;
            gi = *next;
        }
        gamma[i + 1] = gi.to_double();
    }
    return gamma;
}

// Same formulas in floating point. Each factor a_j / (a_j - a_i) is formed
// before multiplying so intermediates stay near the magnitude of the result.
std::vector<double> float_weights(std::span<const int> a) {
    std::vector<double> gamma(a.size() + 1);
    double g0 = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) g0 -= 1.0 / *it;
    gamma[0] = g0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double gi = 1.0 / a[i];
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j == i) continue;
            gi *= static_cast<double>(a[j]) / static_cast<double>(a[j] - a[i]);
        }
        gamma[i + 1] = gi;
    }
    return gamma;
}

}  // namespace

StencilParams::StencilParams(std::vector<int> offsets, int max_param)
    : offsets_(std::move(offsets)) {
    if (offsets_.empty()) {
        throw StencilError("stencil needs at least one parameter");
    }
    if (offsets_.front() <= 0) {
        throw StencilError("stencil parameters must be positive, got " + to_string());
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) {
        if (offsets_[i] <= offsets_[i - 1]) {
            throw StencilError("stencil parameters must be strictly increasing, got " +
                               to_string());
        }
    }
    if (offsets_.back() > max_param) {
        throw StencilError("largest stencil parameter " + std::to_string(offsets_.back()) +
                           " exceeds the cap " + std::to_string(max_param));
    }
}

StencilParams StencilParams::equidistant(int k) {
    if (k < 1) throw StencilError("stencil order k must be >= 1");
    std::vector<int> a(static_cast<std::size_t>(k));
    std::iota(a.begin(), a.end(), 1);
    return StencilParams(std::move(a));
}

StencilParams StencilParams::quadratic(int k) {
    if (k < 1) throw StencilError("stencil order k must be >= 1");
    std::vector<int> a;
    a.reserve(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) a.push_back(i * i);
    return StencilParams(std::move(a));
}

std::vector<int> StencilParams::nodes() const {
    std::vector<int> out;
    out.reserve(offsets_.size() + 1);
    out.push_back(0);
    out.insert(out.end(), offsets_.begin(), offsets_.end());
    return out;
}

std::string StencilParams::to_string(char sep) const {
    std::string out;
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(offsets_[i]);
    }
    return out;
}

Stencil::Stencil(StencilParams params) : params_(std::move(params)) {
    if (auto w = exact_weights(params_.offsets())) {
        gamma_ = std::move(*w);
        exact_ = true;
    } else {
        gamma_ = float_weights(params_.offsets());
    }
}

Stencil make_stencil(const StencilParams& params) { return Stencil(params); }

double approximate_derivative(const Stencil& stencil, std::span<const double> u_values,
                              double h) {
    const auto gamma = stencil.gamma();
    if (u_values.size() != gamma.size()) {
        throw StencilError("approximate_derivative: expected " + std::to_string(gamma.size()) +
                           " values, got " + std::to_string(u_values.size()));
    }
    if (!(h > 0.0)) throw StencilError("approximate_derivative: h must be positive");
    double sum = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i) sum += gamma[i] * u_values[i];
    return sum / h;
}

OrderProbe truncation_order_probe(const Stencil& stencil, const SmoothFunction& u, double t0,
                                  std::span<const double> h_list) {
    if (h_list.size() < 3) {
        throw StencilError("truncation_order_probe: need at least 3 step sizes");
    }
    const auto nodes = stencil.params().nodes();
    const double exact = u.derivative(t0);

    OrderProbe probe;
    probe.errors.reserve(h_list.size());
    bool all_rounding = true;
    std::vector<double> values(nodes.size());
    for (double h : h_list) {
        if (!(h > 0.0)) throw StencilError("truncation_order_probe: step sizes must be positive");
        double scale = std::abs(exact);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            values[i] = u.value(t0 + nodes[i] * h);
            scale += std::abs(stencil.gamma()[i] * values[i]) / h;
        }
        const double err = std::abs(approximate_derivative(stencil, values, h) - exact);
        probe.errors.push_back(err);
        if (err > 64.0 * std::numeric_limits<double>::epsilon() * scale) all_rounding = false;
    }
    if (all_rounding) {
        probe.exact = true;
        return probe;
    }
    probe.slope = fit_order(h_list, probe.errors);
    return probe;
}

}  // namespace msbsde
