#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msbsde {

/// Raised for malformed stencil parameters or mismatched value vectors.
class StencilError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Default upper bound on the largest stencil parameter a_k.
inline constexpr int kDefaultMaxParam = 64;

/// Integer sample offsets a_1 < a_2 < ... < a_k of a one-sided stencil.
///
/// Offsets are multiples of the time step; the anchor a_0 = 0 is implicit
/// and never stored.
class StencilParams {
public:
    /// Validates and stores the offsets. Throws StencilError unless the
    /// sequence is non-empty, strictly increasing, positive and a_k <= max_param.
    explicit StencilParams(std::vector<int> offsets, int max_param = kDefaultMaxParam);

    /// a_i = i for i = 1..k.
    static StencilParams equidistant(int k);
    /// a_i = i^2 for i = 1..k.
    static StencilParams quadratic(int k);

    [[nodiscard]] int k() const noexcept { return static_cast<int>(offsets_.size()); }
    [[nodiscard]] int max_offset() const noexcept { return offsets_.back(); }
    [[nodiscard]] std::span<const int> offsets() const noexcept { return offsets_; }
    /// Offsets including the implicit leading 0 (length k+1).
    [[nodiscard]] std::vector<int> nodes() const;
    /// Offsets joined with `sep`, e.g. "1,4,9".
    [[nodiscard]] std::string to_string(char sep = ',') const;

    friend bool operator==(const StencilParams&, const StencilParams&) = default;

private:
    std::vector<int> offsets_;
};

/// Left-endpoint first-derivative weights on the nodes {0, a_1, ..., a_k}.
///
/// gamma()[i] multiplies u(t0 + a_i h); the sum is divided by h at the call
/// site. Weights are the derivatives at t0 of the Lagrange basis polynomials.
class Stencil {
public:
    explicit Stencil(StencilParams params);

    [[nodiscard]] const StencilParams& params() const noexcept { return params_; }
    [[nodiscard]] int k() const noexcept { return params_.k(); }
    [[nodiscard]] int max_offset() const noexcept { return params_.max_offset(); }
    [[nodiscard]] std::span<const double> gamma() const noexcept { return gamma_; }
    [[nodiscard]] double gamma(int i) const { return gamma_.at(static_cast<std::size_t>(i)); }
    /// True when every weight was obtained from exact integer rational arithmetic.
    [[nodiscard]] bool exact() const noexcept { return exact_; }

private:
    StencilParams params_;
    std::vector<double> gamma_;
    bool exact_ = false;
};

Stencil make_stencil(const StencilParams& params);

/// Sum_i gamma_i u_i / h, where u_values[i] = u(t0 + a_i h).
double approximate_derivative(const Stencil& stencil, std::span<const double> u_values,
                              double h);

/// A smooth test function together with its exact derivative.
struct SmoothFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

/// Outcome of an empirical truncation-order probe.
struct OrderProbe {
    bool exact = false;        ///< derivative reproduced to rounding at every h
    double slope = 0.0;        ///< fitted log-log slope; meaningless when exact
    std::vector<double> errors;
};

/// Fits the slope of log|approx - u'(t0)| against log h over h_list.
/// Throws StencilError when fewer than three step sizes are given or any
/// step is non-positive.
OrderProbe truncation_order_probe(const Stencil& stencil, const SmoothFunction& u, double t0,
                                  std::span<const double> h_list);

}  // namespace msbsde
