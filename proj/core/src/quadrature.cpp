#include "msbsde/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <sstream>

namespace msbsde {

namespace {

// Orthonormal Hermite functions p_j (weight e^{-q^2}) at q; returns
// {p_n(q), p_n'(q)}.
std::pair<long double, long double> orthonormal_hermite(int n, long double q) {
    const long double pi = 3.141592653589793238462643383279502884L;
    long double p_prev = 0.0L;
    long double p = 1.0L / std::sqrt(std::sqrt(pi));
    for (int j = 1; j <= n; ++j) {
        const long double next = q * std::sqrt(2.0L / j) * p - std::sqrt((j - 1.0L) / j) * p_prev;
        p_prev = p;
        p = next;
    }
    return {p, std::sqrt(2.0L * n) * p_prev};
}

}  // namespace

namespace detail {

void throw_non_finite(double x, double dt) {
    std::ostringstream msg;
    msg << "non-finite integrand in conditional expectation at x=" << x << ", dt=" << dt;
    throw QuadratureError(msg.str());
}

void check_dt(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw QuadratureError("conditional expectation needs a positive finite dt");
    }
}

}  // namespace detail

HermiteRule::HermiteRule(int order) {
    if (order < 1 || order > kMaxHermiteOrder) {
        throw QuadratureError("Gauss-Hermite order must be in [1, " +
                              std::to_string(kMaxHermiteOrder) + "], got " +
                              std::to_string(order));
    }
    const auto n = static_cast<std::size_t>(order);
    nodes_.resize(n);
    weights_.resize(n);
    if (order == 1) {
        nodes_[0] = 0.0;
        weights_[0] = std::sqrt(std::numbers::pi);
        return;
    }

    // Golub-Welsch start: eigenvalues of the Jacobi matrix.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order - 1);
    for (int i = 1; i < order; ++i) sub(i - 1) = std::sqrt(i / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw QuadratureError("Gauss-Hermite Jacobi eigenproblem did not converge");
    }

    // Newton refinement on p_n, then w = 2 / p_n'(q)^2.
    for (std::size_t i = 0; i < n; ++i) {
        long double q = eig.eigenvalues()(static_cast<Eigen::Index>(i));
        for (int it = 0; it < 10; ++it) {
            const auto [p, dp] = orthonormal_hermite(order, q);
            const long double step = p / dp;
            q -= step;
            if (std::abs(step) <= 1e-19L * std::max(1.0L, std::abs(q))) break;
        }
        const auto dp = orthonormal_hermite(order, q).second;
        nodes_[i] = static_cast<double>(q);
        weights_[i] = static_cast<double>(2.0L / (dp * dp));
    }

    // Exact symmetry; the middle node of an odd rule is zero.
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        const double q = 0.5 * (nodes_[j] - nodes_[i]);
        const double w = 0.5 * (weights_[i] + weights_[j]);
        nodes_[i] = -q;
        nodes_[j] = q;
        weights_[i] = w;
        weights_[j] = w;
    }
    if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

HermiteRule hermite_rule(int order) { return HermiteRule(order); }

}  // namespace msbsde
