#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's weight or root code.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

/// Solves sum_i g_i a_i^p = [p == 1], p = 0..k, over nodes {0, a_1..a_k}
/// by exact Gauss-Jordan elimination.
inline std::vector<Rational> moment_weights(const std::vector<int>& params) {
    std::vector<long> nodes{0};
    nodes.insert(nodes.end(), params.begin(), params.end());
    const std::size_t m = nodes.size();
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1));
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t i = 0; i < m; ++i) {
            Rational v = 1;
            for (std::size_t e = 0; e < p; ++e) v *= nodes[i];
            a[p][i] = v;
        }
        a[p][m] = p == 1 ? 1 : 0;
    }
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        while (piv < m && a[piv][c] == 0) ++piv;
        if (piv == m) throw std::runtime_error("singular moment system");
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (std::size_t j = c; j <= m; ++j) a[r][j] -= f * a[c][j];
        }
    }
    std::vector<Rational> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = a[i][m] / a[i][i];
    return g;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact sum_{j>=2}|alpha_j| / |alpha_1| from exact weights.
inline Rational ratio(const std::vector<int>& params, const std::vector<Rational>& g) {
    const int ak = params.back();
    std::vector<Rational> c(static_cast<std::size_t>(ak) + 1);
    c[0] = g[0];
    for (std::size_t i = 0; i < params.size(); ++i) c[static_cast<std::size_t>(params[i])] = g[i + 1];
    std::vector<Rational> alpha(static_cast<std::size_t>(ak) + 2);
    for (int j = ak; j >= 1; --j) {
        alpha[static_cast<std::size_t>(j)] = alpha[static_cast<std::size_t>(j) + 1] + c[static_cast<std::size_t>(j)];
    }
    Rational num = 0;
    for (int j = 2; j <= ak; ++j) num += abs(alpha[static_cast<std::size_t>(j)]);
    return num / abs(alpha[1]);
}

/// All roots of sum_d coeffs[d] z^d by Durand-Kerner in long double.
inline std::vector<std::complex<long double>> durand_kerner(std::vector<long double> coeffs) {
    using C = std::complex<long double>;
    while (coeffs.size() > 1 && coeffs.back() == 0.0L) coeffs.pop_back();
    const std::size_t n = coeffs.size() - 1;
    const long double lead = coeffs.back();
    for (auto& c : coeffs) c /= lead;
    auto eval = [&](C z) {
        C acc = 0;
        for (std::size_t d = coeffs.size(); d-- > 0;) acc = acc * z + coeffs[d];
        return acc;
    };
    std::vector<C> z(n);
    const C seed(0.4L, 0.9L);
    C p = 1;
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = p;
        p *= seed;
    }
    for (int iter = 0; iter < 5000; ++iter) {
        long double change = 0;
        for (std::size_t i = 0; i < n; ++i) {
            C den = 1;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) den *= z[i] - z[j];
            }
            const C step = eval(z[i]) / den;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-17L) break;
    }
    return z;
}

/// Largest modulus among roots of the characteristic polynomial that are not
/// within `tol` of 1. Coefficient of lambda^{a_k - a_i} is g_i.
inline long double max_nonunit_modulus(const std::vector<int>& params,
                                       const std::vector<Rational>& g, long double tol = 1e-7L) {
    const int ak = params.back();
    std::vector<long double> coeffs(static_cast<std::size_t>(ak) + 1, 0.0L);
    coeffs[static_cast<std::size_t>(ak)] = static_cast<long double>(g[0]);
    for (std::size_t i = 0; i < params.size(); ++i) {
        coeffs[static_cast<std::size_t>(ak - params[i])] = static_cast<long double>(g[i + 1]);
    }
    long double best = 0;
    for (const auto& r : durand_kerner(coeffs)) {
        if (std::abs(r - 1.0L) > tol) best = std::max(best, std::abs(r));
    }
    return best;
}

/// E[(x + dW)^p] for dW ~ N(0, dt), from the binomial expansion and
/// E[dW^{2m}] = (2m-1)!! dt^m.
inline long double gaussian_moment(int p, long double x, long double dt) {
    long double total = 0;
    long double binom = 1;
    for (int j = 0; j <= p; ++j) {
        if (j % 2 == 0) {
            long double dfact = 1;
            for (int m = j - 1; m > 1; m -= 2) dfact *= m;
            total += binom * std::pow(x, p - j) * dfact * std::pow(dt, j / 2);
        }
        binom = binom * (p - j) / (j + 1);
    }
    return total;
}

/// Strictly increasing positive integers with the given count and maximum <= max_param.
inline std::vector<int> random_params(std::mt19937_64& rng, int k, int max_param) {
    std::vector<int> pool(static_cast<std::size_t>(max_param));
    for (int i = 0; i < max_param; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> out(pool.begin(), pool.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace oracle
