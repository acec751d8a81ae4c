#include "msbsde/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace msbsde {

std::vector<BsdeProblem> builtin_problems(double T) {
    if (!(T > 0.0)) throw ProblemError("problem horizon must be positive");
    std::vector<BsdeProblem> out;

    out.push_back(BsdeProblem{
        "P1", "f = 0, phi(x) = x; y = x, z = 1", T,
        [](double, double, double) { return 0.0; },
        [](double x) { return x; },
        Surface([](double, double x) { return x; }),
        Surface([](double, double) { return 1.0; }),
        false});

    out.push_back(BsdeProblem{
        "P2", "f = 0, phi(x) = x^2; y = x^2 + (T - t), z = 2x", T,
        [](double, double, double) { return 0.0; },
        [](double x) { return x * x; },
        Surface([T](double t, double x) { return x * x + (T - t); }),
        Surface([](double, double x) { return 2.0 * x; }),
        false});

    out.push_back(BsdeProblem{
        "P3", "f = -3y/2, phi(x) = exp(T + x); y = z = exp(t + x)", T,
        [](double, double y, double) { return -1.5 * y; },
        [T](double x) { return std::exp(T + x); },
        Surface([](double t, double x) { return std::exp(t + x); }),
        Surface([](double t, double x) { return std::exp(t + x); }),
        false});

    out.push_back(BsdeProblem{
        "P4", "f = y/2 - z, phi(x) = sin(T + x); y = sin(t + x), z = cos(t + x)", T,
        [](double, double y, double z) { return 0.5 * y - z; },
        [T](double x) { return std::sin(T + x); },
        Surface([](double t, double x) { return std::sin(t + x); }),
        Surface([](double t, double x) { return std::cos(t + x); }),
        true});

    return out;
}

BsdeProblem find_problem(const std::string& name, double T) {
    auto all = builtin_problems(T);
    auto it = std::find_if(all.begin(), all.end(), [&](const auto& p) { return p.name == name; });
    if (it == all.end()) throw ProblemError("unknown problem '" + name + "'");
    return std::move(*it);
}

ProblemResidual verify_problem(const BsdeProblem& p, int samples, double step, unsigned seed) {
    if (!p.has_analytic()) {
        throw ProblemError("problem '" + p.name + "' has no analytic surfaces to verify");
    }
    const auto& u = *p.analytic_y;
    const auto& z = *p.analytic_z;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t_dist(0.0, p.horizon);
    std::uniform_real_distribution<double> x_dist(-2.0, 2.0);

    ProblemResidual r;
    for (int s = 0; s < samples; ++s) {
        // Dyadic probe points and step keep every difference of a low-degree
        // polynomial surface exact in floating point.
        const double t = std::ldexp(std::round(std::ldexp(t_dist(rng), 12)), -12);
        const double x = std::ldexp(std::round(std::ldexp(x_dist(rng), 12)), -12);

        const double u0 = u(t, x);
        const double u_t = (u(t + step, x) - u(t - step, x)) / (2.0 * step);
        const double u_x = (u(t, x + step) - u(t, x - step)) / (2.0 * step);
        const double u_xx = (u(t, x + step) - 2.0 * u0 + u(t, x - step)) / (step * step);
        const double zt = z(t, x);

        r.pde = std::max(r.pde, std::abs(u_t + 0.5 * u_xx + p.generator(t, u0, zt)));
        r.terminal = std::max(r.terminal, std::abs(u(p.horizon, x) - p.terminal(x)));
        r.gradient = std::max(r.gradient, std::abs(zt - u_x));
    }
    return r;
}

}  // namespace msbsde
