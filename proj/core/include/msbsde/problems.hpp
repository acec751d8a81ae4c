#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msbsde {

class ProblemError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Generator = std::function<double(double t, double y, double z)>;
using Terminal = std::function<double(double x)>;
using Surface = std::function<double(double t, double x)>;

/// A scalar BSDE y_t = phi(W_T) + int_t^T f(s, y_s, z_s) ds - int_t^T z_s dW_s,
/// optionally with its exact solution y = u(t, W_t), z = u_x(t, W_t).
struct BsdeProblem {
    std::string name;
    std::string description;
    double horizon = 1.0;
    Generator generator;
    Terminal terminal;
    std::optional<Surface> analytic_y;
    std::optional<Surface> analytic_z;
    bool z_dependent = false;

    [[nodiscard]] bool has_analytic() const noexcept { return analytic_y && analytic_z; }
};

/// Test problems whose solutions u(t, x) satisfy u_t + u_xx / 2 + f(t, u, u_x) = 0:
///
///   P1  f = 0,              phi = x,           u = x
///   P2  f = 0,              phi = x^2,         u = x^2 + (T - t)
///   P3  f = -3y/2,          phi = e^{T + x},   u = e^{t + x}
///   P4  f = y/2 - z,        phi = sin(T + x),  u = sin(t + x)
std::vector<BsdeProblem> builtin_problems(double horizon = 1.0);

/// Catalog entry by name ("P1".."P4"); throws ProblemError when unknown.
BsdeProblem find_problem(const std::string& name, double horizon = 1.0);

struct ProblemResidual {
    double pde = 0.0;        ///< max |u_t + u_xx/2 + f(t, u, u_x)|
    double terminal = 0.0;   ///< max |u(T, x) - phi(x)|
    double gradient = 0.0;   ///< max |z - d/dx u|
};

/// Probes the analytic surfaces at `samples` seeded random points of
/// [0, T] x [-2, 2] (rounded to multiples of 2^-12) with central
/// differences of step `fd_step`.
/// Throws ProblemError when the problem has no analytic surfaces.
ProblemResidual verify_problem(const BsdeProblem& problem, int samples = 100,
                               double fd_step = 0x1p-13, unsigned seed = 20181u);

}  // namespace msbsde
