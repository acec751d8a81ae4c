#pragma once

#include "msbsde/grid.hpp"
#include "msbsde/problems.hpp"
#include "msbsde/quadrature.hpp"
#include "msbsde/stencil.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msbsde {

enum class InitMode {
    Exact,      ///< levels N-a_k+1..N from the analytic solution
    Bootstrap,  ///< levels N-a_k+1..N-1 from the one-step scheme on a refined grid
};

std::string to_string(InitMode mode);

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure inside the backward recursion, tagged with the offending level and node.
class SolverError : public std::runtime_error {
public:
    enum class Kind { PicardNotConverged, OutOfDomain, NonFinite };

    SolverError(Kind kind, int level, double x, const std::string& detail);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] int level() const noexcept { return level_; }
    [[nodiscard]] double x() const noexcept { return x_; }

private:
    Kind kind_;
    int level_;
    double x_;
};

struct SolverConfig {
    Stencil stencil;
    int steps = 0;                  ///< N; must exceed a_k
    int quadrature_order = 0;       ///< 0 selects max(16, k + 2)
    double eval_half_width = 0.5;   ///< errors and outputs live on [-w, w] at t = 0
    double dx_factor = 1.0;         ///< dx = dx_factor * sqrt(h)
    double margin = 1.0;            ///< >= 1, inflates the dependency cone
    int interp_degree = 0;          ///< 0 selects 2k + 1
    double picard_tol = 1e-12;      ///< relative to max(1, |y|)
    int picard_max_iter = 100;
    InitMode init_mode = InitMode::Exact;
    int bootstrap_substeps = 64;

    [[nodiscard]] int effective_quadrature_order() const;
    [[nodiscard]] int effective_interp_degree() const;
};

/// Throws ConfigError describing the first invalid field.
void validate(const SolverConfig& config);

struct PicardSettings {
    double tol = 1e-12;
    int max_iter = 100;
};

struct SolveCounters {
    std::int64_t picard_iterations = 0;
    int max_picard_iterations = 0;
    std::int64_t interpolation_queries = 0;
    std::int64_t out_of_range_queries = 0;
};

/// Spatial layout of a solve: every level lives on the lattice i*dx, level n
/// on |i| <= radius[n]. Radii are the exact backward dependency cone of the
/// evaluation window, so interior queries never leave a stored level.
struct SolverLayout {
    TimeGrid time;
    double dx = 0.0;
    int interp_degree = 0;
    std::vector<std::int64_t> radius;  ///< per level n = 0..N
    double domain_half_width = 0.0;    ///< required_domain() bound on all radii

    [[nodiscard]] SpatialGrid level_grid(int n) const;
};

SolverLayout plan_layout(const BsdeProblem& problem, const SolverConfig& config);

/// Levels n = N - a_k + 1 .. N (ascending), on their layout grids.
std::vector<LevelData> initialize_levels(const BsdeProblem& problem, const SolverConfig& config,
                                         const SolverLayout& layout);

/// E[v(x + dW)] and E[v(x + dW) dW] for dW ~ N(0, dt), v interpolated from a level.
struct ConditionalMoments {
    double plain = 0.0;
    double weighted = 0.0;
};

ConditionalMoments conditional_moments(const LevelData& level, double x, double dt,
                                       const HermiteRule& rule, int interp_degree,
                                       SolveCounters* counters = nullptr);

/// future[j-1] must hold level n + a_j (j = 1..k).
using FutureLevels = std::span<const LevelData* const>;

/// z^n(x) = sum_j gamma_j E[y^{n+a_j} dW_{a_j}] / h.
double step_z(FutureLevels future, double x, const Stencil& stencil, const HermiteRule& rule,
              double h, int interp_degree, SolveCounters* counters = nullptr);

struct PicardResult {
    double y = 0.0;
    int iterations = 0;
};

/// Fixed point of y = [sum_j gamma_j E[y^{n+a_j}] + h f(t_n, y, z_n)] / (-gamma_0),
/// started from y^{n+a_1}(x). Throws SolverError(PicardNotConverged).
PicardResult step_y(FutureLevels future, int n, double t_n, double x, double z_n,
                    const BsdeProblem& problem, const Stencil& stencil, const HermiteRule& rule,
                    double h, int interp_degree, const PicardSettings& picard,
                    SolveCounters* counters = nullptr);

struct SolutionSurface {
    SolverConfig config;
    SolverLayout layout;
    std::vector<LevelData> levels;  ///< index n = 0..N
    SolveCounters counters;

    /// y^0 / z^0 interpolated at x (must lie in the level-0 window).
    [[nodiscard]] double y0(double x) const;
    [[nodiscard]] double z0(double x) const;
};

/// Runs the backward recursion n = N - a_k, ..., 0 computing z before y.
SolutionSurface solve_backward(const BsdeProblem& problem, const SolverConfig& config);

struct SolveErrors {
    double y_max = 0.0;
    double y_mean = 0.0;
    double z_max = 0.0;
    double z_mean = 0.0;
    int samples = 0;
};

/// Errors of level 0 against the analytic solution over the nodes with
/// |x| <= eval_half_width. Throws ProblemError without analytic surfaces.
SolveErrors measure_errors(const SolutionSurface& surface, const BsdeProblem& problem);

}  // namespace msbsde
