#include "msbsde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace msbsde {

namespace {

std::string solver_message(SolverError::Kind kind, int level, double x, const std::string& detail) {
    std::ostringstream msg;
    msg.precision(17);
    switch (kind) {
        case SolverError::Kind::PicardNotConverged: msg << "picard-not-converged"; break;
        case SolverError::Kind::OutOfDomain: msg << "out-of-domain"; break;
        case SolverError::Kind::NonFinite: msg << "non-finite"; break;
    }
    msg << " at level n=" << level << ", x=" << x;
    if (!detail.empty()) msg << ": " << detail;
    return msg.str();
}

// Smallest index radius whose grid holds 4 nodes and a full interpolation window.
std::int64_t min_radius(int degree) { return std::max<std::int64_t>(2, (degree + 1) / 2); }

// Backward dependency cone: if level n is computed on |i| <= r[n], level
// n + a needs every node touched by the interpolation windows around
// x + sqrt(2 a h) q for all quadrature nodes q.
std::vector<std::int64_t> cone_radii(std::vector<std::int64_t> seeds, int last_scheme_level,
                                     std::span<const int> offsets, double h, double dx,
                                     double max_node, double margin, int degree) {
    auto& r = seeds;
    const std::int64_t floor_r = min_radius(degree);
    for (auto& v : r) v = std::max(v, floor_r);
    for (int n = 0; n <= last_scheme_level; ++n) {
        for (int a : offsets) {
            const double reach = margin * max_node * std::sqrt(2.0 * a * h) / dx;
            const double s = static_cast<double>(r[static_cast<std::size_t>(n)]) + reach;
            const auto need = static_cast<std::int64_t>(std::ceil(s + 0.5 * degree + 0.5)) + 1;
            auto& target = r[static_cast<std::size_t>(n + a)];
            target = std::max(target, need);
        }
    }
    return r;
}

double picard_solve(double base, double y_start, int n, double t_n, double x, double z_n,
                    const Generator& f, double gamma0, double h, const PicardSettings& picard,
                    int& iterations) {
    const double scale = -1.0 / gamma0;
    double y = y_start;
    for (int it = 1; it <= picard.max_iter; ++it) {
        const double next = (base + h * f(t_n, y, z_n)) * scale;
        if (!std::isfinite(next)) {
            throw SolverError(SolverError::Kind::NonFinite, n, x, "Picard iterate overflowed");
        }
        const double diff = std::abs(next - y);
        y = next;
        if (diff <= picard.tol * std::max(1.0, std::abs(y))) {
            iterations = it;
            return y;
        }
    }
    std::ostringstream msg;
    msg << "no fixed point within " << picard.max_iter << " iterations";
    throw SolverError(SolverError::Kind::PicardNotConverged, n, x, msg.str());
}

// One backward sweep of the multistep scheme over levels last..0 on a fixed
// lattice. `levels` must already hold every level above `last`.
struct Sweep {
    const BsdeProblem& problem;
    const Stencil& stencil;
    const HermiteRule& rule;
    double t_start = 0.0;
    double h = 0.0;
    double dx = 0.0;
    int degree = 0;
    PicardSettings picard;
    std::span<const std::int64_t> radius;
    std::function<bool(int)> keep;

    void run(std::vector<LevelData>& levels, int last, SolveCounters& counters) const {
        const auto offsets = stencil.params().offsets();
        const auto k = static_cast<std::size_t>(stencil.k());
        const double gamma0 = stencil.gamma(0);
        std::vector<const LevelData*> future(k);
        std::vector<ConditionalMoments> moments(k);

        for (int n = last; n >= 0; --n) {
            for (std::size_t j = 0; j < k; ++j) {
                future[j] = &levels[static_cast<std::size_t>(n + offsets[j])];
            }
            const auto r = radius[static_cast<std::size_t>(n)];
            LevelData level{n, SpatialGrid::lattice(-r, r, dx), {}, {}};
            level.y.resize(static_cast<std::size_t>(level.grid.size()));
            level.z.resize(level.y.size());
            const double t_n = t_start + n * h;

            for (std::size_t i = 0; i < level.y.size(); ++i) {
                const double x = level.grid.nodes()[i];
                try {
                    double base = 0.0;
                    double zsum = 0.0;
                    for (std::size_t j = 0; j < k; ++j) {
                        moments[j] = conditional_moments(*future[j], x, offsets[j] * h, rule,
                                                         degree, &counters);
                        base += stencil.gamma()[j + 1] * moments[j].plain;
                        zsum += stencil.gamma()[j + 1] * moments[j].weighted;
                    }
                    const double z = zsum / h;
                    const double start = interpolate(future[0]->grid, future[0]->y, x, degree);
                    ++counters.interpolation_queries;
                    int iterations = 0;
                    const double y = picard_solve(base, start, n, t_n, x, z, problem.generator,
                                                  gamma0, h, picard, iterations);
                    counters.picard_iterations += iterations;
                    counters.max_picard_iterations =
                        std::max(counters.max_picard_iterations, iterations);
                    level.y[i] = y;
                    level.z[i] = z;
                } catch (const OutOfDomainError& e) {
                    throw SolverError(SolverError::Kind::OutOfDomain, n, x, e.what());
                } catch (const QuadratureError& e) {
                    throw SolverError(SolverError::Kind::NonFinite, n, x, e.what());
                }
            }
            levels[static_cast<std::size_t>(n)] = std::move(level);

            const int done = n + offsets.back();
            if (keep && !keep(done)) {
                levels[static_cast<std::size_t>(done)] = LevelData{};
            }
        }
    }
};

// z at the terminal time when no analytic gradient exists:
// E[phi(x + dW) dW] / delta over a short increment.
double terminal_z_estimate(const BsdeProblem& problem, const HermiteRule& rule, double x,
                           double delta) {
    return expect_weighted(rule, problem.terminal, x, delta) / delta;
}

LevelData terminal_level(const BsdeProblem& problem, const SpatialGrid& grid, int n,
                         const HermiteRule& rule, double delta) {
    LevelData level{n, grid, {}, {}};
    for (double x : grid.nodes()) {
        level.y.push_back(problem.terminal(x));
        level.z.push_back(problem.analytic_z ? (*problem.analytic_z)(problem.horizon, x)
                                             : terminal_z_estimate(problem, rule, x, delta));
    }
    return level;
}

std::vector<LevelData> bootstrap_levels(const BsdeProblem& problem, const SolverConfig& config,
                                        const SolverLayout& layout, const HermiteRule& rule) {
    const int N = layout.time.steps();
    const int ak = config.stencil.max_offset();
    const int S = config.bootstrap_substeps;
    const int degree = layout.interp_degree;
    const double h = layout.time.h();
    const double h_fine = h / S;
    const double dx_fine = config.dx_factor * std::sqrt(h_fine);
    const int first = N - ak + 1;
    const int fine_last = (ak - 1) * S;

    // Fine level m sits at t_first + m h_fine; coarse level first + i is fine level i S.
    std::vector<std::int64_t> seeds(static_cast<std::size_t>(fine_last) + 1, 0);
    for (int i = 0; i < ak; ++i) {
        const double half = static_cast<double>(layout.radius[static_cast<std::size_t>(first + i)]) *
                            layout.dx;
        seeds[static_cast<std::size_t>(i * S)] =
            static_cast<std::int64_t>(std::ceil(half / dx_fine)) + degree / 2 + 2;
    }
    const Stencil one_step(StencilParams({1}));
    const auto radius = cone_radii(std::move(seeds), fine_last - 1, one_step.params().offsets(),
                                   h_fine, dx_fine, rule.max_abs_node(), config.margin, degree);

    std::vector<LevelData> fine(static_cast<std::size_t>(fine_last) + 1);
    const auto r_top = radius.back();
    fine.back() = terminal_level(problem, SpatialGrid::lattice(-r_top, r_top, dx_fine), fine_last,
                                 rule, h_fine);
    // Keep only the fine levels that land on coarse levels.
    SolveCounters scratch;
    Sweep sweep{problem,
                one_step,
                rule,
                layout.time.t(first),
                h_fine,
                dx_fine,
                degree,
                PicardSettings{config.picard_tol, config.picard_max_iter},
                radius,
                [S](int m) { return m % S == 0; }};
    sweep.run(fine, fine_last - 1, scratch);

    std::vector<LevelData> out;
    for (int i = 0; i < ak; ++i) {
        const int n = first + i;
        if (n == N) {
            out.push_back(terminal_level(problem, layout.level_grid(n), n, rule, h_fine));
            continue;
        }
        const auto& src = fine[static_cast<std::size_t>(i * S)];
        LevelData level{n, layout.level_grid(n), {}, {}};
        for (double x : level.grid.nodes()) {
            level.y.push_back(interpolate(src.grid, src.y, x, degree));
            level.z.push_back(interpolate(src.grid, src.z, x, degree));
        }
        out.push_back(std::move(level));
    }
    return out;
}

}  // namespace

std::string to_string(InitMode mode) {
    return mode == InitMode::Exact ? "exact" : "bootstrap";
}

SolverError::SolverError(Kind kind, int level, double x, const std::string& detail)
    : std::runtime_error(solver_message(kind, level, x, detail)),
      kind_(kind),
      level_(level),
      x_(x) {}

int SolverConfig::effective_quadrature_order() const {
    return quadrature_order > 0 ? quadrature_order : std::max(16, stencil.k() + 2);
}

int SolverConfig::effective_interp_degree() const {
    return interp_degree > 0 ? interp_degree : 2 * stencil.k() + 1;
}

void validate(const SolverConfig& c) {
    if (c.steps <= c.stencil.max_offset()) {
        throw ConfigError("N = " + std::to_string(c.steps) + " must exceed a_k = " +
                          std::to_string(c.stencil.max_offset()));
    }
    const int q = c.effective_quadrature_order();
    if (q < 2 || q > kMaxHermiteOrder) {
        throw ConfigError("quadrature order must be in [2, " + std::to_string(kMaxHermiteOrder) +
                          "]");
    }
    if (c.interp_degree < 0) throw ConfigError("interp_degree must be >= 1");
    if (!(c.eval_half_width >= 0.0) || !std::isfinite(c.eval_half_width)) {
        throw ConfigError("eval_half_width must be >= 0");
    }
    if (!(c.dx_factor > 0.0) || !std::isfinite(c.dx_factor)) {
        throw ConfigError("dx_factor must be positive");
    }
    if (!(c.margin >= 1.0) || !std::isfinite(c.margin)) throw ConfigError("margin must be >= 1");
    if (!(c.picard_tol > 0.0)) throw ConfigError("picard tolerance must be positive");
    if (c.picard_max_iter < 1) throw ConfigError("picard max_iter must be >= 1");
    if (c.bootstrap_substeps < 1) throw ConfigError("bootstrap substeps must be >= 1");
}

SpatialGrid SolverLayout::level_grid(int n) const {
    const auto r = radius.at(static_cast<std::size_t>(n));
    return SpatialGrid::lattice(-r, r, dx);
}

SolverLayout plan_layout(const BsdeProblem& problem, const SolverConfig& config) {
    validate(config);
    const TimeGrid time(problem.horizon, config.steps);
    const HermiteRule rule(config.effective_quadrature_order());
    const int degree = config.effective_interp_degree();
    const double h = time.h();
    const double dx = config.dx_factor * std::sqrt(h);
    const int N = time.steps();
    const int ak = config.stencil.max_offset();

    std::vector<std::int64_t> seeds(static_cast<std::size_t>(N) + 1, 0);
    seeds[0] = static_cast<std::int64_t>(std::ceil(config.eval_half_width / dx - 1e-9));
    auto radius = cone_radii(std::move(seeds), N - ak, config.stencil.params().offsets(), h, dx,
                             rule.max_abs_node(), config.margin, degree);

    const double eval = std::max(config.eval_half_width, static_cast<double>(radius[0]) * dx);
    const double pad = (0.5 * degree + 3.0) * dx;
    const auto domain =
        required_domain(eval, problem.horizon, ak, h, rule, config.margin, pad);
    return SolverLayout{time, dx, degree, std::move(radius), domain.second};
}

std::vector<LevelData> initialize_levels(const BsdeProblem& problem, const SolverConfig& config,
                                         const SolverLayout& layout) {
    const int N = layout.time.steps();
    const int ak = config.stencil.max_offset();
    const HermiteRule rule(config.effective_quadrature_order());

    if (config.init_mode == InitMode::Bootstrap) {
        return bootstrap_levels(problem, config, layout, rule);
    }
    if (!problem.has_analytic()) {
        throw ConfigError("exact initialization needs analytic surfaces; problem '" +
                          problem.name + "' has none");
    }
    std::vector<LevelData> out;
    for (int n = N - ak + 1; n <= N; ++n) {
        const double t = layout.time.t(n);
        LevelData level{n, layout.level_grid(n), {}, {}};
        for (double x : level.grid.nodes()) {
            level.y.push_back(n == N ? problem.terminal(x) : (*problem.analytic_y)(t, x));
            level.z.push_back((*problem.analytic_z)(t, x));
        }
        out.push_back(std::move(level));
    }
    return out;
}

ConditionalMoments conditional_moments(const LevelData& level, double x, double dt,
                                       const HermiteRule& rule, int interp_degree,
                                       SolveCounters* counters) {
    detail::check_dt(dt);
    const double scale = std::sqrt(2.0 * dt);
    const auto q = rule.nodes();
    const auto w = rule.weights();
    double plain = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double dw = scale * q[i];
        double v = 0.0;
        try {
            v = interpolate(level.grid, level.y, x + dw, interp_degree);
        } catch (const OutOfDomainError&) {
            if (counters) ++counters->out_of_range_queries;
            throw;
        }
        plain += w[i] * v;
        weighted += w[i] * v * dw;
    }
    if (counters) counters->interpolation_queries += static_cast<std::int64_t>(q.size());
    if (!std::isfinite(plain) || !std::isfinite(weighted)) detail::throw_non_finite(x, dt);
    return {plain * std::numbers::inv_sqrtpi, weighted * std::numbers::inv_sqrtpi};
}

double step_z(FutureLevels future, double x, const Stencil& stencil, const HermiteRule& rule,
              double h, int interp_degree, SolveCounters* counters) {
    if (future.size() != static_cast<std::size_t>(stencil.k())) {
        throw ConfigError("step_z: need one future level per stencil parameter");
    }
    const auto a = stencil.params().offsets();
    double sum = 0.0;
    for (std::size_t j = 0; j < future.size(); ++j) {
        sum += stencil.gamma()[j + 1] *
               conditional_moments(*future[j], x, a[j] * h, rule, interp_degree, counters).weighted;
    }
    return sum / h;
}

PicardResult step_y(FutureLevels future, int n, double t_n, double x, double z_n,
                    const BsdeProblem& problem, const Stencil& stencil, const HermiteRule& rule,
                    double h, int interp_degree, const PicardSettings& picard,
                    SolveCounters* counters) {
    if (future.size() != static_cast<std::size_t>(stencil.k())) {
        throw ConfigError("step_y: need one future level per stencil parameter");
    }
    const auto a = stencil.params().offsets();
    double base = 0.0;
    for (std::size_t j = 0; j < future.size(); ++j) {
        base += stencil.gamma()[j + 1] *
                conditional_moments(*future[j], x, a[j] * h, rule, interp_degree, counters).plain;
    }
    const double start = interpolate(future[0]->grid, future[0]->y, x, interp_degree);
    PicardResult result;
    result.y = picard_solve(base, start, n, t_n, x, z_n, problem.generator, stencil.gamma(0), h,
                            picard, result.iterations);
    if (counters) {
        counters->picard_iterations += result.iterations;
        counters->max_picard_iterations =
            std::max(counters->max_picard_iterations, result.iterations);
    }
    return result;
}

double SolutionSurface::y0(double x) const {
    const auto& l = levels.front();
    return interpolate(l.grid, l.y, x, layout.interp_degree);
}

double SolutionSurface::z0(double x) const {
    const auto& l = levels.front();
    return interpolate(l.grid, l.z, x, layout.interp_degree);
}

SolutionSurface solve_backward(const BsdeProblem& problem, const SolverConfig& config) {
    SolutionSurface surface{config, plan_layout(problem, config), {}, {}};
    const auto& layout = surface.layout;
    const int N = layout.time.steps();
    const int ak = config.stencil.max_offset();

    surface.levels.resize(static_cast<std::size_t>(N) + 1);
    for (auto& level : initialize_levels(problem, config, layout)) {
        const auto idx = static_cast<std::size_t>(level.n);
        surface.levels[idx] = std::move(level);
    }

    const HermiteRule rule(config.effective_quadrature_order());
    const Sweep sweep{problem,
                      config.stencil,
                      rule,
                      0.0,
                      layout.time.h(),
                      layout.dx,
                      layout.interp_degree,
                      PicardSettings{config.picard_tol, config.picard_max_iter},
                      layout.radius,
                      {}};
    sweep.run(surface.levels, N - ak, surface.counters);
    return surface;
}

SolveErrors measure_errors(const SolutionSurface& surface, const BsdeProblem& problem) {
    if (!problem.has_analytic()) {
        throw ProblemError("problem '" + problem.name + "' has no analytic solution");
    }
    const auto& level = surface.levels.front();
    const double window = surface.config.eval_half_width + 1e-9 * surface.layout.dx;
    SolveErrors e;
    for (std::size_t i = 0; i < level.y.size(); ++i) {
        const double x = level.grid.nodes()[i];
        if (std::abs(x) > window) continue;
        const double ey = std::abs(level.y[i] - (*problem.analytic_y)(0.0, x));
        const double ez = std::abs(level.z[i] - (*problem.analytic_z)(0.0, x));
        e.y_max = std::max(e.y_max, ey);
        e.z_max = std::max(e.z_max, ez);
        e.y_mean += ey;
        e.z_mean += ez;
        ++e.samples;
    }
    if (e.samples > 0) {
        e.y_mean /= e.samples;
        e.z_mean /= e.samples;
    }
    return e;
}

}  // namespace msbsde
