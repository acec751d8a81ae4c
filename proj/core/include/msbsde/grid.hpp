#pragma once

#include "msbsde/quadrature.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace msbsde {

class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An interpolation query fell outside the grid. Never extrapolated.
class OutOfDomainError : public std::out_of_range {
public:
    OutOfDomainError(double x, double x_min, double x_max);

    [[nodiscard]] double x() const noexcept { return x_; }

private:
    double x_;
};

/// Equidistant partition t_n = n h of [0, T].
class TimeGrid {
public:
    TimeGrid(double horizon, int steps);

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] int steps() const noexcept { return steps_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double t(int n) const noexcept { return n == steps_ ? horizon_ : n * h_; }

private:
    double horizon_;
    int steps_;
    double h_;
};

/// Uniform spatial grid with M >= 4 nodes.
class SpatialGrid {
public:
    /// Empty placeholder; holds no nodes.
    SpatialGrid() = default;
    SpatialGrid(double x_min, double x_max, int count);

    /// Nodes i*dx for integer i in [first, last]. Grids built this way with a
    /// common dx share bit-identical coordinates.
    static SpatialGrid lattice(std::int64_t first, std::int64_t last, double dx);

    [[nodiscard]] double x_min() const noexcept { return nodes_.front(); }
    [[nodiscard]] double x_max() const noexcept { return nodes_.back(); }
    [[nodiscard]] double dx() const noexcept { return dx_; }
    [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] double node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] bool contains(double x) const noexcept;

private:
    double dx_ = 0.0;
    std::vector<double> nodes_;
};

/// y^n and z^n sampled on the nodes of `grid`.
struct LevelData {
    int n = 0;
    SpatialGrid grid;
    std::vector<double> y;
    std::vector<double> z;
};

/// Local Lagrange interpolation of `values` (one per node) at x, using the
/// degree+1 nodes nearest x (window shifted inward at the boundaries).
/// Throws OutOfDomainError when x lies outside [x_min, x_max].
double interpolate(const SpatialGrid& grid, std::span<const double> values, double x,
                   int degree);

/// Symmetric domain (-w, w) wide enough that the backward recursion never
/// queries outside it.
///
/// A query at level n lands at most max|q| sqrt(2 a h) from a node of level n
/// for a jump of a levels; chaining jumps from t = 0 to T gives the worst
/// reach max_{1<=a<=a_k} ceil(N / a) sqrt(2 a h) max|q| with N = ceil(T/h).
/// `margin` scales that diffusion term; `per_level_pad` (the interpolation
/// window overhang) is added once per level:
///
///   w = eval_half_width + margin * max|q| * max_a ceil(N/a) sqrt(2 a h)
///       + N * per_level_pad
std::pair<double, double> required_domain(double eval_half_width, double horizon, int max_offset,
                                          double h, const HermiteRule& rule, double margin,
                                          double per_level_pad = 0.0);

}  // namespace msbsde
