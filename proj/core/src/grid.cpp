#include "msbsde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace msbsde {

namespace {

std::string out_of_domain_message(double x, double lo, double hi) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "interpolation point " << x << " outside [" << lo << ", " << hi << "]";
    return msg.str();
}

}  // namespace

OutOfDomainError::OutOfDomainError(double x, double x_min, double x_max)
    : std::out_of_range(out_of_domain_message(x, x_min, x_max)), x_(x) {}

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw GridError("time horizon must be positive and finite");
    }
    if (steps < 1) throw GridError("time grid needs at least one step");
    h_ = horizon / steps;
}

SpatialGrid::SpatialGrid(double x_min, double x_max, int count) {
    if (count < 4) throw GridError("spatial grid needs at least 4 nodes");
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw GridError("spatial grid needs finite x_min < x_max");
    }
    dx_ = (x_max - x_min) / (count - 1);
    nodes_.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) nodes_[static_cast<std::size_t>(i)] = x_min + i * dx_;
    nodes_.back() = x_max;
}

SpatialGrid SpatialGrid::lattice(std::int64_t first, std::int64_t last, double dx) {
    if (last - first + 1 < 4) throw GridError("spatial grid needs at least 4 nodes");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw GridError("grid spacing must be positive");
    SpatialGrid g;
    g.dx_ = dx;
    g.nodes_.reserve(static_cast<std::size_t>(last - first + 1));
    for (std::int64_t i = first; i <= last; ++i) g.nodes_.push_back(static_cast<double>(i) * dx);
    return g;
}

bool SpatialGrid::contains(double x) const noexcept {
    return !nodes_.empty() && x >= x_min() && x <= x_max();
}

double interpolate(const SpatialGrid& grid, std::span<const double> values, double x,
                   int degree) {
    const int m = grid.size();
    if (static_cast<int>(values.size()) != m) {
        throw GridError("interpolate: value count does not match grid size");
    }
    if (degree < 1 || degree > m - 1) {
        throw GridError("interpolate: degree must be in [1, M-1]");
    }
    if (!grid.contains(x)) throw OutOfDomainError(x, grid.x_min(), grid.x_max());

    const double s = (x - grid.x_min()) / grid.dx();
    auto start = static_cast<int>(std::lround(s - 0.5 * degree));
    start = std::clamp(start, 0, m - 1 - degree);

    const auto nodes = grid.nodes();
    // Barycentric weights for equispaced nodes: (-1)^j C(degree, j).
    double num = 0.0;
    double den = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= degree; ++j) {
        const auto idx = static_cast<std::size_t>(start + j);
        const double diff = x - nodes[idx];
        if (diff == 0.0) return values[idx];
        const double w = ((j & 1) ? -binom : binom) / diff;
        num += w * values[idx];
        den += w;
        binom = binom * (degree - j) / (j + 1);
    }
    return num / den;
}

std::pair<double, double> required_domain(double eval_half_width, double horizon, int max_offset,
                                          double h, const HermiteRule& rule, double margin,
                                          double per_level_pad) {
    if (eval_half_width < 0.0 || !(horizon > 0.0) || max_offset < 1 || !(h > 0.0) ||
        margin < 1.0 || per_level_pad < 0.0) {
        throw GridError("required_domain: invalid arguments");
    }
    const double levels = std::ceil(horizon / h - 1e-9);
    double reach = 0.0;
    for (int a = 1; a <= max_offset; ++a) {
        reach = std::max(reach, std::ceil(levels / a - 1e-9) * std::sqrt(2.0 * a * h));
    }
    const double half =
        eval_half_width + margin * rule.max_abs_node() * reach + levels * per_level_pad;
    return {-half, half};
}

}  // namespace msbsde
