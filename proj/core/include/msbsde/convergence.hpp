#pragma once

#include <span>
#include <stdexcept>

namespace msbsde {

class FitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Least-squares slope of log(errors) against log(steps).
///
/// Both sequences must have the same length (at least 3) and hold strictly
/// positive, finite entries. For errors = C * steps^p the result is p.
double fit_order(std::span<const double> steps, std::span<const double> errors);

}  // namespace msbsde
