#include "msbsde/convergence.hpp"

#include <cmath>
#include <string>

namespace msbsde {

double fit_order(std::span<const double> steps, std::span<const double> errors) {
    if (steps.size() != errors.size()) {
        throw FitError("fit_order: steps and errors differ in length");
    }
    if (steps.size() < 3) {
        throw FitError("fit_order: need at least 3 samples, got " +
                       std::to_string(steps.size()));
    }
    const auto n = static_cast<double>(steps.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(steps[i]) ||
            !std::isfinite(errors[i])) {
            throw FitError("fit_order: samples must be positive and finite");
        }
        mean_x += std::log(steps[i]);
        mean_y += std::log(errors[i]);
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const double dx = std::log(steps[i]) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log(errors[i]) - mean_y);
    }
    if (sxx == 0.0) {
        throw FitError("fit_order: step sizes must not all be equal");
    }
    return sxy / sxx;
}

}  // namespace msbsde
