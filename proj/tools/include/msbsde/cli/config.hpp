#pragma once

#include "msbsde/solver.hpp"
#include "msbsde/stencil.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msbsde::cli {

/// Malformed or invalid run configuration; the message starts with the
/// offending field path, e.g. "stencil.params[1]: ...".
class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(std::string path, const std::string& message);

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// A solve or study request as read from a JSON config document.
///
/// Recognised fields (all optional except `problem`, `N` and `stencil`):
///
///     {
///       "problem": "P3",
///       "T": 1.0,
///       "N": 64,                       // or [16, 32, 64, 128]
///       "stencil": {"params": [1, 4]}, // or {"family": "quadratic", "k": 2}
///       "quadrature": {"Q": 16},
///       "grid": {"eval_half_width": 0.5, "dx_factor": 1.0, "margin": 1.0},
///       "interp_degree": 3,
///       "picard": {"tol": 1e-12, "max_iter": 100},
///       "init": {"mode": "exact", "substeps": 64},
///       "output": {"path": "out.csv", "x": [0.0, 0.25]}
///     }
///
/// Unknown fields are rejected.
struct RunConfig {
    std::string problem;
    double horizon = 1.0;
    std::vector<int> steps;
    StencilParams stencil{std::vector<int>{1}};
    int quadrature_order = 0;
    double eval_half_width = 0.5;
    double dx_factor = 1.0;
    double margin = 1.0;
    int interp_degree = 0;
    double picard_tol = 1e-12;
    int picard_max_iter = 100;
    InitMode init_mode = InitMode::Exact;
    int bootstrap_substeps = 64;
    std::optional<std::string> output_path;
    std::vector<double> output_x{0.0};

    /// Solver settings for one N. The evaluation window is widened to cover output_x.
    [[nodiscard]] SolverConfig solver_config(int steps) const;
};

RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_string(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// "1,4,9" -> {1, 4, 9}; throws StencilError on malformed input.
StencilParams parse_params_list(const std::string& text);

}  // namespace msbsde::cli
