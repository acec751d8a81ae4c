#pragma once

#include "msbsde/cli/config.hpp"
#include "msbsde/solver.hpp"

#include <istream>
#include <ostream>
#include <vector>

namespace msbsde::cli {

struct StudyRow {
    int steps = 0;
    double h = 0.0;
    SolveErrors errors;
};

/// Errors per N plus fitted log-log orders. Orders are NaN when some error
/// is exactly zero (the scheme reproduced the solution to rounding).
struct StudyReport {
    RunConfig config;
    std::vector<StudyRow> rows;  ///< sorted by N ascending
    double order_y = 0.0;
    double order_z = 0.0;
};

inline constexpr const char* kStudyCsvHeader = "N,h,err_y_max,err_y_mean,err_z_max,err_z_mean";
inline constexpr const char* kOrderCsvHeader = "order_y,order_z";
inline constexpr const char* kSurfaceCsvHeader = "n,t,x,y,z";

/// Runs one solve per N and fits orders on the max errors.
/// Throws ConfigParseError for fewer than 3 distinct N or a problem without
/// analytic surfaces; solver failures propagate as SolverError.
StudyReport run_study(const RunConfig& config);

/// Rows sorted by N, fitted from the given rows (at least 3).
StudyReport make_report(RunConfig config, std::vector<StudyRow> rows);

/// Header, one line per row, a blank line, then the order block.
void write_study_csv(std::ostream& os, const StudyReport& report);
void write_study_text(std::ostream& os, const StudyReport& report);

struct SurfacePoint {
    int n = 0;
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Every stored node of every level, n ascending then x ascending.
void write_surface_csv(std::ostream& os, const SolutionSurface& surface);
/// Inverse of write_surface_csv; throws std::runtime_error on malformed lines.
std::vector<SurfacePoint> read_surface_csv(std::istream& is);

}  // namespace msbsde::cli
