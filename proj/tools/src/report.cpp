#include "msbsde/cli/report.hpp"

#include "msbsde/convergence.hpp"
#include "msbsde/format.hpp"
#include "msbsde/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace msbsde::cli {

namespace {

double fit_or_nan(const std::vector<double>& h, const std::vector<double>& e) {
    const bool positive = std::all_of(e.begin(), e.end(), [](double v) { return v > 0.0; });
    if (!positive) return std::numeric_limits<double>::quiet_NaN();
    return fit_order(h, e);
}

double parse_double(std::string_view field, int line_no) {
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw std::runtime_error("surface csv line " + std::to_string(line_no) +
                                 ": bad number '" + std::string(field) + "'");
    }
    return v;
}

}  // namespace

StudyReport make_report(RunConfig config, std::vector<StudyRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const StudyRow& a, const StudyRow& b) { return a.steps < b.steps; });
    if (rows.size() < 3) throw ConfigParseError("N", "a study needs at least 3 step counts");
    std::vector<double> h;
    std::vector<double> ey;
    std::vector<double> ez;
    for (const auto& r : rows) {
        h.push_back(r.h);
        ey.push_back(r.errors.y_max);
        ez.push_back(r.errors.z_max);
    }
    StudyReport report{std::move(config), std::move(rows), 0.0, 0.0};
    report.order_y = fit_or_nan(h, ey);
    report.order_z = fit_or_nan(h, ez);
    return report;
}

StudyReport run_study(const RunConfig& config) {
    std::vector<int> steps = config.steps;
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    if (steps.size() < 3) throw ConfigParseError("N", "a study needs at least 3 distinct step counts");

    const BsdeProblem problem = find_problem(config.problem, config.horizon);
    if (!problem.has_analytic()) {
        throw ConfigParseError("problem", "a study needs a problem with an analytic solution");
    }

    std::vector<StudyRow> rows;
    for (int n : steps) {
        const SolutionSurface surface = solve_backward(problem, config.solver_config(n));
        rows.push_back({n, surface.layout.time.h(), measure_errors(surface, problem)});
    }
    return make_report(config, std::move(rows));
}

void write_study_csv(std::ostream& os, const StudyReport& report) {
    os << kStudyCsvHeader << '\n';
    for (const auto& r : report.rows) {
        os << r.steps << ',' << format_roundtrip(r.h) << ',' << format_roundtrip(r.errors.y_max)
           << ',' << format_roundtrip(r.errors.y_mean) << ',' << format_roundtrip(r.errors.z_max)
           << ',' << format_roundtrip(r.errors.z_mean) << '\n';
    }
    os << '\n' << kOrderCsvHeader << '\n';
    os << format_roundtrip(report.order_y) << ',' << format_roundtrip(report.order_z) << '\n';
}

void write_study_text(std::ostream& os, const StudyReport& report) {
    const auto& c = report.config;
    os << "problem " << c.problem << ", T = " << format_sig(c.horizon) << ", stencil ["
       << c.stencil.to_string() << "], init " << to_string(c.init_mode) << '\n';
    os << "      N            h    err_y_max   err_y_mean    err_z_max   err_z_mean\n";
    for (const auto& r : report.rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%7d %12.6g %12.6g %12.6g %12.6g %12.6g\n", r.steps, r.h,
                      r.errors.y_max, r.errors.y_mean, r.errors.z_max, r.errors.z_mean);
        os << line;
    }
    os << "order_y = " << format_sig(report.order_y) << ", order_z = " << format_sig(report.order_z)
       << " (stencil order " << c.stencil.k() << ")\n";
}

void write_surface_csv(std::ostream& os, const SolutionSurface& surface) {
    os << kSurfaceCsvHeader << '\n';
    for (const auto& level : surface.levels) {
        const std::string t = format_roundtrip(surface.layout.time.t(level.n));
        const auto nodes = level.grid.nodes();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            os << level.n << ',' << t << ',' << format_roundtrip(nodes[i]) << ','
               << format_roundtrip(level.y[i]) << ',' << format_roundtrip(level.z[i]) << '\n';
        }
    }
}

std::vector<SurfacePoint> read_surface_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kSurfaceCsvHeader) {
        throw std::runtime_error("surface csv: missing header");
    }
    std::vector<SurfacePoint> out;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::string_view rest(line);
        std::string_view fields[5];
        for (int f = 0; f < 5; ++f) {
            const auto comma = rest.find(',');
            if ((f < 4) == (comma == std::string_view::npos)) {
                throw std::runtime_error("surface csv line " + std::to_string(line_no) +
                                         ": expected 5 fields");
            }
            fields[f] = rest.substr(0, comma);
            rest = f < 4 ? rest.substr(comma + 1) : std::string_view{};
        }
        SurfacePoint p;
        const auto [ptr, ec] =
            std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), p.n);
        if (ec != std::errc() || ptr != fields[0].data() + fields[0].size()) {
            throw std::runtime_error("surface csv line " + std::to_string(line_no) + ": bad level");
        }
        p.t = parse_double(fields[1], line_no);
        p.x = parse_double(fields[2], line_no);
        p.y = parse_double(fields[3], line_no);
        p.z = parse_double(fields[4], line_no);
        out.push_back(p);
    }
    return out;
}

}  // namespace msbsde::cli
