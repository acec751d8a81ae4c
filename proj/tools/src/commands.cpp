#include "msbsde/cli/commands.hpp"

#include "msbsde/analysis.hpp"
#include "msbsde/cli/config.hpp"
#include "msbsde/cli/report.hpp"
#include "msbsde/format.hpp"
#include "msbsde/problems.hpp"
#include "msbsde/solver.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>

namespace msbsde::cli {

namespace {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError("cannot open " + path + " for writing");
    f << contents;
    f.close();
    if (!f) throw OutputError("failed writing " + path);
}

std::string join_values(std::span<const double> v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_sig(v[i]);
    }
    return s;
}

std::string format_complex(std::complex<double> z) {
    std::string s = format_sig(z.real());
    if (z.imag() != 0.0) {
        s += z.imag() < 0.0 ? " - " : " + ";
        s += format_sig(std::abs(z.imag())) + "i";
    }
    return s;
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

StencilFamily family_or_throw(const std::string& name) {
    const auto fam = parse_family(name);
    if (!fam || *fam == StencilFamily::Explicit) {
        throw ConfigParseError("--family", "expected equidistant or quadratic, got \"" + name + "\"");
    }
    return *fam;
}

// Shared error-to-exit-code mapping for every subcommand.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const ConfigParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitInput;
    } catch (const StencilError& e) {
        err << "invalid stencil: " << e.what() << '\n';
        return kExitInput;
    } catch (const ProblemError& e) {
        err << "invalid problem: " << e.what() << '\n';
        return kExitInput;
    } catch (const ConfigError& e) {
        err << "invalid solver settings: " << e.what() << '\n';
        return kExitInput;
    } catch (const OutputError& e) {
        err << "output error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}

void print_diagnostics(std::ostream& out, const SchemeDiagnostics& d) {
    const auto& s = d.stencil;
    out << "stencil [" << s.params().to_string() << "], k = " << s.k() << '\n';
    out << "gamma: " << join_values(s.gamma()) << '\n';
    out << "c:     " << join_values(d.alphas.c) << '\n';
    out << "alpha: " << join_values(d.alphas.alpha) << '\n';
    out << "convergence ratio sum_{j>=2}|alpha_j|/|alpha_1| = " << format_sig(d.ratio) << '\n';
    out << "characteristic roots:\n";
    for (const auto& r : d.roots) {
        out << "  " << format_complex(r) << "  |r| = " << format_sig(std::abs(r)) << '\n';
    }
    out << "max non-unit root modulus = " << format_sig(d.max_nonunit_root_mag) << '\n';
    out << "convergence condition (ratio < 1): " << verdict(d.convergence_condition_ok) << '\n';
    out << "root condition: " << verdict(d.root_condition_ok) << '\n';
}

RunConfig load_with_override(const RunOptions& opts) {
    if (opts.config.empty()) throw ConfigParseError("--config", "a config file is required");
    RunConfig cfg = load_run_config(opts.config);
    if (opts.output) cfg.output_path = *opts.output;
    return cfg;
}

}  // namespace

int cmd_diagnose(const DiagnoseOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::string family = "explicit";
        std::optional<StencilParams> params;
        if (opts.params) {
            if (opts.family || opts.k) {
                throw ConfigParseError("--params", "give either --params or --family with --k");
            }
            params = parse_params_list(*opts.params);
        } else if (opts.family) {
            if (!opts.k) throw ConfigParseError("--k", "required with --family");
            const StencilFamily fam = family_or_throw(*opts.family);
            params = family_params(fam, *opts.k);
            family = to_string(fam);
        } else {
            throw ConfigParseError("--params", "give --params or --family with --k");
        }

        const SchemeDiagnostics d = diagnose(Stencil(*params));
        if (!opts.quiet) print_diagnostics(out, d);
        if (opts.output) {
            const DiagnosticsRow row{family,  params->k(),  *params,
                                     d.ratio, d.max_nonunit_root_mag, d.convergence_condition_ok,
                                     d.root_condition_ok};
            std::ostringstream csv;
            write_diagnostics_csv(csv, {row});
            write_file(*opts.output, csv.str());
        }
        return d.convergence_condition_ok && d.root_condition_ok ? kExitOk : kExitCondition;
    });
}

int cmd_table(const TableOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<StencilFamily> families;
        for (const auto& entry : opts.families) {
            for (const auto& name : split_list(entry)) families.push_back(family_or_throw(name));
        }
        if (families.empty() && opts.params.empty()) {
            families = {StencilFamily::Equidistant, StencilFamily::Quadratic};
        }
        if (opts.k_min < 1) throw ConfigParseError("--k", "must be at least 1");

        std::vector<DiagnosticsRow> rows;
        for (StencilFamily fam : families) {
            auto part = diagnostics_table(fam, opts.k_min, opts.k_max);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        if (!opts.params.empty()) {
            std::vector<StencilParams> list;
            for (const auto& p : opts.params) list.push_back(parse_params_list(p));
            auto part = diagnostics_table(list);
            rows.insert(rows.end(), part.begin(), part.end());
        }

        std::ostringstream csv;
        write_diagnostics_csv(csv, rows);
        if (opts.output) {
            write_file(*opts.output, csv.str());
            if (!opts.quiet) write_diagnostics_text(out, rows);
        } else {
            out << csv.str();
        }
        return kExitOk;
    });
}

int cmd_solve(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = load_with_override(opts);
        if (cfg.steps.size() != 1) throw ConfigParseError("N", "solve takes a single step count");
        const BsdeProblem problem = find_problem(cfg.problem, cfg.horizon);
        const SolverConfig sc = cfg.solver_config(cfg.steps.front());
        const SolutionSurface surface = solve_backward(problem, sc);

        if (!opts.quiet) {
            out << "problem " << problem.name << ": " << problem.description << '\n';
            out << "T = " << format_sig(cfg.horizon) << ", N = " << sc.steps
                << ", h = " << format_sig(surface.layout.time.h()) << ", stencil ["
                << cfg.stencil.to_string() << "], Q = " << sc.effective_quadrature_order()
                << ", interp_degree = " << surface.layout.interp_degree
                << ", dx = " << format_sig(surface.layout.dx) << ", init "
                << to_string(cfg.init_mode) << '\n';
            const bool analytic = problem.has_analytic();
            for (double x : cfg.output_x) {
                const double y = surface.y0(x);
                const double z = surface.z0(x);
                out << "x = " << format_sig(x) << ": y0 = " << format_sig(y)
                    << ", z0 = " << format_sig(z);
                if (analytic) {
                    out << ", err_y = " << format_sig(std::abs(y - (*problem.analytic_y)(0.0, x)))
                        << ", err_z = " << format_sig(std::abs(z - (*problem.analytic_z)(0.0, x)));
                }
                out << '\n';
            }
            if (analytic) {
                const SolveErrors e = measure_errors(surface, problem);
                out << "window |x| <= " << format_sig(sc.eval_half_width) << " (" << e.samples
                    << " nodes): err_y max " << format_sig(e.y_max) << " mean "
                    << format_sig(e.y_mean) << ", err_z max " << format_sig(e.z_max) << " mean "
                    << format_sig(e.z_mean) << '\n';
            }
            const auto& c = surface.counters;
            out << "picard iterations " << c.picard_iterations << " (max per node "
                << c.max_picard_iterations << "), interpolation queries "
                << c.interpolation_queries << ", out of range " << c.out_of_range_queries << '\n';
        }
        if (cfg.output_path) {
            std::ostringstream csv;
            write_surface_csv(csv, surface);
            write_file(*cfg.output_path, csv.str());
            if (!opts.quiet) out << "surface written to " << *cfg.output_path << '\n';
        }
        return kExitOk;
    });
}

int cmd_study(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = load_with_override(opts);
        const StudyReport report = run_study(cfg);
        std::ostringstream csv;
        write_study_csv(csv, report);
        if (cfg.output_path) {
            write_file(*cfg.output_path, csv.str());
            if (!opts.quiet) {
                write_study_text(out, report);
                out << "report written to " << *cfg.output_path << '\n';
            }
        } else {
            out << csv.str();
        }
        return kExitOk;
    });
}

}  // namespace msbsde::cli
