#include "msbsde/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace cli = msbsde::cli;

int main(int argc, char** argv) {
    CLI::App app{"Multi-step schemes for backward SDEs: stencil diagnostics and convergence studies"};
    app.require_subcommand(1);

    cli::DiagnoseOptions diag;
    auto* diagnose = app.add_subcommand("diagnose", "Weights, stability and convergence verdicts of one stencil");
    diagnose->add_option("--params", diag.params, "Stencil parameters, e.g. 1,2,3");
    diagnose->add_option("--family", diag.family, "equidistant or quadratic");
    diagnose->add_option("--k", diag.k, "Stencil order for --family");
    diagnose->add_option("--output", diag.output, "Write a one-row diagnostics CSV");
    diagnose->add_flag("--quiet", diag.quiet, "Suppress the printout");

    cli::TableOptions table;
    auto* tab = app.add_subcommand("table", "Diagnostics table over stencil families");
    tab->add_option("--family", table.families, "Families (repeatable or comma separated)");
    tab->add_option("--params", table.params, "Explicit stencil, one row each (repeatable)");
    tab->add_option("--k", table.k_min, "Smallest order")->capture_default_str();
    tab->add_option("--kmax", table.k_max, "Largest order")->capture_default_str();
    tab->add_option("--output", table.output, "CSV path (stdout when omitted)");
    tab->add_flag("--quiet", table.quiet, "Suppress the text table");

    cli::RunOptions solve_opts;
    auto* solve = app.add_subcommand("solve", "Run the backward scheme once");
    solve->add_option("--config", solve_opts.config, "JSON run config")->required();
    solve->add_option("--output", solve_opts.output, "Surface dump path (n,t,x,y,z)");
    solve->add_flag("--quiet", solve_opts.quiet, "Suppress the summary");

    cli::RunOptions study_opts;
    auto* study = app.add_subcommand("study", "Convergence study over a list of N");
    study->add_option("--config", study_opts.config, "JSON run config")->required();
    study->add_option("--output", study_opts.output, "Report CSV path (stdout when omitted)");
    study->add_flag("--quiet", study_opts.quiet, "Suppress the summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? cli::kExitOk : cli::kExitInput;
    }

    if (*diagnose) return cli::cmd_diagnose(diag, std::cout, std::cerr);
    if (*tab) return cli::cmd_table(table, std::cout, std::cerr);
    if (*solve) return cli::cmd_solve(solve_opts, std::cout, std::cerr);
    return cli::cmd_study(study_opts, std::cout, std::cerr);
}
