#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace msbsde::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 1,
    kExitCondition = 2,  ///< diagnose only: a stability or convergence verdict failed
    kExitSolver = 3,
};

struct DiagnoseOptions {
    std::optional<std::string> params;  ///< "1,2,3"
    std::optional<std::string> family;  ///< with k
    std::optional<int> k;
    std::optional<std::string> output;  ///< one-row diagnostics CSV
    bool quiet = false;
};

struct TableOptions {
    std::vector<std::string> families;  ///< empty selects equidistant and quadratic
    std::vector<std::string> params;    ///< explicit stencils, one row each
    int k_min = 2;
    int k_max = 7;
    std::optional<std::string> output;  ///< CSV goes to stdout when absent
    bool quiet = false;
};

struct RunOptions {
    std::string config;
    std::optional<std::string> output;  ///< overrides output.path
    bool quiet = false;
};

int cmd_diagnose(const DiagnoseOptions& opts, std::ostream& out, std::ostream& err);
int cmd_table(const TableOptions& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_study(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace msbsde::cli
