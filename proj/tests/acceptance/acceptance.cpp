// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "msbsde/analysis.hpp"
#include "msbsde/cli/commands.hpp"
#include "msbsde/cli/config.hpp"
#include "msbsde/cli/report.hpp"
#include "msbsde/problems.hpp"
#include "msbsde/quadrature.hpp"
#include "msbsde/solver.hpp"
#include "msbsde/stencil.hpp"

#include "../support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace msbsde;

namespace {

// Tolerances and limits, fixed here.
constexpr double kSumTol = 1e-12;          // sum gamma_i = 0
constexpr double kGamma0Tol = 1e-12;       // gamma_0 = -sum 1/a_j
constexpr double kFirstMomentTol = 1e-12;  // sum gamma_i a_i = 1
constexpr double kHighMomentTol = 1e-10;   // sum gamma_i a_i^p / (max|gamma| a_k^p), 2 <= p <= k
constexpr double kOracleRelTol = 1e-10;
constexpr int kRandomStencils = 50;
constexpr int kRandomMaxParam = 30;
constexpr int kRandomMaxK = 7;
constexpr unsigned kRandomSeed = 20181;
constexpr double kTableTol = 0.01;
constexpr double kMomentRelTol = 1e-12;
constexpr double kP1Tol = 1e-10;
constexpr double kP2Tol = 1e-9;
constexpr double kOrderLow = 0.5;   // order within [k - 0.5, k + 0.7]
constexpr double kOrderHigh = 0.7;
constexpr double kFastLimit = 1.0;       // seconds, criteria 1-3
constexpr double kSolveLimit = 10.0;     // seconds per solve, criterion 5
constexpr double kStudyLimit = 300.0;    // seconds total, criterion 6

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << title << ": " << detail << std::endl;
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::vector<int> as_vector(const StencilParams& p) { return {p.offsets().begin(), p.offsets().end()}; }

void criterion_coefficients() {
    const auto start = Clock::now();
    std::vector<StencilParams> cases;
    for (int k = 1; k <= 7; ++k) {
        cases.push_back(StencilParams::equidistant(k));
        cases.push_back(StencilParams::quadratic(k));
    }
    std::mt19937_64 rng(kRandomSeed);
    for (int i = 0; i < kRandomStencils; ++i) {
        const int k = 1 + static_cast<int>(rng() % kRandomMaxK);
        cases.emplace_back(oracle::random_params(rng, k, kRandomMaxParam));
    }

    int bad = 0;
    std::string first_bad;
    double worst_first = 0.0;
    double worst_oracle = 0.0;
    for (const auto& p : cases) {
        const Stencil s(p);
        const auto g = s.gamma();
        const auto a = p.nodes();
        long double sum = 0;
        long double first = 0;
        long double inv = 0;
        double gmax = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            sum += g[i];
            first += static_cast<long double>(g[i]) * a[i];
            gmax = std::max(gmax, std::abs(g[i]));
            if (i > 0) inv += 1.0L / a[i];
        }
        bool ok = std::abs(static_cast<double>(sum)) <= kSumTol;
        ok = ok && std::abs(g[0] + static_cast<double>(inv)) <= kGamma0Tol;
        const double first_err = std::abs(static_cast<double>(first - 1.0L));
        worst_first = std::max(worst_first, first_err);
        ok = ok && first_err <= kFirstMomentTol;
        for (int q = 2; q <= p.k(); ++q) {
            long double m = 0;
            for (std::size_t i = 1; i < g.size(); ++i) {
                m += static_cast<long double>(g[i]) * std::pow(static_cast<long double>(a[i]), q);
            }
            ok = ok && std::abs(static_cast<double>(m)) / (gmax * std::pow(p.max_offset(), q)) <= kHighMomentTol;
        }
        const auto exact = oracle::moment_weights(as_vector(p));
        for (std::size_t i = 0; i < exact.size(); ++i) {
            const double ref = oracle::to_double(exact[i]);
            const double rel = std::abs(g[i] - ref) / std::abs(ref);
            worst_oracle = std::max(worst_oracle, rel);
            ok = ok && rel <= kOracleRelTol;
        }
        if (!ok) {
            ++bad;
            if (first_bad.empty()) first_bad = "[" + p.to_string() + "]";
        }
    }
    const double elapsed = seconds_since(start);
    std::string detail = std::to_string(cases.size()) + " stencils, worst |sum g a - 1| = " +
                         fmt("%.3g", worst_first) + ", worst oracle rel err = " + fmt("%.3g", worst_oracle) +
                         ", " + fmt("%.3f", elapsed) + " s";
    if (bad) detail += ", " + std::to_string(bad) + " violating (first " + first_bad + ")";
    report(1, "coefficient correctness", bad == 0 && elapsed < kFastLimit, detail);
}

void criterion_table() {
    const auto start = Clock::now();
    const auto eq = diagnostics_table(StencilFamily::Equidistant, 2, 7);
    const auto quad = diagnostics_table(StencilFamily::Quadratic, 2, 7);

    struct Check {
        const char* what;
        double computed;
        double printed;
    };
    const std::vector<Check> checks{
        {"equidistant k=2 ratio", eq[0].ratio, 0.33},
        {"equidistant k=4 ratio", eq[2].ratio, 1.56},
        {"equidistant k=2 root", eq[0].max_root, 0.33},
        {"equidistant k=3 root", eq[1].max_root, 0.42},
        {"quadratic k=2 root", quad[0].max_root, 0.48},
        {"equidistant k=3 ratio vs 9/11", eq[1].ratio, 9.0 / 11.0},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : checks) {
        const bool hit = std::abs(c.computed - c.printed) <= kTableTol;
        ok = ok && hit;
        if (!hit) detail += std::string(c.what) + " off; ";
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < kFastLimit;
    report(2, "table reproduction", ok,
           detail + std::to_string(checks.size()) + " pinned entries within " + fmt("%.2g", kTableTol) + ", " +
               fmt("%.3f", elapsed) + " s");

    // Remaining printed entries, compared and reported only.
    const double printed_eq[6][2] = {{0.33, 0.33}, {0.81, 0.42}, {1.56, 0.56},
                                     {2.73, 0.70}, {4.65, 0.86}, {7.87, 1.02}};
    const double printed_quad[6][2] = {{0.06, 0.48}, {0.20, 0.63}, {0.37, 0.73},
                                       {0.44, 0.80}, {0.50, 0.83}, {0.57, 0.85}};
    std::cout << "       printed vs computed (ratio, max non-unit root):\n";
    auto row = [](const char* name, const std::vector<DiagnosticsRow>& rows, const double (*printed)[2]) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const bool r_ok = std::abs(rows[i].ratio - printed[i][0]) <= kTableTol;
            const bool m_ok = std::abs(rows[i].max_root - printed[i][1]) <= kTableTol;
            std::printf("       %-11s k=%d  ratio %.4f vs %.2f%s  root %.4f vs %.2f%s\n", name, rows[i].k,
                        rows[i].ratio, printed[i][0], r_ok ? "" : " (differs)", rows[i].max_root, printed[i][1],
                        m_ok ? "" : " (differs)");
        }
    };
    row("equidistant", eq, printed_eq);
    row("quadratic", quad, printed_quad);
    std::fflush(stdout);
}

void criterion_verdicts() {
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& r : diagnostics_table(StencilFamily::Equidistant, 2, 7)) {
        const bool want = r.k <= 3;
        if (r.convergence_ok != want) {
            ok = false;
            detail += "equidistant k=" + std::to_string(r.k) + " convergence verdict wrong; ";
        }
    }
    for (const auto& r : diagnostics_table(StencilFamily::Quadratic, 1, 7)) {
        if (!r.root_ok) {
            ok = false;
            detail += "quadratic k=" + std::to_string(r.k) + " root condition fails; ";
        }
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < kFastLimit;
    report(3, "condition verdicts", ok,
           detail + "equidistant convergence holds for k in {2,3} only, quadratic root condition for k <= 7, " +
               fmt("%.3f", elapsed) + " s");
}

void criterion_quadrature() {
    double worst = 0.0;
    double worst_var = 0.0;
    for (int q = 3; q <= kMaxHermiteOrder; ++q) {
        const HermiteRule rule(q);
        for (double x : {-1.0, 0.0, 2.0}) {
            for (double dt : {0.01, 0.25}) {
                for (int p = 0; p <= 5; ++p) {
                    const double got = expect(rule, [p](double w) { return std::pow(w, p); }, x, dt);
                    const double ref = static_cast<double>(oracle::gaussian_moment(p, x, dt));
                    if (ref == 0.0) continue;  // odd moments at x = 0, checked absolutely below
                    worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
                }
            }
        }
        for (double dt : {0.01, 0.25, 1.0}) {
            const double var = expect_weighted(rule, [](double w) { return w; }, 0.0, dt);
            worst_var = std::max(worst_var, std::abs(var - dt) / dt);
        }
    }
    // Odd moments at x = 0 vanish, so relative error is undefined there.
    double worst_odd = 0.0;
    for (int q = 3; q <= kMaxHermiteOrder; ++q) {
        const HermiteRule rule(q);
        for (int p : {1, 3, 5}) {
            for (double dt : {0.01, 0.25}) {
                worst_odd = std::max(worst_odd, std::abs(expect(rule, [p](double w) { return std::pow(w, p); }, 0.0, dt)));
            }
        }
    }
    const bool ok = worst <= kMomentRelTol && worst_var <= kMomentRelTol && worst_odd <= kMomentRelTol;
    report(4, "quadrature", ok,
           "Q = 3..64, p <= 5: worst rel err " + fmt("%.3g", worst) + ", E[dW^2] rel err " + fmt("%.3g", worst_var) +
               ", odd moments at 0 within " + fmt("%.3g", worst_odd));
}

void criterion_exactness() {
    auto run = [](const char* name, int q, int degree) {
        const auto problem = find_problem(name);
        SolverConfig cfg{.stencil = Stencil(StencilParams({1, 2}))};
        cfg.steps = 20;
        cfg.quadrature_order = q;
        cfg.interp_degree = degree;
        const auto start = Clock::now();
        const auto surface = solve_backward(problem, cfg);
        const double elapsed = seconds_since(start);
        std::size_t m = 0;
        for (const auto& l : surface.levels) m = std::max(m, l.y.size());
        return std::tuple{measure_errors(surface, problem), elapsed, surface.levels.front().y.size(), m,
                          surface.counters.out_of_range_queries};
    };
    const auto [e1, t1, m1, mx1, oor1] = run("P1", 0, 0);
    const auto [e2, t2, m2, mx2, oor2] = run("P2", 2, 2);
    const bool ok1 = e1.y_max <= kP1Tol && e1.z_max <= kP1Tol && t1 < kSolveLimit && oor1 == 0;
    const bool ok2 = e2.y_max <= kP2Tol && e2.z_max <= kP2Tol && t2 < kSolveLimit && oor2 == 0;
    report(5, "solver exactness", ok1 && ok2,
           "P1 err y " + fmt("%.3g", e1.y_max) + " z " + fmt("%.3g", e1.z_max) + " (" + fmt("%.3f", t1) +
               " s, M up to " + std::to_string(mx1) + "); P2 (Q=2, degree 2) err y " + fmt("%.3g", e2.y_max) + " z " +
               fmt("%.3g", e2.z_max) + " (" + fmt("%.3f", t2) + " s, M up to " + std::to_string(mx2) +
               "); N = 20, stencil [1,2]");
}

cli::StudyReport p3_study(const std::vector<int>& params) {
    cli::RunConfig cfg;
    cfg.problem = "P3";
    cfg.steps = {16, 32, 64, 128};
    cfg.stencil = StencilParams(params);
    return cli::run_study(cfg);
}

void criterion_order() {
    const auto start = Clock::now();
    const std::vector<std::pair<std::vector<int>, int>> cases{
        {{1}, 1}, {{1, 2}, 2}, {{1, 4}, 2}, {{1, 2, 3}, 3}, {{1, 4, 9}, 3}};
    bool ok = true;
    std::string detail;
    for (const auto& [params, k] : cases) {
        const auto r = p3_study(params);
        const bool hit = r.order_y >= k - kOrderLow && r.order_y <= k + kOrderHigh && r.order_z >= k - kOrderLow &&
                         r.order_z <= k + kOrderHigh;
        ok = ok && hit;
        detail += "[" + StencilParams(params).to_string() + "] y " + fmt("%.2f", r.order_y) + " z " +
                  fmt("%.2f", r.order_z) + (hit ? "" : " (out of band)") + "; ";
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < kStudyLimit;
    report(6, "empirical order on P3", ok, detail + fmt("%.1f", elapsed) + " s");
}

void criterion_negative_control() {
    const int k = 4;
    cli::StudyReport r;
    try {
        r = p3_study({1, 2, 3, 4});
    } catch (const std::exception& e) {
        report(7, "negative control", false, std::string("study crashed: ") + e.what());
        return;
    }
    bool growth = false;
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        growth = growth || r.rows[i].errors.y_max > r.rows[i - 1].errors.y_max ||
                 r.rows[i].errors.z_max > r.rows[i - 1].errors.z_max;
    }
    const bool below = !(r.order_y >= k - kOrderLow);
    std::string errs;
    for (const auto& row : r.rows) errs += fmt("%.3g", row.errors.y_max) + " ";
    report(7, "negative control", growth || below,
           "[1,2,3,4] (ratio 1.56) order_y " + fmt("%.2f", r.order_y) + ", order_z " + fmt("%.2f", r.order_z) +
               ", err_y_max over N=16..128: " + errs + (growth ? "(grows)" : "(no growth)") +
               (below ? ", order 4 not achieved" : ", order 4 achieved") + "; report written without crash");
}

void criterion_determinism() {
    namespace fs = std::filesystem;
    std::random_device rd;
    const fs::path dir = fs::temp_directory_path() / ("msbsde_accept_" + std::to_string(rd()));
    fs::create_directories(dir);
    const fs::path config = dir / "study.json";
    std::ofstream(config) << R"({"problem":"P4","N":[16,32,64],"stencil":{"family":"quadratic","k":2}})";

    auto run = [&](const std::string& name) {
        std::ostringstream out;
        std::ostringstream err;
        const std::string path = (dir / name).string();
        const int rc = cli::cmd_study({.config = config.string(), .output = path, .quiet = true}, out, err);
        std::ifstream in(path, std::ios::binary);
        std::ostringstream bytes;
        bytes << in.rdbuf();
        return std::pair{rc, bytes.str()};
    };
    const auto a = run("a.csv");
    const auto b = run("b.csv");
    fs::remove_all(dir);
    const bool ok = a.first == 0 && b.first == 0 && !a.second.empty() && a.second == b.second;
    report(8, "determinism", ok,
           "two study runs (P4, [1,4], N = 16,32,64): " + std::to_string(a.second.size()) + " bytes, " +
               (a.second == b.second ? "identical" : "different"));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> criteria{criterion_coefficients, criterion_table,
                                                      criterion_verdicts,     criterion_quadrature,
                                                      criterion_exactness,    criterion_order,
                                                      criterion_negative_control, criterion_determinism};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), "criterion", false, std::string("threw: ") + e.what());
        }
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
