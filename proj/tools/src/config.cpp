#include "msbsde/cli/config.hpp"

#include "msbsde/analysis.hpp"
#include "msbsde/problems.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace msbsde::cli {

using json = nlohmann::json;

ConfigParseError::ConfigParseError(std::string path, const std::string& message)
    : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigParseError(path, message);
}

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

std::string indexed(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, value] : j.items()) {
        const bool ok = std::any_of(known.begin(), known.end(),
                                    [&](const char* k) { return key == k; });
        if (!ok) fail(join(path, key), "unknown field");
    }
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
            fail(path, "integer out of range");
        }
        return static_cast<int>(v);
    }
    const auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        fail(path, "integer out of range");
    }
    return static_cast<int>(v);
}

double as_real(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

const json* child(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

void parse_stencil(const json& j, RunConfig& out) {
    const std::string path = "stencil";
    require_object(j, path);
    reject_unknown(j, path, {"params", "family", "k"});
    const json* params = child(j, "params");
    const json* family = child(j, "family");
    const json* k = child(j, "k");

    if (params) {
        if (family || k) fail(path, "give either params or family + k, not both");
        const std::string ppath = join(path, "params");
        if (!params->is_array() || params->empty()) fail(ppath, "expected a non-empty integer list");
        std::vector<int> values;
        for (std::size_t i = 0; i < params->size(); ++i) {
            values.push_back(as_int((*params)[i], indexed(ppath, i)));
        }
        try {
            out.stencil = StencilParams(std::move(values));
        } catch (const StencilError& e) {
            fail(ppath, e.what());
        }
        return;
    }
    if (!family) fail(path, "missing params or family");
    if (!k) fail(join(path, "k"), "required with family");
    const std::string name = as_string(*family, join(path, "family"));
    const auto fam = parse_family(name);
    if (!fam || *fam == StencilFamily::Explicit) {
        fail(join(path, "family"), "expected \"equidistant\" or \"quadratic\", got \"" + name + "\"");
    }
    const int order = as_int(*k, join(path, "k"));
    try {
        out.stencil = family_params(*fam, order);
    } catch (const std::exception& e) {
        fail(join(path, "k"), e.what());
    }
}

void parse_steps(const json& j, RunConfig& out) {
    const std::string path = "N";
    out.steps.clear();
    if (j.is_array()) {
        if (j.empty()) fail(path, "expected at least one step count");
        for (std::size_t i = 0; i < j.size(); ++i) out.steps.push_back(as_int(j[i], indexed(path, i)));
    } else {
        out.steps.push_back(as_int(j, path));
    }
    for (std::size_t i = 0; i < out.steps.size(); ++i) {
        if (out.steps[i] < 1) fail(j.is_array() ? indexed(path, i) : path, "must be positive");
    }
}

RunConfig parse_document(const json& root) {
    require_object(root, "");
    reject_unknown(root, "", {"problem", "T", "N", "stencil", "quadrature", "grid",
                              "interp_degree", "picard", "init", "output"});
    RunConfig cfg;

    const json* problem = child(root, "problem");
    if (!problem) fail("problem", "required");
    cfg.problem = as_string(*problem, "problem");

    if (const json* t = child(root, "T")) {
        cfg.horizon = as_real(*t, "T");
        if (!(cfg.horizon > 0.0)) fail("T", "must be positive");
    }
    try {
        (void)find_problem(cfg.problem, cfg.horizon);
    } catch (const ProblemError& e) {
        fail("problem", e.what());
    }

    const json* steps = child(root, "N");
    if (!steps) fail("N", "required");
    parse_steps(*steps, cfg);

    const json* stencil = child(root, "stencil");
    if (!stencil) fail("stencil", "required");
    parse_stencil(*stencil, cfg);

    if (const json* q = child(root, "quadrature")) {
        require_object(*q, "quadrature");
        reject_unknown(*q, "quadrature", {"Q"});
        if (const json* order = child(*q, "Q")) {
            cfg.quadrature_order = as_int(*order, "quadrature.Q");
            if (cfg.quadrature_order < 2 || cfg.quadrature_order > kMaxHermiteOrder) {
                fail("quadrature.Q", "must be in [2, " + std::to_string(kMaxHermiteOrder) + "]");
            }
        }
    }

    if (const json* g = child(root, "grid")) {
        require_object(*g, "grid");
        reject_unknown(*g, "grid", {"eval_half_width", "dx_factor", "margin"});
        if (const json* v = child(*g, "eval_half_width")) {
            cfg.eval_half_width = as_real(*v, "grid.eval_half_width");
            if (cfg.eval_half_width < 0.0) fail("grid.eval_half_width", "must be >= 0");
        }
        if (const json* v = child(*g, "dx_factor")) {
            cfg.dx_factor = as_real(*v, "grid.dx_factor");
            if (!(cfg.dx_factor > 0.0)) fail("grid.dx_factor", "must be positive");
        }
        if (const json* v = child(*g, "margin")) {
            cfg.margin = as_real(*v, "grid.margin");
            if (cfg.margin < 1.0) fail("grid.margin", "must be >= 1");
        }
    }

    if (const json* d = child(root, "interp_degree")) {
        cfg.interp_degree = as_int(*d, "interp_degree");
        if (cfg.interp_degree < 1) fail("interp_degree", "must be at least 1");
    }

    if (const json* p = child(root, "picard")) {
        require_object(*p, "picard");
        reject_unknown(*p, "picard", {"tol", "max_iter"});
        if (const json* v = child(*p, "tol")) {
            cfg.picard_tol = as_real(*v, "picard.tol");
            if (!(cfg.picard_tol > 0.0)) fail("picard.tol", "must be positive");
        }
        if (const json* v = child(*p, "max_iter")) {
            cfg.picard_max_iter = as_int(*v, "picard.max_iter");
            if (cfg.picard_max_iter < 1) fail("picard.max_iter", "must be at least 1");
        }
    }

    if (const json* init = child(root, "init")) {
        require_object(*init, "init");
        reject_unknown(*init, "init", {"mode", "substeps"});
        if (const json* m = child(*init, "mode")) {
            const std::string mode = as_string(*m, "init.mode");
            if (mode == "exact") {
                cfg.init_mode = InitMode::Exact;
            } else if (mode == "bootstrap") {
                cfg.init_mode = InitMode::Bootstrap;
            } else {
                fail("init.mode", "expected \"exact\" or \"bootstrap\", got \"" + mode + "\"");
            }
        }
        if (const json* s = child(*init, "substeps")) {
            cfg.bootstrap_substeps = as_int(*s, "init.substeps");
            if (cfg.bootstrap_substeps < 1) fail("init.substeps", "must be at least 1");
        }
    }

    if (const json* o = child(root, "output")) {
        require_object(*o, "output");
        reject_unknown(*o, "output", {"path", "x"});
        if (const json* p = child(*o, "path")) {
            cfg.output_path = as_string(*p, "output.path");
            if (cfg.output_path->empty()) fail("output.path", "must not be empty");
        }
        if (const json* xs = child(*o, "x")) {
            if (!xs->is_array() || xs->empty()) fail("output.x", "expected a non-empty number list");
            cfg.output_x.clear();
            for (std::size_t i = 0; i < xs->size(); ++i) {
                cfg.output_x.push_back(as_real((*xs)[i], indexed("output.x", i)));
            }
        }
    }

    for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
        if (cfg.steps[i] <= cfg.stencil.max_offset()) {
            fail(steps->is_array() ? indexed("N", i) : std::string("N"),
                 "must exceed the largest stencil parameter " +
                     std::to_string(cfg.stencil.max_offset()));
        }
    }
    for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
        try {
            validate(cfg.solver_config(cfg.steps[i]));
        } catch (const ConfigError& e) {
            fail(cfg.steps.size() > 1 ? indexed("N", i) : std::string("N"), e.what());
        } catch (const std::exception& e) {
            fail("", e.what());
        }
    }
    return cfg;
}

}  // namespace

SolverConfig RunConfig::solver_config(int n_steps) const {
    SolverConfig sc{.stencil = Stencil(stencil)};
    sc.steps = n_steps;
    sc.quadrature_order = quadrature_order;
    double width = eval_half_width;
    for (double x : output_x) width = std::max(width, std::abs(x));
    sc.eval_half_width = width;
    sc.dx_factor = dx_factor;
    sc.margin = margin;
    sc.interp_degree = interp_degree;
    sc.picard_tol = picard_tol;
    sc.picard_max_iter = picard_max_iter;
    sc.init_mode = init_mode;
    sc.bootstrap_substeps = bootstrap_substeps;
    return sc;
}

RunConfig parse_run_config(std::istream& in) {
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        fail("<document>", std::string("malformed JSON: ") + e.what());
    }
    return parse_document(root);
}

RunConfig parse_run_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("<document>", "cannot open config file " + path.string());
    return parse_run_config(in);
}

StencilParams parse_params_list(const std::string& text) {
    std::vector<int> values;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = text.find(',', pos);
        std::string item = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) throw StencilError("empty entry in parameter list \"" + text + "\"");
        item = item.substr(first, last - first + 1);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || v < std::numeric_limits<int>::min() ||
            v > std::numeric_limits<int>::max()) {
            throw StencilError("not an integer: \"" + item + "\"");
        }
        values.push_back(static_cast<int>(v));
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return StencilParams(std::move(values));
}

}  // namespace msbsde::cli
