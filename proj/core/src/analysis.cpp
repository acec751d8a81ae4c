#include "msbsde/analysis.hpp"

#include "msbsde/format.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace msbsde {

namespace {

constexpr double kUnitTol = 1e-9;
constexpr double kSimpleRootTol = 1e-8;
constexpr double kResidualTol = 1e-9;

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;

// Horner on ascending coefficients; also returns the derivative.
template <typename T>
std::pair<std::complex<T>, std::complex<T>> horner(const std::vector<double>& coeffs,
                                                   std::complex<T> z) {
    std::complex<T> p = 0;
    std::complex<T> dp = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + static_cast<T>(*it);
    }
    return {p, dp};
}

// Divides out (lambda - 1); remainder is P(1), which is zero up to rounding.
std::vector<double> deflate_unit_root(const std::vector<double>& coeffs) {
    const std::size_t n = coeffs.size() - 1;
    std::vector<double> q(n);
    double carry = 0.0;
    for (std::size_t d = n; d-- > 0;) {
        carry = coeffs[d + 1] + carry;
        q[d] = carry;
    }
    return q;
}

std::vector<cplx> companion_roots(std::vector<double> coeffs) {
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    const auto degree = static_cast<Eigen::Index>(coeffs.size()) - 1;
    if (degree < 1) return {};

    // Frobenius companion matrix of the monic polynomial.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    const double lead = coeffs.back();
    for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < degree; ++i) {
        companion(i, degree - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw RootFindingError("companion eigenvalue iteration did not converge (degree " +
                               std::to_string(degree) + ")");
    }
    std::vector<cplx> roots;
    roots.reserve(static_cast<std::size_t>(degree));
    for (Eigen::Index i = 0; i < degree; ++i) roots.push_back(solver.eigenvalues()(i));

    // Newton polish in extended precision; keep the iterate only if it improves.
    for (auto& r : roots) {
        lcplx z = r;
        long double best = std::abs(horner<long double>(coeffs, z).first);
        for (int it = 0; it < 8 && best > 0; ++it) {
            const auto [p, dp] = horner<long double>(coeffs, z);
            if (std::abs(dp) == 0.0L) break;
            const lcplx next = z - p / dp;
            const long double res = std::abs(horner<long double>(coeffs, next).first);
            if (!(res < best)) break;
            z = next;
            best = res;
        }
        r = cplx(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    return roots;
}

std::string join_offsets(const StencilParams& p) { return p.to_string(';'); }

DiagnosticsRow make_row(const std::string& family, const StencilParams& params) {
    const auto d = diagnose(make_stencil(params));
    return DiagnosticsRow{family,  params.k(),
                          params,  d.ratio,
                          d.max_nonunit_root_mag, d.convergence_condition_ok,
                          d.root_condition_ok};
}

}  // namespace

AlphaSequence compute_alphas(const Stencil& stencil) {
    const auto nodes = stencil.params().nodes();
    const int ak = stencil.max_offset();
    AlphaSequence out;
    out.c.assign(static_cast<std::size_t>(ak) + 1, 0.0);
    for (std::size_t l = 0; l < nodes.size(); ++l) {
        out.c[static_cast<std::size_t>(nodes[l])] = stencil.gamma()[l];
    }
    out.alpha.assign(static_cast<std::size_t>(ak), 0.0);
    double tail = 0.0;
    for (int j = ak; j >= 1; --j) {
        tail += out.c[static_cast<std::size_t>(j)];
        out.alpha[static_cast<std::size_t>(j - 1)] = tail;
    }
    return out;
}

double convergence_ratio(const AlphaSequence& alphas) {
    if (alphas.alpha.empty()) {
        throw DegenerateStencilError("convergence_ratio: empty alpha sequence");
    }
    const double a1 = std::abs(alphas.alpha.front());
    if (a1 == 0.0) {
        throw DegenerateStencilError("convergence_ratio: alpha_1 is zero");
    }
    double tail = 0.0;
    for (std::size_t j = 1; j < alphas.alpha.size(); ++j) tail += std::abs(alphas.alpha[j]);
    return tail / a1;
}

cplx CharPolynomial::operator()(cplx z) const { return horner<double>(coeffs, z).first; }

cplx CharPolynomial::derivative(cplx z) const { return horner<double>(coeffs, z).second; }

double CharPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs) m = std::max(m, std::abs(c));
    return m;
}

CharPolynomial characteristic_polynomial(const Stencil& stencil) {
    auto c = compute_alphas(stencil).c;
    std::reverse(c.begin(), c.end());
    return CharPolynomial{std::move(c)};
}

std::vector<cplx> polynomial_roots(const CharPolynomial& p) {
    if (p.degree() < 1 || p.coeffs.back() == 0.0) {
        throw RootFindingError("polynomial_roots: need degree >= 1 with nonzero leading term");
    }
    std::vector<cplx> roots{cplx(1.0, 0.0)};
    const auto rest = companion_roots(deflate_unit_root(p.coeffs));
    roots.insert(roots.end(), rest.begin(), rest.end());

    const double bound = kResidualTol * p.max_abs_coeff();
    for (const auto& r : roots) {
        if (!(std::abs(p(r)) <= bound)) {
            std::ostringstream msg;
            msg << "polynomial_roots: residual " << std::abs(p(r)) << " at root " << r
                << " exceeds " << bound;
            throw RootFindingError(msg.str());
        }
    }
    return roots;
}

SchemeDiagnostics diagnose(const Stencil& stencil) {
    SchemeDiagnostics d{stencil, compute_alphas(stencil), characteristic_polynomial(stencil),
                        0.0,     {},                     0.0,
                        false,   false};
    d.ratio = convergence_ratio(d.alphas);
    d.convergence_condition_ok = d.ratio < 1.0;
    d.roots = polynomial_roots(d.polynomial);

    const double scale = d.polynomial.max_abs_coeff();
    d.root_condition_ok = true;
    for (const auto& r : d.roots) {
        const double mag = std::abs(r);
        if (std::abs(r - 1.0) > kUnitTol) {
            d.max_nonunit_root_mag = std::max(d.max_nonunit_root_mag, mag);
        }
        if (mag > 1.0 + kUnitTol) {
            d.root_condition_ok = false;
        } else if (mag >= 1.0 - kUnitTol &&
                   !(std::abs(d.polynomial.derivative(r)) > kSimpleRootTol * scale)) {
            d.root_condition_ok = false;
        }
    }
    return d;
}

std::string to_string(StencilFamily family) {
    switch (family) {
        case StencilFamily::Equidistant: return "equidistant";
        case StencilFamily::Quadratic: return "quadratic";
        case StencilFamily::Explicit: return "explicit";
    }
    return "unknown";
}

std::optional<StencilFamily> parse_family(const std::string& name) {
    if (name == "equidistant") return StencilFamily::Equidistant;
    if (name == "quadratic") return StencilFamily::Quadratic;
    if (name == "explicit") return StencilFamily::Explicit;
    return std::nullopt;
}

StencilParams family_params(StencilFamily family, int k) {
    switch (family) {
        case StencilFamily::Equidistant: return StencilParams::equidistant(k);
        case StencilFamily::Quadratic: return StencilParams::quadratic(k);
        case StencilFamily::Explicit: break;
    }
    throw StencilError("explicit stencil families carry their own parameter lists");
}

std::vector<DiagnosticsRow> diagnostics_table(StencilFamily family, int k_min, int k_max) {
    std::vector<DiagnosticsRow> rows;
    for (int k = k_min; k <= k_max; ++k) {
        rows.push_back(make_row(to_string(family), family_params(family, k)));
    }
    return rows;
}

std::vector<DiagnosticsRow> diagnostics_table(const std::vector<StencilParams>& explicit_params) {
    std::vector<DiagnosticsRow> rows;
    rows.reserve(explicit_params.size());
    for (const auto& p : explicit_params) {
        rows.push_back(make_row(to_string(StencilFamily::Explicit), p));
    }
    return rows;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
    os << kDiagnosticsCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.family << ',' << r.k << ',' << join_offsets(r.params) << ','
           << format_roundtrip(r.ratio) << ',' << format_roundtrip(r.max_root) << ','
           << (r.convergence_ok ? "true" : "false") << ',' << (r.root_ok ? "true" : "false")
           << '\n';
    }
}

void write_diagnostics_text(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
    std::size_t params_width = 6;
    for (const auto& r : rows) params_width = std::max(params_width, join_offsets(r.params).size());
    os << std::left << std::setw(12) << "family" << std::right << std::setw(4) << "k" << "  "
       << std::left << std::setw(static_cast<int>(params_width)) << "params" << std::right
       << std::setw(12) << "ratio" << std::setw(12) << "max_root" << std::setw(13)
       << "convergence" << std::setw(8) << "roots" << '\n';
    for (const auto& r : rows) {
        os << std::left << std::setw(12) << r.family << std::right << std::setw(4) << r.k << "  "
           << std::left << std::setw(static_cast<int>(params_width)) << join_offsets(r.params)
           << std::right << std::setw(12) << format_sig(r.ratio) << std::setw(12)
           << format_sig(r.max_root) << std::setw(13) << (r.convergence_ok ? "PASS" : "FAIL")
           << std::setw(8) << (r.root_ok ? "PASS" : "FAIL") << '\n';
    }
}

}  // namespace msbsde
