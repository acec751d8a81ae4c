#pragma once

#include "msbsde/stencil.hpp"

#include <complex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace msbsde {

/// alpha_1 vanished, so the convergence ratio is undefined.
class DegenerateStencilError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The polynomial root finder failed to converge or to meet its residual bound.
class RootFindingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Weights spread over every step offset, and their tail sums.
///
/// c[j] = gamma_l when j = a_l, else 0 (j = 0..a_k).
/// alpha[j-1] = sum_{l=j}^{a_k} c[l] (j = 1..a_k).
struct AlphaSequence {
    std::vector<double> c;
    std::vector<double> alpha;

    /// alpha_j with the 1-based index used in the error analysis.
    [[nodiscard]] double alpha_at(int j) const { return alpha.at(static_cast<std::size_t>(j - 1)); }
};

AlphaSequence compute_alphas(const Stencil& stencil);

/// sum_{j>=2} |alpha_j| / |alpha_1|; zero for the one-step stencil.
double convergence_ratio(const AlphaSequence& alphas);

/// Characteristic polynomial sum_i gamma_i lambda^(a_k - a_i).
struct CharPolynomial {
    /// coeffs[d] multiplies lambda^d, d = 0..a_k (ascending powers).
    std::vector<double> coeffs;

    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    [[nodiscard]] std::complex<double> operator()(std::complex<double> z) const;
    [[nodiscard]] std::complex<double> derivative(std::complex<double> z) const;
    [[nodiscard]] double max_abs_coeff() const;
};

CharPolynomial characteristic_polynomial(const Stencil& stencil);

/// All complex roots of p. The structural root lambda = 1 is divided out
/// exactly first and returned as the first element. Every returned root
/// satisfies |p(root)| <= 1e-9 * max|coeff|.
std::vector<std::complex<double>> polynomial_roots(const CharPolynomial& p);

struct SchemeDiagnostics {
    Stencil stencil;
    AlphaSequence alphas;
    CharPolynomial polynomial;
    double ratio = 0.0;
    std::vector<std::complex<double>> roots;
    double max_nonunit_root_mag = 0.0;
    bool root_condition_ok = false;
    bool convergence_condition_ok = false;
};

SchemeDiagnostics diagnose(const Stencil& stencil);

enum class StencilFamily { Equidistant, Quadratic, Explicit };

std::string to_string(StencilFamily family);
/// Accepts "equidistant"/"quadratic"/"explicit"; nullopt otherwise.
std::optional<StencilFamily> parse_family(const std::string& name);

/// Parameters of `family` at order k. Explicit families are not generated.
StencilParams family_params(StencilFamily family, int k);

struct DiagnosticsRow {
    std::string family;
    int k = 0;
    StencilParams params;
    double ratio = 0.0;
    double max_root = 0.0;
    bool convergence_ok = false;
    bool root_ok = false;
};

/// One row per k in [k_min, k_max]; empty when k_min > k_max.
std::vector<DiagnosticsRow> diagnostics_table(StencilFamily family, int k_min, int k_max);

/// One row per entry of `explicit_params`, k taken from each entry.
std::vector<DiagnosticsRow> diagnostics_table(const std::vector<StencilParams>& explicit_params);

inline constexpr const char* kDiagnosticsCsvHeader =
    "family,k,params,ratio,max_root,convergence_ok,root_ok";

/// CSV with kDiagnosticsCsvHeader; params are ';'-separated, reals in
/// shortest round-trip form.
void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows);
/// Column-aligned text with 6 significant digits.
void write_diagnostics_text(std::ostream& os, const std::vector<DiagnosticsRow>& rows);

}  // namespace msbsde
