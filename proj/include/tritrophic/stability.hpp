#pragma once

#include "tritrophic/equilibria.hpp"
#include "tritrophic/model.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>

namespace tritrophic {

/// Coefficients of lambda^3 + a1 lambda^2 + a2 lambda + a3.
struct CharCoeffs {
    double a1 = 0;
    double a2 = 0;
    double a3 = 0;
    double discriminant_rh = 0;  ///< a1 a2 - a3
};

enum class Verdict { LocallyStable, Unstable, Marginal };

std::string_view verdict_name(Verdict v);

/// Width of the band around zero in which a tested quantity counts as zero.
inline constexpr double kStabilityMargin = 1e-8;

struct StabilityReport {
    CharCoeffs coeffs;
    std::array<std::complex<double>, 3> eigenvalues{};
    Verdict verdict = Verdict::Marginal;
    /// Which test decided: "routh-hurwitz", "aphid-free-threshold" or "trivial".
    std::string criterion;
    /// For E1: (aeK/(h+K), pbK/(nl) + m).
    std::optional<std::pair<double, double>> threshold_pair;
    /// For interior points: whether the sufficient conditions
    /// A11 < 0, A22 < 0, A33 < 0, a3 > 0 hold.
    std::optional<bool> sufficient_conditions;
};

CharCoeffs char_coeffs(const Matrix3& J);

Verdict routh_hurwitz(const CharCoeffs& c, double margin = kStabilityMargin);

/// Roots of the monic cubic, complex roots as exact conjugate pairs.
/// Real roots come first, sorted ascending.
std::array<std::complex<double>, 3> eigenvalues_cubic(const CharCoeffs& c);

StabilityReport classify_E0(const ModelParams& params);
StabilityReport classify_E1(const ModelParams& params, double margin = kStabilityMargin);

/// Throws std::invalid_argument unless eq.kind is Interior.
StabilityReport classify_interior(const ModelParams& params, const EquilibriumReport& eq,
                                  double margin = kStabilityMargin);

} // namespace tritrophic
