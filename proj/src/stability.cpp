#include "tritrophic/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tritrophic {

namespace {

using cplx = std::complex<double>;

double cubic_at(const CharCoeffs& c, double x) { return ((x + c.a1) * x + c.a2) * x + c.a3; }
cplx cubic_at(const CharCoeffs& c, cplx x) { return ((x + c.a1) * x + c.a2) * x + c.a3; }
cplx cubic_slope(const CharCoeffs& c, cplx x) { return (3.0 * x + 2.0 * c.a1) * x + c.a2; }

double closed_form_real_root(const CharCoeffs& c) {
    const double s = c.a1 / 3;
    const double p = c.a2 - c.a1 * c.a1 / 3;
    const double q = 2 * s * s * s - s * c.a2 + c.a3;
    const double disc = q * q / 4 + p * p * p / 27;
    double t;
    if (disc >= 0) {
        const double sq = std::sqrt(disc);
        t = std::cbrt(-q / 2 + sq) + std::cbrt(-q / 2 - sq);
    } else {
        const double rad = std::sqrt(-p / 3);
        const double arg = std::clamp(-q / (2 * rad * rad * rad), -1.0, 1.0);
        t = 2 * rad * std::cos(std::acos(arg) / 3);
    }
    return t - s;
}

// Safeguarded Newton on a sign-changing bracket of the cubic.
double polish_real_root(const CharCoeffs& c, double guess) {
    const double bound = 1 + std::max({std::abs(c.a1), std::abs(c.a2), std::abs(c.a3)});
    double lo = -bound, hi = bound;  // p(lo) < 0 < p(hi)
    double x = std::clamp(guess, lo, hi);
    for (int it = 0; it < 100; ++it) {
        const double f = cubic_at(c, x);
        if (f == 0) return x;
        if (f < 0) lo = x; else hi = x;
        const double df = (3 * x + 2 * c.a1) * x + c.a2;
        double next = df != 0 ? x - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-17 * std::max(1.0, std::abs(x))) return next;
        x = next;
    }
    return x;
}

cplx polish(const CharCoeffs& c, cplx z) {
    for (int it = 0; it < 8; ++it) {
        const cplx f = cubic_at(c, z);
        const cplx df = cubic_slope(c, z);
        if (std::abs(df) == 0) break;
        const cplx next = z - f / df;
        if (!(std::abs(cubic_at(c, next)) < std::abs(f))) break;
        z = next;
    }
    return z;
}

std::array<cplx, 2> quadratic_roots(double B, double C) {
    const double disc = B * B - 4 * C;
    if (disc >= 0) {
        const double sq = std::sqrt(disc);
        const double big = -0.5 * (B + (B >= 0 ? sq : -sq));
        if (big == 0) return {cplx(0), cplx(0)};
        return {cplx(big), cplx(C / big)};
    }
    const double re = -B / 2, im = std::sqrt(-disc) / 2;
    return {cplx(re, im), cplx(re, -im)};
}

double worst_residual(const CharCoeffs& c, const std::array<cplx, 2>& roots) {
    double worst = 0;
    for (const cplx& z : roots) {
        const double scale = 1 + std::pow(std::abs(z), 3);
        worst = std::max(worst, std::abs(cubic_at(c, z)) / scale);
    }
    return worst;
}

Verdict sign_verdict(double value, double margin) {
    if (value < -margin) return Verdict::LocallyStable;
    if (value > margin) return Verdict::Unstable;
    return Verdict::Marginal;
}

} // namespace

std::string_view verdict_name(Verdict v) {
    switch (v) {
    case Verdict::LocallyStable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Marginal: return "marginal";
    }
    return "?";
}

CharCoeffs char_coeffs(const Matrix3& J) {
    CharCoeffs c;
    c.a1 = -J.trace();
    c.a2 = (J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0)) + (J(0, 0) * J(2, 2) - J(0, 2) * J(2, 0))
         + (J(1, 1) * J(2, 2) - J(1, 2) * J(2, 1));
    c.a3 = -J.determinant();
    c.discriminant_rh = c.a1 * c.a2 - c.a3;
    return c;
}

Verdict routh_hurwitz(const CharCoeffs& c, double margin) {
    const std::array<double, 4> tested = {c.a1, c.a2, c.a3, c.discriminant_rh};
    // A clearly negative quantity already rules out stability.
    if (std::any_of(tested.begin(), tested.end(), [&](double v) { return v < -margin; }))
        return Verdict::Unstable;
    if (std::any_of(tested.begin(), tested.end(), [&](double v) { return v <= margin; }))
        return Verdict::Marginal;
    return Verdict::LocallyStable;
}

std::array<std::complex<double>, 3> eigenvalues_cubic(const CharCoeffs& c) {
    const double r = polish_real_root(c, closed_form_real_root(c));

    // Forward deflation suits small roots, backward deflation large ones;
    // keep whichever leaves the better pair.
    std::array<cplx, 2> pair = quadratic_roots(c.a1 + r, c.a2 + r * (c.a1 + r));
    if (r != 0) {
        const double C = -c.a3 / r;
        const auto alt = quadratic_roots((C - c.a2) / r, C);
        if (worst_residual(c, alt) < worst_residual(c, pair)) pair = alt;
    }

    std::array<cplx, 3> roots;
    roots[0] = cplx(r);
    if (pair[0].imag() == 0) {
        roots[1] = cplx(polish(c, pair[0]).real());
        roots[2] = cplx(polish(c, pair[1]).real());
        std::sort(roots.begin(), roots.end(),
                  [](const cplx& l, const cplx& rr) { return l.real() < rr.real(); });
    } else {
        cplx z = polish(c, pair[0]);
        if (z.imag() < 0) z = std::conj(z);
        roots[1] = z;
        roots[2] = std::conj(z);
    }
    return roots;
}

StabilityReport classify_E0(const ModelParams& P) {
    StabilityReport rep;
    rep.coeffs = char_coeffs(jacobian(P, State{0, 0, 0}));
    rep.eigenvalues = {cplx(-P.n), cplx(-P.m), cplx(P.r)};
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
              [](const cplx& l, const cplx& r) { return l.real() < r.real(); });
    rep.verdict = Verdict::Unstable;  // r > 0 is always an eigenvalue
    rep.criterion = "trivial";
    return rep;
}

StabilityReport classify_E1(const ModelParams& P, double margin) {
    const EquilibriumReport e1 = aphid_free_equilibrium(P);
    StabilityReport rep;
    rep.coeffs = char_coeffs(jacobian(P, e1.point));
    const double uptake = P.a * P.e * P.K / (P.h + P.K);
    const double loss = P.p * P.b * P.K / (P.n * P.l) + P.m;
    rep.threshold_pair = std::pair{uptake, loss};
    const double middle = uptake - P.p * P.b * P.K / (P.n * P.l) - P.m;
    rep.eigenvalues = {cplx(-P.r), cplx(middle), cplx(-P.n)};
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
              [](const cplx& l, const cplx& r) { return l.real() < r.real(); });
    rep.verdict = sign_verdict(middle, margin);
    rep.criterion = "aphid-free-threshold";
    return rep;
}

StabilityReport classify_interior(const ModelParams& P, const EquilibriumReport& eq,
                                  double margin) {
    if (eq.kind != EquilibriumKind::Interior)
        throw std::invalid_argument("classify_interior: equilibrium is not interior");
    const Matrix3 J = jacobian(P, eq.point);
    StabilityReport rep;
    rep.coeffs = char_coeffs(J);
    rep.eigenvalues = eigenvalues_cubic(rep.coeffs);
    rep.verdict = routh_hurwitz(rep.coeffs, margin);
    rep.criterion = "routh-hurwitz";
    rep.sufficient_conditions =
        J(0, 0) < 0 && J(1, 1) < 0 && J(2, 2) < 0 && rep.coeffs.a3 > 0;
    return rep;
}

} // namespace tritrophic
