#include "tritrophic/equilibria.hpp"

#include "tritrophic/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace tritrophic {

namespace {

int sign_of(double v) { return (v > 0) - (v < 0); }

double max_abs(const Vec3& v) {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

void require_ae_gt_m(const ModelParams& P) {
    if (!(P.a * P.e > P.m))
        throw PrereqError("interior equilibria need ae > m");
}

void require_in_crop_range(const ModelParams& P, double x, const char* who) {
    const double slack = 1e-12 * P.K;
    if (!(x >= -slack && x <= P.K + slack))
        throw DomainError(std::string(who) + ": x outside [0, K]");
}

/// Bisection on a sign-changing bracket until the width and |f| are both
/// within tol, or until the bracket can no longer be split.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0) return lo;
    if (f_hi == 0) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        if (f_mid == 0) return mid;
        if (sign_of(f_mid) == sign_of(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        if (hi - lo <= tol && std::min(std::abs(f_lo), std::abs(f_hi)) <= tol) break;
    }
    return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

EquilibriumReport make_interior(const ModelParams& P, double x, std::pair<double, double> cell,
                                bool marginal) {
    EquilibriumReport rep;
    rep.kind = EquilibriumKind::Interior;
    rep.point = nullcline_point(P, x);
    rep.residual = max_abs(vector_field(P, rep.point));
    rep.bracket = cell;
    rep.marginal = marginal;
    return rep;
}

bool strictly_positive(const State& s) { return s.x > 0 && s.y > 0 && s.z > 0; }

} // namespace

std::string_view kind_name(EquilibriumKind kind) {
    switch (kind) {
    case EquilibriumKind::Trivial: return "E0";
    case EquilibriumKind::AphidFree: return "E1";
    case EquilibriumKind::Interior: return "interior";
    }
    return "?";
}

EquilibriumReport trivial_equilibrium() {
    return EquilibriumReport{EquilibriumKind::Trivial, State{0, 0, 0}, 0.0, std::nullopt, false};
}

EquilibriumReport aphid_free_equilibrium(const ModelParams& P) {
    EquilibriumReport rep;
    rep.kind = EquilibriumKind::AphidFree;
    rep.point = State{P.K, 0, P.b * P.K / P.n};
    rep.residual = max_abs(vector_field(P, rep.point));
    return rep;
}

double nullcline_y(const ModelParams& P, double x) {
    require_in_crop_range(P, x, "nullcline_y");
    return P.r * (1 - x / P.K) * (P.h + x) / P.a;
}

double nullcline_z(const ModelParams& P, double x, double y) {
    return (P.l + y) / P.p * (P.a * P.e * x / (P.h + x) - P.m);
}

State nullcline_point(const ModelParams& P, double x) {
    const double y = nullcline_y(P, x);
    return State{x, y, nullcline_z(P, x, y)};
}

double eval_H(const ModelParams& P, double x) {
    require_ae_gt_m(P);
    require_in_crop_range(P, x, "eval_H");
    return vector_field(P, nullcline_point(P, x))[2];
}

double eval_H_derivative(const ModelParams& P, double x) {
    require_ae_gt_m(P);
    require_in_crop_range(P, x, "eval_H_derivative");
    const State s = nullcline_point(P, x);
    const double hx = P.h + x;
    const double dy = P.r / P.a * (1 - (P.h + 2 * x) / P.K);
    const double dz = dy / P.p * (P.a * P.e * x / hx - P.m)
                    + (P.l + s.y) / P.p * P.a * P.e * P.h / (hx * hx);
    const Matrix3 J = jacobian(P, s);
    return J(2, 0) + J(2, 1) * dy + J(2, 2) * dz;
}

std::pair<double, double> interior_bracket(const ModelParams& P) {
    require_ae_gt_m(P);
    return {P.m * P.h / (P.a * P.e - P.m), P.K};
}

std::vector<EquilibriumReport> find_interior_equilibria(const ModelParams& P,
                                                        const InteriorSearch& search) {
    const auto [lo, hi] = interior_bracket(P);
    std::vector<EquilibriumReport> out;
    if (!(lo < hi)) return out;

    const int n = std::max(search.grid_points, 3);
    const double tol = search.tol;
    const double marginal_tol = std::sqrt(tol);
    const auto H = [&](double x) { return eval_H(P, x); };
    const auto dH = [&](double x) { return eval_H_derivative(P, x); };

    std::vector<double> xs(n), hs(n);
    std::vector<int> sg(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
        hs[i] = H(xs[i]);
        sg[i] = sign_of(hs[i]);
    }

    auto push = [&](double x, std::pair<double, double> cell, bool marginal) {
        EquilibriumReport rep = make_interior(P, x, cell, marginal);
        if (strictly_positive(rep.point)) out.push_back(rep);
    };

    for (int i = 0; i < n; ++i) {
        if (sg[i] == 0) {
            push(xs[i], {xs[std::max(i - 1, 0)], xs[std::min(i + 1, n - 1)]}, false);
            continue;
        }
        if (i + 1 < n && sg[i + 1] != 0 && sg[i] != sg[i + 1])
            push(bisect(H, xs[i], xs[i + 1], tol), {xs[i], xs[i + 1]}, false);
    }

    // Roots hidden inside one grid cell show up as a local minimum of |H|
    // with no sign change around it.
    for (int i = 1; i + 1 < n; ++i) {
        if (sg[i] == 0 || sg[i - 1] != sg[i] || sg[i + 1] != sg[i]) continue;
        const double a = std::abs(hs[i]);
        if (!(a <= std::abs(hs[i - 1]) && a < std::abs(hs[i + 1]))) continue;

        const double wl = xs[i - 1], wr = xs[i + 1];
        double x_ext = xs[i];
        if (sign_of(dH(wl)) * sign_of(dH(wr)) < 0) x_ext = bisect(dH, wl, wr, 0.0);
        const double h_ext = H(x_ext);
        if (sign_of(h_ext) != sg[i]) {
            push(bisect(H, wl, x_ext, tol), {wl, wr}, false);
            push(bisect(H, x_ext, wr, tol), {wl, wr}, false);
        } else if (std::abs(h_ext) <= marginal_tol) {
            push(x_ext, {wl, wr}, true);
        }
    }

    std::sort(out.begin(), out.end(),
              [](const EquilibriumReport& l, const EquilibriumReport& r) {
                  return l.point.x < r.point.x;
              });
    return out;
}

ExistenceReport existence_conditions(const ModelParams& P) {
    ExistenceReport rep;
    const double ae = P.a * P.e;
    rep.ae_gt_m = ae > P.m;
    const double uptake_at_K = ae * P.K / (P.h + P.K);
    rep.H_at_K = P.b * P.K - P.l * P.n / P.p * (uptake_at_K - P.m);
    rep.threshold_holds = rep.ae_gt_m && uptake_at_K >= P.m + P.b * P.K * P.p / (P.l * P.n);
    if (rep.ae_gt_m) {
        const double x_lower = P.m * P.h / (ae - P.m);
        rep.x_lower = x_lower;
        if (x_lower <= P.K) rep.H_at_lower = sign_of(eval_H(P, x_lower));
    }
    return rep;
}

} // namespace tritrophic
