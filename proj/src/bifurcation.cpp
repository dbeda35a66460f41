#include "tritrophic/bifurcation.hpp"

#include "tritrophic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tritrophic {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 row(const Matrix3& A, int i) { return {A(i, 0), A(i, 1), A(i, 2)}; }

// Null vector of a rank-2 matrix: the best-conditioned cross product of two rows.
Vec3 null_vector(const Matrix3& A) {
    Vec3 best{};
    double best_norm = -1;
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        const Vec3 c = cross(row(A, i), row(A, j));
        if (norm(c) > best_norm) {
            best_norm = norm(c);
            best = c;
        }
    }
    return best;
}

Vec3 normalize_on(Vec3 v, int component) {
    const double s = std::abs(v[component]) > 1e-12 * norm(v) ? v[component] : norm(v);
    for (double& x : v) x /= s;
    return v;
}

int sign_of(double v) { return (v > 0) - (v < 0); }

void require_m_or_b(Param which) {
    if (which != Param::m && which != Param::b)
        throw std::invalid_argument("bifurcation parameter must be m or b");
}

std::vector<EquilibriumReport> interior_roots(const ModelParams& P, const InteriorSearch& s) {
    if (!(P.a * P.e > P.m)) return {};
    return find_interior_equilibria(P, s);
}

int transversal_count(const std::vector<EquilibriumReport>& roots) {
    return static_cast<int>(std::count_if(roots.begin(), roots.end(),
                                          [](const EquilibriumReport& r) { return !r.marginal; }));
}

double aphid_free_middle_eigenvalue(const ModelParams& P) {
    return P.a * P.e * P.K / (P.h + P.K) - P.p * P.b * P.K / (P.n * P.l) - P.m;
}

double grid_spacing(const ModelParams& P, const InteriorSearch& s) {
    if (!(P.a * P.e > P.m)) return P.K / s.grid_points;
    const auto [lo, hi] = interior_bracket(P);
    return std::abs(hi - lo) / std::max(s.grid_points - 1, 1);
}

// Root of dH/dx inside [lo, hi]; nullopt when dH/dx does not change sign there.
std::optional<double> extremum_of_H(const ModelParams& P, double lo, double hi) {
    const double f_lo = eval_H_derivative(P, lo);
    const double f_hi = eval_H_derivative(P, hi);
    if (sign_of(f_lo) * sign_of(f_hi) > 0) return std::nullopt;
    if (f_lo == 0) return lo;
    if (f_hi == 0) return hi;
    int s_lo = sign_of(f_lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f = eval_H_derivative(P, mid);
        if (f == 0) return mid;
        if (sign_of(f) == s_lo) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::string range_text(Interval r) {
    std::ostringstream os;
    os.precision(10);
    os << "[" << r.lo << ", " << r.hi << "]";
    return os.str();
}

struct TrackedPoint {
    double mu = 0;
    State point;
    CharCoeffs coeffs;
};

// Interior root of P nearest to x_target, if one lies within limit.
std::optional<State> nearest_root(const ModelParams& P, double x_target, double limit,
                                  const InteriorSearch& search) {
    std::optional<State> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& r : interior_roots(P, search)) {
        const double d = std::abs(r.point.x - x_target);
        if (d < best_d) {
            best_d = d;
            best = r.point;
        }
    }
    if (best && best_d <= limit) return best;
    return std::nullopt;
}

TrackedPoint track_point(const ModelParams& P, Param which, double mu, double x_target,
                         double limit, const InteriorSearch& search) {
    const ModelParams Q = with_param(P, which, mu);
    const auto s = nearest_root(Q, x_target, limit, search);
    if (!s) {
        std::ostringstream os;
        os.precision(10);
        os << "equilibrium branch lost at " << param_name(which) << " = " << mu;
        throw BranchLost(os.str());
    }
    return TrackedPoint{mu, *s, char_coeffs(jacobian(Q, *s))};
}

} // namespace

std::string_view bifurcation_name(BifurcationKind kind) {
    switch (kind) {
    case BifurcationKind::Transcritical: return "transcritical";
    case BifurcationKind::SaddleNode: return "saddle-node";
    case BifurcationKind::Hopf: return "hopf";
    }
    return "?";
}

double critical_m(const ModelParams& P) {
    return P.a * P.e * P.K / (P.h + P.K) - P.p * P.b * P.K / (P.n * P.l);
}

double critical_b_transcritical(const ModelParams& P) {
    return (P.a * P.e * P.K / (P.h + P.K) - P.m) * P.n * P.l / (P.p * P.K);
}

TransversalityReport transversality_transcritical(const ModelParams& P, Param which) {
    require_m_or_b(which);
    if (std::abs(aphid_free_middle_eigenvalue(P)) > 1e-6)
        throw NotCritical("transversality_transcritical: E1 has no zero eigenvalue");

    const State e1{P.K, 0, P.b * P.K / P.n};
    const Matrix3 A = jacobian(P, e1);

    TransversalityReport rep;
    const double v1 = -P.a * P.K / (P.r * (P.h + P.K));
    const double v3 = (-P.b * P.a * P.K / (P.h + P.K) + P.r * P.c * P.K / P.k
                       + P.r * P.p * P.q * P.b * P.K / (P.n * P.l)) / (P.r * P.n);
    rep.v = {v1, 1, v3};
    rep.w = {0, 1, 0};

    // d/dmu of J(E1(mu), mu): explicit part plus the motion of E1.
    const Vec3 dE1 = which == Param::b ? Vec3{0, 0, P.K / P.n} : Vec3{0, 0, 0};
    Matrix3 dJ = jacobian_param_derivative(P, e1, which);
    for (int j = 0; j < 3; ++j) {
        Vec3 ej{};
        ej[j] = 1;
        const Vec3 col = second_differential(P, e1, ej, dE1);
        for (int i = 0; i < 3; ++i) dJ(i, j) += col[i];
    }

    rep.q1 = dot(rep.w, field_param_derivative(P, e1, which));
    rep.q2 = dot(rep.w, dJ * rep.v);
    rep.q3 = dot(rep.w, second_differential(P, e1, rep.v, rep.v));
    rep.residual_v = norm(A * rep.v) / norm(rep.v);
    rep.residual_w = norm(A.transposed() * rep.w) / norm(rep.w);
    rep.nondegenerate = rep.q2 != 0 && std::abs(rep.q3) > 1e-14;
    return rep;
}

BifurcationEvent find_saddle_node(const ModelParams& P, Interval range,
                                  const ContinuationOptions& opts, Param which) {
    require_m_or_b(which);
    const InteriorSearch& search = opts.search;
    auto count_at = [&](double mu) {
        return transversal_count(interior_roots(with_param(P, which, mu), search));
    };

    // Coarse scan for a count change of two.
    constexpr int kCoarse = 64;
    double lo = range.lo, hi = range.hi;
    int c_lo = count_at(lo), c_hi = 0;
    bool found = false;
    for (int i = 1; i <= kCoarse; ++i) {
        const double mu = range.lo + (range.hi - range.lo) * i / kCoarse;
        const int c = count_at(mu);
        if (std::abs(c - c_lo) == 2) {
            hi = mu;
            c_hi = c;
            found = true;
            break;
        }
        lo = mu;
        c_lo = c;
    }
    if (!found) throw NoFoldInRange("no saddle-node in " + range_text(range));

    // Narrow the bracket on the count alone.
    const double narrow = 1e-7 * std::max(1.0, std::abs(lo));
    while (hi - lo > narrow) {
        const double mid = 0.5 * (lo + hi);
        const int c = count_at(mid);
        if (c == c_lo) lo = mid;
        else if (c == c_hi) hi = mid;
        else break;
    }

    // On the side with more roots, the coalescing pair is the closest one.
    const bool more_at_hi = c_hi > c_lo;
    const double mu_more = more_at_hi ? hi : lo;
    std::vector<EquilibriumReport> roots = interior_roots(with_param(P, which, mu_more), search);
    std::erase_if(roots, [](const EquilibriumReport& r) { return r.marginal; });
    if (roots.size() < 2) throw NoFoldInRange("fold pair not resolved in " + range_text(range));
    std::size_t pair = 0;
    for (std::size_t j = 1; j + 1 < roots.size(); ++j)
        if (roots[j + 1].point.x - roots[j].point.x < roots[pair + 1].point.x - roots[pair].point.x)
            pair = j;
    const double xa = roots[pair].point.x, xb = roots[pair + 1].point.x;
    const double pad = (xb - xa) + grid_spacing(P, search);
    const double w_lo = std::max(xa - pad, interior_bracket(with_param(P, which, mu_more)).first);
    const double w_hi = std::min(xb + pad, P.K);

    // phi(mu): value of H at its extremum between the two roots.
    auto phi = [&](double mu) {
        const ModelParams Q = with_param(P, which, mu);
        const auto x = extremum_of_H(Q, w_lo, w_hi);
        if (!x) throw NumericError("find_saddle_node: extremum of H left the fold window");
        return std::pair{eval_H(Q, *x), *x};
    };
    double f_lo = phi(lo).first;
    for (int it = 0; it < 200 && hi - lo > opts.tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = phi(mid).first;
        if (f_mid == 0) {
            lo = hi = mid;
            break;
        }
        if (sign_of(f_mid) == sign_of(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }

    BifurcationEvent ev;
    ev.kind = BifurcationKind::SaddleNode;
    ev.parameter = which;
    ev.critical_value = 0.5 * (lo + hi);
    const ModelParams Q = with_param(P, which, ev.critical_value);
    ev.location = nullcline_point(Q, phi(ev.critical_value).second);

    const Matrix3 A = jacobian(Q, ev.location);
    ev.a3 = char_coeffs(A).a3;
    TransversalityReport tr;
    tr.v = normalize_on(null_vector(A), 2);
    tr.w = normalize_on(null_vector(A.transposed()), 2);
    tr.q1 = dot(tr.w, field_param_derivative(Q, ev.location, which));
    tr.q2 = dot(tr.w, jacobian_param_derivative(Q, ev.location, which) * tr.v);
    tr.q3 = dot(tr.w, second_differential(Q, ev.location, tr.v, tr.v));
    tr.residual_v = norm(A * tr.v) / norm(tr.v);
    tr.residual_w = norm(A.transposed() * tr.w) / norm(tr.w);
    tr.nondegenerate = tr.q1 != 0 && std::abs(tr.q3) > 1e-14;
    ev.transversality = tr;
    return ev;
}

BifurcationEvent find_hopf(const ModelParams& P, Interval range, const ContinuationOptions& opts,
                           Param which, std::optional<double> branch_x) {
    require_m_or_b(which);
    const InteriorSearch& search = opts.search;
    constexpr int kSteps = 100;

    const ModelParams P0 = with_param(P, which, range.lo);
    const auto start_roots = interior_roots(P0, search);
    if (start_roots.empty()) throw BranchLost("no interior equilibrium at " + range_text(range));
    double x_start = start_roots.front().point.x;
    if (branch_x) {
        x_start = std::min_element(start_roots.begin(), start_roots.end(),
                                   [&](const auto& l, const auto& r) {
                                       return std::abs(l.point.x - *branch_x)
                                            < std::abs(r.point.x - *branch_x);
                                   })->point.x;
    }

    const double base_limit = 1e-3 * P.K;
    std::vector<TrackedPoint> branch;
    branch.push_back(track_point(P, which, range.lo, x_start, base_limit, search));
    double last_dx = 0;
    for (int i = 1; i <= kSteps; ++i) {
        const double mu = range.lo + (range.hi - range.lo) * i / kSteps;
        const double x_pred = branch.back().point.x + last_dx;
        const double limit = std::max(10 * std::abs(last_dx), base_limit);
        branch.push_back(track_point(P, which, mu, x_pred, limit, search));
        last_dx = branch.back().point.x - branch[branch.size() - 2].point.x;
    }

    std::size_t at = branch.size();
    for (std::size_t i = 0; i + 1 < branch.size(); ++i) {
        const CharCoeffs& l = branch[i].coeffs;
        const CharCoeffs& r = branch[i + 1].coeffs;
        if (l.a1 > 0 && l.a2 > 0 && r.a1 > 0 && r.a2 > 0 &&
            sign_of(l.discriminant_rh) * sign_of(r.discriminant_rh) < 0) {
            at = i;
            break;
        }
    }
    if (at == branch.size()) throw NoHopfInRange("no Hopf point in " + range_text(range));

    TrackedPoint left = branch[at], right = branch[at + 1];
    const double limit = std::max(2 * std::abs(right.point.x - left.point.x), base_limit);
    auto at_mu = [&](double mu) {
        const double t = (mu - left.mu) / (right.mu - left.mu);
        const double x_guess = left.point.x + t * (right.point.x - left.point.x);
        return track_point(P, which, mu, x_guess, limit, search);
    };
    while (right.mu - left.mu > opts.tol) {
        const double mid = 0.5 * (left.mu + right.mu);
        if (mid <= left.mu || mid >= right.mu) break;
        const TrackedPoint m = at_mu(mid);
        if (sign_of(m.coeffs.discriminant_rh) == sign_of(left.coeffs.discriminant_rh)) left = m;
        else right = m;
    }

    BifurcationEvent ev;
    ev.kind = BifurcationKind::Hopf;
    ev.parameter = which;
    ev.critical_value = 0.5 * (left.mu + right.mu);
    const TrackedPoint c = at_mu(ev.critical_value);
    ev.location = c.point;

    const auto eig = eigenvalues_cubic(c.coeffs);
    double re = std::numeric_limits<double>::infinity();
    for (const auto& z : eig)
        if (z.imag() != 0) re = z.real();
    if (std::isfinite(re)) ev.pair_real_part = re;

    const double d = 1e-6 * std::max(1.0, std::abs(ev.critical_value));
    const double g_plus = at_mu(ev.critical_value + d).coeffs.discriminant_rh;
    const double g_minus = at_mu(ev.critical_value - d).coeffs.discriminant_rh;
    ev.crossing_speed = (g_plus - g_minus) / (2 * d);
    return ev;
}

ScanResult scan_parameter(const ModelParams& P, Param which, Interval range, int steps,
                          const ContinuationOptions& opts) {
    require_m_or_b(which);
    if (steps < 2) throw std::invalid_argument("scan_parameter: steps must be >= 2");

    ScanResult out;
    out.parameter = which;
    out.rows.reserve(steps);
    std::vector<int> counts;
    std::vector<double> middle;

    for (int i = 0; i < steps; ++i) {
        const double mu = i == steps - 1 ? range.hi : range.lo + (range.hi - range.lo) * i / (steps - 1);
        const ModelParams Q = with_param(P, which, mu);
        ScanRow row;
        row.value = mu;
        const StabilityReport e1 = classify_E1(Q);
        row.aphid_free_verdict = e1.verdict;
        row.aphid_free_thresholds = *e1.threshold_pair;
        const auto roots = interior_roots(Q, opts.search);
        for (const auto& r : roots) {
            const StabilityReport s = classify_interior(Q, r);
            row.equilibria.push_back(BranchPoint{r.point, s.verdict, s.coeffs, r.marginal});
        }
        counts.push_back(transversal_count(roots));
        middle.push_back(aphid_free_middle_eigenvalue(Q));
        out.rows.push_back(std::move(row));
    }

    for (int i = 0; i + 1 < steps; ++i) {
        const ScanRow& a = out.rows[i];
        const ScanRow& b = out.rows[i + 1];
        const Interval cell{a.value, b.value};

        if ((middle[i] > 0) != (middle[i + 1] > 0)) {
            const double mu_star = which == Param::m ? critical_m(P) : critical_b_transcritical(P);
            if (mu_star >= cell.lo && mu_star <= cell.hi) {
                const ModelParams Q = with_param(P, which, mu_star);
                BifurcationEvent ev;
                ev.kind = BifurcationKind::Transcritical;
                ev.parameter = which;
                ev.critical_value = mu_star;
                ev.location = aphid_free_equilibrium(Q).point;
                ev.transversality = transversality_transcritical(Q, which);
                out.events.push_back(ev);
            }
        }

        if (std::abs(counts[i + 1] - counts[i]) == 2) {
            try {
                out.events.push_back(find_saddle_node(P, cell, opts, which));
            } catch (const NumericError&) {
                // count change without a resolvable fold; keep scanning
            }
        }

        // Hopf candidates on branches matched by mutual nearest x.
        for (std::size_t j = 0; j < a.equilibria.size(); ++j) {
            const BranchPoint& pa = a.equilibria[j];
            auto nearest = [](const std::vector<BranchPoint>& pts, double x) {
                std::size_t best = 0;
                for (std::size_t k = 1; k < pts.size(); ++k)
                    if (std::abs(pts[k].point.x - x) < std::abs(pts[best].point.x - x)) best = k;
                return best;
            };
            if (b.equilibria.empty()) break;
            const std::size_t k = nearest(b.equilibria, pa.point.x);
            if (nearest(a.equilibria, b.equilibria[k].point.x) != j) continue;
            const CharCoeffs& ca = pa.coeffs;
            const CharCoeffs& cb = b.equilibria[k].coeffs;
            if (!(ca.a1 > 0 && ca.a2 > 0 && cb.a1 > 0 && cb.a2 > 0)) continue;
            if (sign_of(ca.discriminant_rh) * sign_of(cb.discriminant_rh) >= 0) continue;
            try {
                out.events.push_back(find_hopf(P, cell, opts, which, pa.point.x));
            } catch (const NumericError&) {
            }
        }
    }

    std::sort(out.events.begin(), out.events.end(),
              [](const BifurcationEvent& l, const BifurcationEvent& r) {
                  return l.critical_value < r.critical_value;
              });
    return out;
}

} // namespace tritrophic
