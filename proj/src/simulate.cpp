#include "tritrophic/simulate.hpp"

#include "tritrophic/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tritrophic {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

Vec3 axpy(const Vec3& y, double h, std::initializer_list<std::pair<double, const Vec3*>> terms) {
    Vec3 out = y;
    for (const auto& [coef, k] : terms)
        for (int i = 0; i < 3; ++i) out[i] += h * coef * (*k)[i];
    return out;
}

bool finite(const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

std::string describe(double t, const Vec3& y) {
    std::ostringstream os;
    os.precision(10);
    os << "t=" << t << " state=(" << y[0] << ", " << y[1] << ", " << y[2] << ")";
    return os.str();
}

double weighted_sum(const ModelParams& P, const State& s) { return P.e * s.x + s.y + s.z / P.q; }

} // namespace

Trajectory integrate(const ModelParams& P, const IntegratorConfig& cfg) {
    if (!(cfg.rel_tol > 0 && cfg.abs_tol > 0)) throw ConfigError("integrate: tolerances must be > 0");
    if (!(cfg.t_end > 0)) throw ConfigError("integrate: t_end must be > 0");
    if (!(cfg.max_step > 0)) throw ConfigError("integrate: max_step must be > 0");
    const Vec3 y0 = to_vec(cfg.initial);
    if (!finite(y0)) throw NonFiniteState("integrate: " + describe(0, y0));
    if (y0[0] < 0 || y0[1] < 0 || y0[2] < 0)
        throw DomainError("integrate: initial state must be componentwise >= 0");

    const FeasibleRegion region = feasible_region(P, cfg.initial.x);
    const double region_tol = 1e-6 * (1 + region.M);

    Trajectory traj;
    traj.times.push_back(0);
    traj.states.push_back(cfg.initial);

    auto f = [&](const Vec3& y) {
        ++traj.stats.evaluations;
        return vector_field(P, to_state(y));
    };

    auto err_norm = [&](const Vec3& y, const Vec3& y_new, const Vec3& err) {
        double acc = 0;
        for (int i = 0; i < 3; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            acc += (err[i] / sc) * (err[i] / sc);
        }
        return std::sqrt(acc / 3);
    };

    double t = 0;
    Vec3 y = y0;
    Vec3 k1 = f(y);

    // Initial step from the scale of y and y'.
    double h;
    {
        double d0 = 0, d1 = 0;
        for (int i = 0; i < 3; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1 = std::max(d1, std::abs(k1[i]) / sc);
        }
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min({h, cfg.max_step, cfg.t_end});
    }

    bool below_M = weighted_sum(P, cfg.initial) <= region.M;
    double err_prev = 1e-4;

    while (t < cfg.t_end) {
        if (t + h > cfg.t_end) h = cfg.t_end - t;
        const double h_min = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < h_min) throw StepSizeUnderflow("integrate: step size underflow at " + describe(t, y));

        const Vec3 k2 = f(axpy(y, h, {{a21, &k1}}));
        const Vec3 k3 = f(axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const Vec3 k4 = f(axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec3 k5 = f(axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec3 k6 = f(axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const Vec3 y_new = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const Vec3 k7 = f(y_new);

        Vec3 err{};
        for (int i = 0; i < 3; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double en = finite(y_new) ? err_norm(y, y_new, err) : std::numeric_limits<double>::infinity();

        if (!(en <= 1.0)) {
            ++traj.stats.rejected;
            const double shrink = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.1;
            h *= shrink;
            continue;
        }

        t = (h == cfg.t_end - t) ? cfg.t_end : t + h;
        y = y_new;
        k1 = k7;
        ++traj.stats.accepted;
        if (!finite(y)) throw NonFiniteState("integrate: " + describe(t, y));

        const State s = to_state(y);
        traj.times.push_back(t);
        traj.states.push_back(s);

        if (!traj.monitors.positivity_violated &&
            (s.x < -cfg.abs_tol || s.y < -cfg.abs_tol || s.z < -cfg.abs_tol)) {
            traj.monitors.positivity_violated = t;
            if (cfg.strict_positivity)
                throw PositivityViolation("integrate: negative population at " + describe(t, y));
        }
        const double N = weighted_sum(P, s);
        if (!traj.monitors.region_exited &&
            (s.x > region.K1 + region_tol || (below_M && N > region.M + region_tol)))
            traj.monitors.region_exited = t;
        below_M = below_M || N <= region.M;

        // PI step-size controller.
        const double e_cur = std::max(en, 1e-10);
        double factor = 0.9 * std::pow(e_cur, -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
        factor = std::clamp(factor, 0.2, 5.0);
        err_prev = e_cur;
        h = std::min(h * factor, cfg.max_step);
    }
    return traj;
}

MonitorVerdict check_positivity(const Trajectory& traj, double abs_tol) {
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const State& s = traj.states[i];
        if (s.x <= -abs_tol || s.y <= -abs_tol || s.z <= -abs_tol)
            return MonitorVerdict{false, traj.times[i]};
    }
    return {};
}

MonitorVerdict check_boundedness(const ModelParams& P, const Trajectory& traj,
                                 const FeasibleRegion& region, double tol) {
    bool below_M = false;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const State& s = traj.states[i];
        const double N = weighted_sum(P, s);
        if (s.x > region.K1 + tol || (below_M && N > region.M + tol))
            return MonitorVerdict{false, traj.times[i]};
        below_M = below_M || N <= region.M;
    }
    return {};
}

double tail_distance(const Trajectory& traj, const State& target, double tail_fraction) {
    if (traj.times.empty()) return std::numeric_limits<double>::infinity();
    const double t0 = traj.times.front(), t1 = traj.times.back();
    const double start = t1 - tail_fraction * (t1 - t0);
    double worst = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < start) continue;
        const State& s = traj.states[i];
        worst = std::max({worst, std::abs(s.x - target.x), std::abs(s.y - target.y),
                          std::abs(s.z - target.z)});
    }
    return worst;
}

bool converged_to(const Trajectory& traj, const State& target, double tol, double tail_fraction) {
    return tail_distance(traj, target, tail_fraction) <= tol;
}

} // namespace tritrophic
