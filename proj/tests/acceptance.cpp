// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include "tritrophic/bifurcation.hpp"
#include "tritrophic/certificate.hpp"
#include "tritrophic/equilibria.hpp"
#include "tritrophic/simulate.hpp"
#include "tritrophic/stability.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace tritrophic;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream notes;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes << " [failed: " << what << "]";
        }
    }
    void near(double got, double want, double tol, const std::string& what) {
        const bool cond = std::abs(got - want) <= tol;
        if (!cond) {
            ok = false;
            notes << " [failed: " << what << " = " << got << ", expected " << want << " +/- " << tol << "]";
        }
    }
    void rel(double got, double want, double rtol, const std::string& what) {
        near(got, want, rtol * std::abs(want), what);
    }
};

ModelParams at_b(double b) { return with_param(base_params(), Param::b, b); }

int failures = 0;

void criterion(int id, double time_limit, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.notes << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > time_limit) {
        c.ok = false;
        c.notes << " [runtime " << secs << " s over the " << time_limit << " s limit]";
    }
    if (!c.ok) ++failures;
    std::printf("%s criterion %d (%.3f s)%s\n", c.ok ? "PASS" : "FAIL", id, secs, c.notes.str().c_str());
    std::fflush(stdout);
}

const EquilibriumReport* closest(const std::vector<EquilibriumReport>& eqs, const State& s) {
    const EquilibriumReport* best = nullptr;
    double bd = 1e300;
    for (const auto& e : eqs) {
        const double d = std::max({std::abs(e.point.x - s.x), std::abs(e.point.y - s.y),
                                   std::abs(e.point.z - s.z)});
        if (d < bd) bd = d, best = &e;
    }
    return best;
}

void near_state(Check& c, const State& got, const State& want, double tol, const std::string& what) {
    c.near(got.x, want.x, tol, what + ".x");
    c.near(got.y, want.y, tol, what + ".y");
    c.near(got.z, want.z, tol, what + ".z");
}

Trajectory run(const ModelParams& P, State init, double t_end) {
    IntegratorConfig cfg;
    cfg.initial = init;
    cfg.t_end = t_end;
    return integrate(P, cfg);
}

} // namespace

int main() {
    // 1. Aphid-free thresholds and stability above the exchange value.
    criterion(1, 1.0, [](Check& c) {
        const ModelParams P = at_b(0.26);
        const StabilityReport rep = classify_E1(P);
        c.expect(rep.threshold_pair.has_value(), "threshold pair present");
        c.near(rep.threshold_pair->first, 0.0267, 5e-5, "aeK/(h+K)");
        c.near(rep.threshold_pair->second, 0.0273, 5e-5, "pbK/(nl)+m");
        c.expect(rep.verdict == Verdict::LocallyStable, "E1 locally stable");
        near_state(c, aphid_free_equilibrium(P).point, {1, 0, 0.8667}, 5e-5, "E1");
    });

    // 2. Stable interior point at b = 0.24 and its coefficients.
    criterion(2, 1.0, [](Check& c) {
        const ModelParams P = at_b(0.24);
        const auto eqs = find_interior_equilibria(P);
        const EquilibriumReport* e = closest(eqs, {0.9707, 0.0431, 0.8908});
        c.expect(e != nullptr, "an interior root exists");
        if (!e) return;
        near_state(c, e->point, {0.9707, 0.0431, 0.8908}, 5e-4, "E*");
        const CharCoeffs k = char_coeffs(jacobian(P, e->point));
        c.rel(k.a1, 0.3934, 0.02, "a1");
        c.rel(k.a2, 0.0286, 0.02, "a2");
        c.rel(k.a3, 1.16e-5, 0.02, "a3");
        c.rel(k.a1 * k.a2 - k.a3, 0.0112, 0.02, "a1a2-a3");
        c.expect(classify_interior(P, *e).verdict == Verdict::LocallyStable, "E* locally stable");
    });

    // 3. Certificate bounds at b = 0.23.
    criterion(3, 1.0, [](Check& c) {
        const ModelParams P = at_b(0.23);
        const FeasibleRegion region = feasible_region(P, P.K);
        c.near(region.K1, 1.0, 0, "K1");
        const CertificateReport r = certify(P, {0.2, {4, 1, 1}, region});
        c.near(r.N.N11, 0.1027, 5e-4, "N11");
        c.near(r.N.N21, 1.0561, 5e-4, "N21");
        c.near(r.N.N22, -0.2395, 5e-4, "N22");
        c.near(r.N.N23, -0.0286, 5e-4, "N23");
        c.near(r.N.N31, -0.3557, 5e-4, "N31");
        c.near(r.N.N32, 0.0408, 5e-4, "N32");
        c.near(r.N.N33, -0.2787, 5e-4, "N33");
        c.near(r.N12_compat, -0.0286, 5e-4, "compat N12");
        c.near(r.cases_compat.L1, -0.0116, 5e-4, "compat L1");
        c.near(r.cases_compat.L2, -0.0040, 5e-4, "compat L2");
        c.near(r.cases_compat.L3, -0.3265, 5e-4, "compat L3");
        c.near(r.N.N12, -0.0029, 5e-5, "formula N12");
        c.expect(r.N12_discrepancy, "discrepancy flagged");
        c.near(P.p * P.b * P.K / (P.n * P.l) + P.m, 0.0253, 5e-5, "persistence threshold");
        c.expect(r.persistence_ok, "persistence holds");
    });

    // 4. Transcritical exchange in m.
    criterion(4, 10.0, [](Check& c) {
        const ModelParams P = at_b(0.26);
        const double ms = critical_m(P);
        c.near(ms, 0.00933, 5e-6, "m*");
        const ScanResult scan = scan_parameter(P, Param::m, {0.005, 0.015}, 200);
        int n = 0;
        for (const auto& ev : scan.events) {
            if (ev.kind != BifurcationKind::Transcritical) continue;
            ++n;
            c.near(ev.critical_value, ms, 1e-6, "scan transcritical m");
        }
        c.expect(n == 1, "exactly one transcritical event (found " + std::to_string(n) + ")");
        const TransversalityReport t = transversality_transcritical(with_param(P, Param::m, ms), Param::m);
        c.expect(t.q2 == -1.0, "q2 == -1");
    });

    // 5. Transcritical exchange in b.
    criterion(5, 1.0, [](Check& c) {
        const double bs = critical_b_transcritical(base_params());
        c.near(bs, 0.25, 1e-12, "b*");
        const ModelParams P = at_b(0.25);
        c.near(eval_H(P, P.K), 0.0, 1e-12, "H(K) at b = 0.25");
        const TransversalityReport t = transversality_transcritical(at_b(bs), Param::b);
        c.rel(t.q2, -P.p * P.K / (P.n * P.l), 1e-9, "q2");
        c.rel(t.q2, -1.0 / 15, 1e-9, "q2 = -1/15");
    });

    // 6. Two high-crop equilibria at b = 0.24 and the fold.
    criterion(6, 30.0, [](Check& c) {
        const ModelParams P = at_b(0.24);
        const auto eqs = find_interior_equilibria(P);
        if (eqs.size() != 2) {
            std::ostringstream os;
            os << "exactly two interior equilibria (found " << eqs.size() << " at x =";
            for (const auto& e : eqs) os << " " << e.point.x;
            os << ")";
            c.expect(false, os.str());
        }
        const EquilibriumReport* s = closest(eqs, {0.9707, 0.0431, 0.8908});
        const EquilibriumReport* u = closest(eqs, {0.8852, 0.1591, 1.0256});
        c.expect(s && u && s != u, "both listed points located");
        if (s && u && s != u) {
            near_state(c, s->point, {0.9707, 0.0431, 0.8908}, 5e-4, "stable point");
            near_state(c, u->point, {0.8852, 0.1591, 1.0256}, 5e-4, "unstable point");
            c.expect(classify_interior(P, *s).verdict == Verdict::LocallyStable, "first point stable");
            c.expect(classify_interior(P, *u).verdict == Verdict::Unstable, "second point unstable");
        }
        const BifurcationEvent fold = find_saddle_node(base_params(), {0.20, 0.25});
        c.near(fold.critical_value, 0.23574214, 1e-6, "saddle-node b");
    });

    // 7. Hopf point.
    criterion(7, 30.0, [](Check& c) {
        const BifurcationEvent h = find_hopf(base_params(), {0.17, 0.22});
        c.near(h.critical_value, 0.1906989, 1e-5, "Hopf b");
        const ModelParams P = at_b(h.critical_value);
        const auto lam = eigenvalues_cubic(char_coeffs(jacobian(P, h.location)));
        bool pair = false;
        for (const auto& z : lam)
            if (z.imag() > 0) pair = std::abs(z.real()) <= 1e-6;
        c.expect(pair, "conjugate pair with |Re| <= 1e-6");
        auto verdict_near = [&](double b) {
            const ModelParams Pb = at_b(b);
            const auto eqs = find_interior_equilibria(Pb);
            const EquilibriumReport* e = closest(eqs, h.location);
            return e ? classify_interior(Pb, *e).verdict : Verdict::Marginal;
        };
        c.expect(verdict_near(h.critical_value + 1e-4) == Verdict::LocallyStable, "stable above");
        c.expect(verdict_near(h.critical_value - 1e-4) == Verdict::Unstable, "unstable below");
    });

    // 8. Ordering of the critical values.
    criterion(8, 30.0, [](Check& c) {
        const ModelParams P = base_params();
        const Interval range{0.18, 0.27};
        const double hopf = find_hopf(P, {0.17, 0.22}).critical_value;
        const double fold = find_saddle_node(P, {0.20, 0.25}).critical_value;
        const double tc = critical_b_transcritical(P);
        c.expect(hopf < fold && fold < tc && tc < range.hi, "b_bar < b_tilde < b* < range max");
        const ScanResult scan = scan_parameter(P, Param::b, range, 200);
        c.expect(scan.events.size() == 3 && scan.events[0].kind == BifurcationKind::Hopf &&
                     scan.events[1].kind == BifurcationKind::SaddleNode &&
                     scan.events[2].kind == BifurcationKind::Transcritical,
                 "scan reports Hopf, saddle-node, transcritical in increasing b");
    });

    // 9. Property suite with independent oracles.
    criterion(9, 60.0, [](Check& c) {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> ux(1e-3, 1.2), uy(1e-3, 1.0), uz(1e-3, 2.0);
        const ModelParams P = at_b(0.23);
        int jac_bad = 0, cmp_bad = 0;
        for (int t = 0; t < 100; ++t) {
            const State s{ux(rng), uy(rng), uz(rng)};
            const Matrix3 J = jacobian(P, s);
            for (int j = 0; j < 3; ++j) {
                Vec3 up = to_vec(s), dn = to_vec(s);
                const double h = 1e-6 * std::max(1.0, std::abs(up[j]));
                up[j] += h;
                dn[j] -= h;
                const Vec3 fu = vector_field(P, to_state(up)), fd = vector_field(P, to_state(dn));
                for (int i = 0; i < 3; ++i) {
                    const double fdv = (fu[i] - fd[i]) / (2 * h);
                    if (std::abs(J(i, j) - fdv) > 1e-5 * std::max(1.0, std::abs(fdv))) ++jac_bad;
                }
            }
            Eigen::Matrix3d A, C;
            const Matrix3 M = compound_matrix(P, s);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) A(i, j) = J(i, j), C(i, j) = M(i, j);
            const Eigen::Vector3cd l = Eigen::EigenSolver<Eigen::Matrix3d>(A, false).eigenvalues();
            const Eigen::Vector3cd mu = Eigen::EigenSolver<Eigen::Matrix3d>(C, false).eigenvalues();
            const std::complex<double> sums[3] = {l(0) + l(1), l(0) + l(2), l(1) + l(2)};
            bool used[3] = {false, false, false};
            for (int k = 0; k < 3; ++k) {
                int arg = -1;
                double best = 1e300;
                for (int q = 0; q < 3; ++q)
                    if (!used[q] && std::abs(mu(k) - sums[q]) < best) best = std::abs(mu(k) - sums[q]), arg = q;
                used[arg] = true;
                if (best > 1e-8) ++cmp_bad;
            }
        }
        c.expect(jac_bad == 0, std::to_string(jac_bad) + " Jacobian entries off finite differences");
        c.expect(cmp_bad == 0, std::to_string(cmp_bad) + " compound eigenvalues off pairwise sums");

        std::uniform_real_distribution<double> uc(-1, 1);
        int rh_bad = 0, tested = 0;
        while (tested < 200) {
            const double a1 = uc(rng), a2 = uc(rng), a3 = uc(rng);
            const CharCoeffs k{a1, a2, a3, a1 * a2 - a3};
            if (std::min({std::abs(a1), std::abs(a2), std::abs(a3), std::abs(k.discriminant_rh)}) < 1e-6)
                continue;
            Eigen::Matrix3d comp;
            comp << -a1, -a2, -a3, 1, 0, 0, 0, 1, 0;
            const Eigen::Vector3cd r = Eigen::EigenSolver<Eigen::Matrix3d>(comp, false).eigenvalues();
            const double max_re = std::max({r(0).real(), r(1).real(), r(2).real()});
            if (std::abs(max_re) < 1e-6) continue;
            ++tested;
            if ((routh_hurwitz(k) == Verdict::LocallyStable) != (max_re < 0)) ++rh_bad;
        }
        c.expect(rh_bad == 0, std::to_string(rh_bad) + " Routh-Hurwitz disagreements");

        int mon_bad = 0;
        std::uniform_real_distribution<double> s01(1e-3, 1.0), s02(1e-3, 2.0);
        for (double b : {0.18, 0.23, 0.26}) {
            const ModelParams Pb = at_b(b);
            for (int i = 0; i < 20; ++i) {
                const State init{s01(rng), s01(rng), s02(rng)};
                const Trajectory tr = run(Pb, init, 5000);
                if (!check_positivity(tr).ok || !check_boundedness(Pb, tr, feasible_region(Pb, init.x)).ok)
                    ++mon_bad;
            }
        }
        c.expect(mon_bad == 0, std::to_string(mon_bad) + " trajectories failed the monitors");
    });

    // 10. Attractors from the shipped starts.
    criterion(10, 60.0, [](Check& c) {
        {
            const ModelParams P = at_b(0.26);
            const Trajectory tr = run(P, {0.9, 0.05, 0.8}, 30000);
            c.expect(converged_to(tr, aphid_free_equilibrium(P).point, 1e-3), "b=0.26 reaches E1");
        }
        {
            const ModelParams P = at_b(0.24);
            const auto eqs = find_interior_equilibria(P);
            const EquilibriumReport* e = closest(eqs, {0.9707, 0.0431, 0.8908});
            const Trajectory tr = run(P, {0.95, 0.05, 0.9}, 30000);
            c.expect(e && converged_to(tr, e->point, 1e-3), "b=0.24 reaches the stable interior point");
        }
        {
            const ModelParams P = at_b(0.23);
            const auto eqs = find_interior_equilibria(P);
            c.expect(eqs.size() == 1, "single interior point at b=0.23");
            std::mt19937_64 rng(7);
            std::uniform_real_distribution<double> u(0.05, 1.0);
            for (int i = 0; i < 5 && !eqs.empty(); ++i) {
                const State init{u(rng), u(rng), u(rng)};
                const Trajectory tr = run(P, init, 40000);
                c.expect(converged_to(tr, eqs[0].point, 1e-3),
                         "b=0.23 random start " + std::to_string(i) + " reaches E*");
            }
        }
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
