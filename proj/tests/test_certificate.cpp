#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "tritrophic/certificate.hpp"
#include "tritrophic/error.hpp"

using namespace tritrophic;
using namespace testing_support;

namespace {

CertificateConfig example_config(const ModelParams& P, double eta = 0.2, Weights w = {4, 1, 1}) {
    return CertificateConfig{eta, w, feasible_region(P, P.K)};
}

struct Bounded {
    int i, j;
    double CompoundBounds::*n;
};

const Bounded kBounded[] = {{0, 0, &CompoundBounds::N11}, {0, 1, &CompoundBounds::N12},
                            {1, 0, &CompoundBounds::N21}, {1, 1, &CompoundBounds::N22},
                            {1, 2, &CompoundBounds::N23}, {2, 0, &CompoundBounds::N31},
                            {2, 1, &CompoundBounds::N32}, {2, 2, &CompoundBounds::N33}};

} // namespace

TEST_CASE("bounds at b = 0.23, eta = 0.2, weights (4, 1, 1)") {
    const ModelParams P = params_with_b(0.23);
    const CompoundBounds N = compute_bounds(P, example_config(P));
    CHECK(N.N11 == doctest::Approx(0.1027).epsilon(5e-3));
    CHECK(N.N12 == doctest::Approx(-0.01 * 0.2 / 0.7).epsilon(1e-12));
    CHECK(N.N21 == doctest::Approx(1.0561).epsilon(5e-4));
    CHECK(N.N22 == doctest::Approx(-0.2395).epsilon(2e-3));
    CHECK(N.N23 == doctest::Approx(-0.0286).epsilon(5e-3));
    CHECK(N.N31 == doctest::Approx(-0.3557).epsilon(1e-3));
    CHECK(N.N32 == doctest::Approx(0.0408).epsilon(5e-3));
    CHECK(N.N33 == doctest::Approx(-0.2787).epsilon(2e-3));
}

TEST_CASE("case bounds combine entries with the weight ratios") {
    CompoundBounds N;
    N.N11 = 1, N.N12 = 2, N.N21 = 3, N.N22 = 4, N.N23 = 5, N.N31 = 6, N.N32 = 7, N.N33 = 8;
    const CaseBounds c = lozinskii_bound(N, {2, 4, 8});
    CHECK(c.L1 == doctest::Approx(1 + 0.5 * 2));
    CHECK(c.L2 == doctest::Approx(2 * 3 + 4 + 0.5 * 5));
    CHECK(c.L3 == doctest::Approx(4 * 6 + 2 * 7 + 8));
    CHECK(c.L == doctest::Approx(std::max({c.L1, c.L2, c.L3})));
}

TEST_CASE("compatibility value and discrepancy flag") {
    const ModelParams P = params_with_b(0.23);
    const CertificateReport rep = certify(P, example_config(P));
    CHECK(rep.N12_discrepancy);
    CHECK(rep.N12_compat == doctest::Approx(-P.a * 0.2 / (P.h + 0.2)));
    CHECK(rep.cases_compat.L1 == doctest::Approx(-0.0116).epsilon(2e-2));
    CHECK(rep.cases_compat.L2 == doctest::Approx(-0.0040).epsilon(2e-2));
    CHECK(rep.cases_compat.L3 == doctest::Approx(-0.3265).epsilon(2e-3));
    CHECK(rep.persistence_ok);
    // With the formula value of N12, case 1 is positive, so nothing is certified.
    CHECK(rep.cases.L1 > 0);
    CHECK_FALSE(rep.certified);
}

TEST_CASE("bounds dominate the compound entries over the persistence box") {
    const ModelParams P = params_with_b(0.23);
    const CertificateConfig cfg = example_config(P);
    const CompoundBounds N = compute_bounds(P, cfg);
    const double eta = cfg.eta, K1 = cfg.region.K1, M = cfg.region.M;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ux(eta, K1), uy(eta, M), uz(eta, P.q * M), uy_small(eta, K1);
    for (int t = 0; t < 1000; ++t) {
        const State s{ux(rng), uy(rng), uz(rng)};
        const Matrix3 C = compound_matrix(P, s);
        CHECK(C(0, 2) == 0.0);
        for (const auto& b : kBounded) {
            if (b.n == &CompoundBounds::N32) continue;  // checked separately below
            CAPTURE(b.i);
            CAPTURE(b.j);
            CHECK(C(b.i, b.j) <= N.*b.n + 1e-12);
        }
        // N32 substitutes K1 for y, so it only bounds the entry while y <= K1.
        const State s_small{s.x, uy_small(rng), s.z};
        CHECK(compound_matrix(P, s_small)(2, 1) <= N.N32 + 1e-12);
    }
}

TEST_CASE("N32 does not bound the entry once the aphid level exceeds K1") {
    const ModelParams P = params_with_b(0.23);
    const CertificateConfig cfg = example_config(P);
    const CompoundBounds N = compute_bounds(P, cfg);
    const State s{cfg.eta, 10.0, 1.0};
    CHECK(compound_matrix(P, s)(2, 1) > N.N32);
}

TEST_CASE("the bound is non-increasing in eta") {
    for (double b : {0.2, 0.23, 0.26}) {
        const ModelParams P = params_with_b(b);
        double prev = 1e300;
        for (int i = 1; i <= 60; ++i) {
            const double eta = 0.3 * i / 60.0;
            const double L = certify(P, example_config(P, eta)).cases.L;
            CHECK(L <= prev + 1e-15);
            prev = L;
        }
    }
}

TEST_CASE("uniform rescaling of the weights leaves the bound unchanged") {
    const ModelParams P = params_with_b(0.23);
    const double L = certify(P, example_config(P)).cases.L;
    for (double s : {0.01, 0.5, 3.0, 1e4}) {
        const double Ls = certify(P, example_config(P, 0.2, {4 * s, s, s})).cases.L;
        CHECK(Ls == doctest::Approx(L).epsilon(1e-12));
    }
}

TEST_CASE("weight search never does worse than a grid member") {
    const ModelParams P = params_with_b(0.23);
    const auto region = feasible_region(P, P.K);
    const WeightGrid grid = WeightGrid::log_spaced(0.25, 16, 7);
    CHECK(grid.candidates.size() == 49);
    const double L411 = certify(P, example_config(P)).cases.L;
    const auto best = search_weights(P, 0.2, region, grid);
    CHECK(best.bounds.L <= L411 + 1e-12);
    for (const auto& w : grid.candidates) {
        CHECK(w.zeta == 1.0);
        CHECK(best.bounds.L <= certify(P, example_config(P, 0.2, w)).cases.L + 1e-15);
    }
    // Deterministic
    const auto again = search_weights(P, 0.2, region, grid);
    CHECK(again.weights == best.weights);
}

TEST_CASE("configuration checks") {
    const ModelParams P = params_with_b(0.23);
    CHECK_THROWS_AS(validate_config(example_config(P, 0.0)), ConfigError);
    CHECK_THROWS_AS(validate_config(example_config(P, 1.0)), ConfigError);
    CHECK_THROWS_AS(validate_config(example_config(P, 0.2, {0, 1, 1})), ConfigError);
    CHECK_THROWS_AS(certify(P, example_config(P, 1.5)), ConfigError);
    CHECK_NOTHROW(validate_config(example_config(P)));
}

TEST_CASE("empirical persistence floor") {
    const ModelParams P = params_with_b(0.23);
    const double eta = estimate_eta(P, {0.5, 0.3, 0.2}, 20000);
    CHECK(eta > 0);
    CHECK(eta < 0.2664 * 0.95);
}
