#pragma once

// Global-stability certificate for the interior equilibrium: upper bounds on
// the entries of the second additive compound matrix over the absorbing
// region, combined through the weighted max-norm max{a|z1|, b|z2|, c|z3|}
// into a bound L on the Lozinskii measure. L < 0 together with uniform
// persistence certifies global stability.

#include "tritrophic/model.hpp"

#include <vector>

namespace tritrophic {

struct Weights {
    double alpha = 1;
    double beta = 1;
    double zeta = 1;

    friend bool operator==(const Weights&, const Weights&) = default;
};

struct CertificateConfig {
    double eta = 0;  ///< uniform-persistence floor on all three populations
    Weights weights;
    FeasibleRegion region;
};

/// Upper bounds N_ij of the compound-matrix entries M_ij (M13 is identically 0).
struct CompoundBounds {
    double N11 = 0, N12 = 0;
    double N21 = 0, N22 = 0, N23 = 0;
    double N31 = 0, N32 = 0, N33 = 0;
};

struct CaseBounds {
    double L1 = 0;  ///< N11 + (alpha/beta) N12
    double L2 = 0;  ///< (beta/alpha) N21 + N22 + (beta/zeta) N23
    double L3 = 0;  ///< (zeta/alpha) N31 + (zeta/beta) N32 + N33
    double L = 0;   ///< max of the three
};

struct CertificateReport {
    CompoundBounds N;
    CaseBounds cases;
    bool persistence_ok = false;  ///< aeK/(h+K) > pbK/(nl) + m
    bool certified = false;       ///< L < 0 and persistence_ok

    /// Alternative N12 = -a eta/(h + eta), which reproduces a widely quoted set of
    /// case bounds; the formula value -p eta/(l + eta) decides the verdict.
    double N12_compat = 0;
    CaseBounds cases_compat;
    bool N12_discrepancy = false;
};

/// Throws ConfigError if eta is not in (0, min(K1, M)) or a weight is not positive.
void validate_config(const CertificateConfig& cfg);

CompoundBounds compute_bounds(const ModelParams& params, const CertificateConfig& cfg);

CaseBounds lozinskii_bound(const CompoundBounds& N, const Weights& w);

CertificateReport certify(const ModelParams& params, const CertificateConfig& cfg);

struct WeightGrid {
    std::vector<Weights> candidates;

    /// alpha and beta on a count x count log-spaced grid over [lo, hi], zeta = 1.
    static WeightGrid log_spaced(double lo, double hi, int count);
};

struct WeightSearchResult {
    Weights weights;
    CaseBounds bounds;
};

/// Minimizes L over the grid; ties go to the lexicographically smallest triple.
WeightSearchResult search_weights(const ModelParams& params, double eta,
                                  const FeasibleRegion& region, const WeightGrid& grid);

/// Empirical persistence floor: 0.9 times the smallest coordinate seen over the
/// second half of a trajectory of length horizon started at initial.
double estimate_eta(const ModelParams& params, const State& initial, double horizon);

} // namespace tritrophic
