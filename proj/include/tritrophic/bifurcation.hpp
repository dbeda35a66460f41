#pragma once

#include "tritrophic/equilibria.hpp"
#include "tritrophic/model.hpp"
#include "tritrophic/stability.hpp"

#include <optional>
#include <vector>

namespace tritrophic {

enum class BifurcationKind { Transcritical, SaddleNode, Hopf };

std::string_view bifurcation_name(BifurcationKind kind);

struct Interval {
    double lo = 0;
    double hi = 0;
};

/// Sotomayor quantities at a degenerate equilibrium with a simple zero
/// eigenvalue: A v = 0, A^T w = 0,
///   q1 = w . f_mu,  q2 = w . (D f_mu) v,  q3 = w . D^2 f (v, v).
struct TransversalityReport {
    Vec3 v{};
    Vec3 w{};
    double q1 = 0;
    double q2 = 0;
    double q3 = 0;
    double residual_v = 0;  ///< |A v| / |v|
    double residual_w = 0;  ///< |A^T w| / |w|
    bool nondegenerate = false;
};

struct BifurcationEvent {
    BifurcationKind kind = BifurcationKind::Transcritical;
    Param parameter = Param::b;
    double critical_value = 0;
    State location;
    std::optional<TransversalityReport> transversality;
    std::optional<double> a3;              ///< saddle-node: a3 at the fold point
    std::optional<double> crossing_speed;  ///< Hopf: dg/dmu with g = a1 a2 - a3
    std::optional<double> pair_real_part;  ///< Hopf: real part of the complex pair
};

struct BranchPoint {
    State point;
    Verdict verdict = Verdict::Marginal;
    CharCoeffs coeffs;
    bool marginal = false;
};

struct ScanRow {
    double value = 0;
    Verdict aphid_free_verdict = Verdict::Marginal;
    std::pair<double, double> aphid_free_thresholds{};
    std::vector<BranchPoint> equilibria;  ///< interior equilibria, sorted by x
};

struct ScanResult {
    Param parameter = Param::b;
    std::vector<ScanRow> rows;
    std::vector<BifurcationEvent> events;  ///< sorted by critical value
};

struct ContinuationOptions {
    InteriorSearch search;
    double tol = 1e-10;  ///< width of the final parameter bracket
};

/// m* = aeK/(h+K) - pbK/(nl).
double critical_m(const ModelParams& params);

/// b* = (aeK/(h+K) - m) nl/(pK).
double critical_b_transcritical(const ModelParams& params);

/// Transcritical quantities at E1 with the parameter already at its critical
/// value. v = (v1, 1, v3) from the closed forms, w = (0, 1, 0). Because E1
/// moves with b, q2 differentiates the Jacobian along the E1 branch.
/// Throws NotCritical when the zero eigenvalue at E1 exceeds 1e-6.
TransversalityReport transversality_transcritical(const ModelParams& params, Param which);

/// Saddle-node of interior equilibria in `range`. Located by bisection on the
/// interior-equilibrium count, then on the value of H at its local extremum
/// between the two coalescing roots. Normalization: v3 = 1, w3 = 1, so
/// q1 = w . f_b = x at the fold when the parameter is b.
BifurcationEvent find_saddle_node(const ModelParams& params, Interval range,
                                  const ContinuationOptions& opts = {}, Param which = Param::b);

/// Hopf point on an interior branch: sign change of g = a1 a2 - a3 with
/// a1, a2 > 0. The branch is the one nearest branch_x at range.lo (lowest x
/// when absent).
BifurcationEvent find_hopf(const ModelParams& params, Interval range,
                           const ContinuationOptions& opts = {}, Param which = Param::b,
                           std::optional<double> branch_x = std::nullopt);

/// Uniform parameter scan over `steps` values with event detection and
/// refinement. Supports m and b.
ScanResult scan_parameter(const ModelParams& params, Param which, Interval range, int steps,
                          const ContinuationOptions& opts = {});

} // namespace tritrophic
