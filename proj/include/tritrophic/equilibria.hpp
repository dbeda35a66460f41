#pragma once

#include "tritrophic/model.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace tritrophic {

enum class EquilibriumKind { Trivial, AphidFree, Interior };

std::string_view kind_name(EquilibriumKind kind);

struct EquilibriumReport {
    EquilibriumKind kind = EquilibriumKind::Trivial;
    State point;
    double residual = 0;  ///< max-abs of the vector field at point
    /// Grid cell in x that isolated an interior root.
    std::optional<std::pair<double, double>> bracket;
    /// Tangential root found at a local extremum of H rather than a sign change.
    bool marginal = false;
};

struct ExistenceReport {
    bool ae_gt_m = false;
    std::optional<double> x_lower;    ///< mh/(ae - m), defined iff ae > m
    std::optional<int> H_at_lower;    ///< sign of H at x_lower
    double H_at_K = 0;                ///< bK - (ln/p)(aeK/(h+K) - m)
    bool threshold_holds = false;     ///< aeK/(h+K) >= m + bKp/(ln)
};

struct InteriorSearch {
    int grid_points = 4096;
    double tol = 1e-10;
};

EquilibriumReport trivial_equilibrium();
EquilibriumReport aphid_free_equilibrium(const ModelParams& params);

/// Aphid level on the crop nullcline; DomainError outside [0, K].
double nullcline_y(const ModelParams& params, double x);

/// Predator level on the aphid nullcline; may be negative.
double nullcline_z(const ModelParams& params, double x, double y);

/// Predator-equation residual along the crop and aphid nullclines. Interior
/// equilibria are the roots of H on [mh/(ae-m), K].
double eval_H(const ModelParams& params, double x);

/// dH/dx along the nullcline curve.
double eval_H_derivative(const ModelParams& params, double x);

/// Point (x, y*(x), z*(x, y*(x))) on the nullcline curve.
State nullcline_point(const ModelParams& params, double x);

/// Root bracket [mh/(ae-m), K]; PrereqError when ae <= m.
std::pair<double, double> interior_bracket(const ModelParams& params);

/// All interior equilibria, sorted by x. PrereqError when ae <= m.
std::vector<EquilibriumReport> find_interior_equilibria(const ModelParams& params,
                                                        const InteriorSearch& search = {});

ExistenceReport existence_conditions(const ModelParams& params);

} // namespace tritrophic
