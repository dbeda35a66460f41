#pragma once

#include "tritrophic/model.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testing_support {

using namespace tritrophic;

inline ModelParams params_with_b(double b) { return with_param(base_params(), Param::b, b); }

/// Uniform positive states in a box that covers the absorbing region of the base set.
inline std::vector<State> random_states(int count, unsigned seed, double xmax = 1.2,
                                        double ymax = 1.0, double zmax = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(1e-3, xmax), uy(1e-3, ymax), uz(1e-3, zmax);
    std::vector<State> out;
    for (int i = 0; i < count; ++i) out.push_back({ux(rng), uy(rng), uz(rng)});
    return out;
}

/// Central-difference Jacobian of the vector field.
inline Matrix3 fd_jacobian(const ModelParams& P, const State& s, double h = 1e-6) {
    Matrix3 J;
    for (int j = 0; j < 3; ++j) {
        Vec3 up = to_vec(s), dn = to_vec(s);
        const double step = h * std::max(1.0, std::abs(up[j]));
        up[j] += step;
        dn[j] -= step;
        const Vec3 fu = vector_field(P, to_state(up));
        const Vec3 fd = vector_field(P, to_state(dn));
        for (int i = 0; i < 3; ++i) J(i, j) = (fu[i] - fd[i]) / (2 * step);
    }
    return J;
}

inline double max_abs(const Vec3& v) {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

} // namespace testing_support
