#pragma once

#include "tritrophic/model.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace tritrophic {

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 10.0;
    double t_end = 1000.0;
    State initial;
    /// Undershoot below -abs_tol raises PositivityViolation instead of only
    /// being recorded in the monitors.
    bool strict_positivity = true;
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

struct Monitors {
    std::optional<double> positivity_violated;  ///< first violation time
    std::optional<double> region_exited;        ///< first violation time
};

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    StepStats stats;
    Monitors monitors;
};

/// Dormand-Prince 5(4) with per-step error control. Every accepted step is
/// stored. The initial state must be componentwise >= 0.
Trajectory integrate(const ModelParams& params, const IntegratorConfig& cfg);

struct MonitorVerdict {
    bool ok = true;
    std::optional<double> first_violation;
};

/// Every sample componentwise > -abs_tol.
MonitorVerdict check_positivity(const Trajectory& traj, double abs_tol = 1e-10);

/// x <= K1 + tol throughout, and e x + y + z/q <= M + tol from the first time
/// it drops to M onwards.
MonitorVerdict check_boundedness(const ModelParams& params, const Trajectory& traj,
                                 const FeasibleRegion& region, double tol = 1e-6);

/// True when every sample in the final tail_fraction of the time span lies
/// within tol (max-norm) of target.
bool converged_to(const Trajectory& traj, const State& target, double tol,
                  double tail_fraction = 0.1);

/// Largest max-norm distance to target over the final tail_fraction.
double tail_distance(const Trajectory& traj, const State& target, double tail_fraction = 0.1);

} // namespace tritrophic
