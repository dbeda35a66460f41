#pragma once

#include "tritrophic/bifurcation.hpp"
#include "tritrophic/certificate.hpp"
#include "tritrophic/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace tritrophic {

struct EquilibriaOptions {
    int grid_points = 4096;
    double tol = 1e-10;
};

struct CertificateOptions {
    double eta = 0.2;
    Weights weights{4, 1, 1};
    std::optional<double> x0;  ///< initial crop level for K1; defaults to K
    bool search_weights = false;
    double grid_lo = 0.1;
    double grid_hi = 100;
    int grid_count = 50;
};

struct BifurcationOptions {
    Param parameter = Param::b;
    Interval range{0.18, 0.27};
    int steps = 200;
    Interval saddle_node_range{0.20, 0.25};
    Interval hopf_range{0.17, 0.22};
    double tol = 1e-10;
};

struct SimulationOptions {
    State initial{0.9, 0.05, 0.8};
    double t_end = 30000;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 10;
    bool svg = true;
};

/// Parameters plus per-command option groups. JSON layout:
///   { "r": 0.1, ..., "n": 0.3,
///     "equilibria": {...}, "certificate": {...},
///     "bifurcation": {...}, "simulation": {...} }
/// All 13 parameters are required; unknown keys are rejected.
struct RunConfig {
    ModelParams params;
    EquilibriaOptions equilibria;
    CertificateOptions certificate;
    BifurcationOptions bifurcation;
    SimulationOptions simulation;
};

/// Throws ParseError (with line and column), UnknownKey, or ParameterError
/// when the parameters fail validate_params().
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Applies "name=value" where name is a parameter symbol or "group.key".
/// The value is read as JSON, falling back to a bare string.
void apply_override(RunConfig& cfg, std::string_view assignment);

std::string dump_config(const RunConfig& cfg);

} // namespace tritrophic
