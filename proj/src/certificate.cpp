#include "tritrophic/certificate.hpp"

#include "tritrophic/error.hpp"
#include "tritrophic/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace tritrophic {

void validate_config(const CertificateConfig& cfg) {
    const auto& R = cfg.region;
    if (!(cfg.eta > 0)) throw ConfigError("certificate: eta must be > 0");
    if (!(cfg.eta < R.K1)) throw ConfigError("certificate: eta must be < K1");
    if (!(cfg.eta < R.M)) throw ConfigError("certificate: eta must be < M");
    const auto& w = cfg.weights;
    if (!(w.alpha > 0 && w.beta > 0 && w.zeta > 0))
        throw ConfigError("certificate: weights must be positive");
}

CompoundBounds compute_bounds(const ModelParams& P, const CertificateConfig& cfg) {
    validate_config(cfg);
    const double eta = cfg.eta, K1 = cfg.region.K1, M = cfg.region.M;
    const double ae = P.a * P.e;

    // Shared pieces: bounds on the diagonal Jacobian entries.
    const double crop_self = P.r - 2 * P.r * eta / P.K - P.a * P.h * eta / std::pow(P.h + K1, 2);
    const double predation_relief = P.l * P.p * eta / std::pow(P.l + M, 2);
    const double predator_self = P.p * P.q * M / (P.l + M) - P.n;

    CompoundBounds N;
    N.N11 = crop_self + ae * K1 / (P.h + eta) - predation_relief - P.m;
    N.N12 = -P.p * eta / (P.l + eta);
    N.N21 = P.c * P.k * K1 / std::pow(P.k + eta, 2)
          + P.l * P.p * P.q * P.q * M / std::pow(P.l + eta, 2);
    N.N22 = crop_self + predator_self;
    N.N23 = -P.a * eta / (P.h + eta);
    N.N31 = -P.b - P.c * eta / (P.k + eta);
    N.N32 = ae * P.h * K1 / std::pow(P.h + eta, 2);
    N.N33 = ae * K1 / (P.h + K1) - predation_relief - P.m + predator_self;
    return N;
}

CaseBounds lozinskii_bound(const CompoundBounds& N, const Weights& w) {
    CaseBounds c;
    c.L1 = N.N11 + (w.alpha / w.beta) * N.N12;
    c.L2 = (w.beta / w.alpha) * N.N21 + N.N22 + (w.beta / w.zeta) * N.N23;
    c.L3 = (w.zeta / w.alpha) * N.N31 + (w.zeta / w.beta) * N.N32 + N.N33;
    c.L = std::max({c.L1, c.L2, c.L3});
    return c;
}

CertificateReport certify(const ModelParams& P, const CertificateConfig& cfg) {
    CertificateReport rep;
    rep.N = compute_bounds(P, cfg);
    rep.cases = lozinskii_bound(rep.N, cfg.weights);
    rep.persistence_ok =
        P.a * P.e * P.K / (P.h + P.K) > P.p * P.b * P.K / (P.n * P.l) + P.m;
    rep.certified = rep.cases.L < 0 && rep.persistence_ok;

    rep.N12_compat = -P.a * cfg.eta / (P.h + cfg.eta);
    CompoundBounds compat = rep.N;
    compat.N12 = rep.N12_compat;
    rep.cases_compat = lozinskii_bound(compat, cfg.weights);
    rep.N12_discrepancy = std::abs(rep.N12_compat - rep.N.N12)
                        > 1e-9 * std::max(std::abs(rep.N.N12), std::abs(rep.N12_compat));
    return rep;
}

WeightGrid WeightGrid::log_spaced(double lo, double hi, int count) {
    WeightGrid grid;
    if (count < 1 || !(lo > 0) || !(hi >= lo)) return grid;
    std::vector<double> axis(count);
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        axis[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
    }
    grid.candidates.reserve(static_cast<std::size_t>(count) * count);
    for (double alpha : axis)
        for (double beta : axis) grid.candidates.push_back(Weights{alpha, beta, 1.0});
    return grid;
}

WeightSearchResult search_weights(const ModelParams& P, double eta, const FeasibleRegion& region,
                                  const WeightGrid& grid) {
    if (grid.candidates.empty()) throw ConfigError("search_weights: empty grid");
    CertificateConfig cfg{eta, grid.candidates.front(), region};
    const CompoundBounds N = compute_bounds(P, cfg);

    WeightSearchResult best{grid.candidates.front(), lozinskii_bound(N, grid.candidates.front())};
    auto key = [](const Weights& w) { return std::tie(w.alpha, w.beta, w.zeta); };
    for (const Weights& w : grid.candidates) {
        if (!(w.alpha > 0 && w.beta > 0 && w.zeta > 0))
            throw ConfigError("search_weights: weights must be positive");
        const CaseBounds c = lozinskii_bound(N, w);
        if (c.L < best.bounds.L || (c.L == best.bounds.L && key(w) < key(best.weights)))
            best = {w, c};
    }
    return best;
}

double estimate_eta(const ModelParams& P, const State& initial, double horizon) {
    IntegratorConfig cfg;
    cfg.initial = initial;
    cfg.t_end = horizon;
    const Trajectory traj = integrate(P, cfg);
    double floor = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < 0.5 * horizon) continue;
        const State& s = traj.states[i];
        floor = std::min({floor, s.x, s.y, s.z});
    }
    return 0.9 * floor;
}

} // namespace tritrophic
