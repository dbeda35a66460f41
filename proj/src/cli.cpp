#include "tritrophic/cli.hpp"

#include "tritrophic/bifurcation.hpp"
#include "tritrophic/certificate.hpp"
#include "tritrophic/config.hpp"
#include "tritrophic/equilibria.hpp"
#include "tritrophic/error.hpp"
#include "tritrophic/output.hpp"
#include "tritrophic/simulate.hpp"
#include "tritrophic/stability.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tritrophic {

namespace {

struct Flags {
    std::string config;
    std::vector<std::string> sets;
    std::string out_dir;
    std::optional<double> tol;
    std::optional<int> steps;
    std::string range;
    std::string weights;
    std::optional<double> eta;
    bool search_weights = false;
};

double parse_real(std::string_view text, const std::string& flag) {
    double v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
        throw ConfigError(flag + ": '" + std::string(text) + "' is not a number");
    return v;
}

std::vector<double> split_reals(const std::string& text, char sep, const std::string& flag) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(parse_real(std::string_view(text).substr(start, pos - start), flag));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Output sink: stdout when no directory was given, files otherwise.
class Sink {
public:
    Sink(const std::string& dir, std::ostream& out) : dir_(dir), out_(out) {}

    void table(const std::string& name, const std::string& csv) {
        if (dir_.empty()) {
            out_ << "# " << name << "\n" << csv;
        } else {
            const auto path = std::filesystem::path(dir_) / name;
            write_file(path, csv);
            out_ << "wrote " << path.string() << "\n";
        }
    }

    void file_only(const std::string& name, const std::string& contents) {
        if (dir_.empty()) return;
        const auto path = std::filesystem::path(dir_) / name;
        write_file(path, contents);
        out_ << "wrote " << path.string() << "\n";
    }

    bool to_files() const { return !dir_.empty(); }
    std::ostream& stream() { return out_; }

private:
    std::string dir_;
    std::ostream& out_;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::vector<std::string> kv(const std::string& k, const std::string& v) { return {k, v}; }

RunConfig build_config(const Flags& f, const std::string& command) {
    RunConfig cfg;
    if (!f.config.empty()) {
        cfg = load_config(f.config);
    } else {
        cfg.params = base_params();
    }
    for (const auto& s : f.sets) apply_override(cfg, s);

    if (f.tol) {
        if (!(*f.tol > 0)) throw ConfigError("--tol must be positive");
        if (command == "equilibria" || command == "stability") cfg.equilibria.tol = *f.tol;
        else if (command == "simulate") cfg.simulation.rel_tol = *f.tol;
        else cfg.bifurcation.tol = *f.tol;
    }
    if (f.steps) {
        if (*f.steps < 2) throw ConfigError("--steps must be at least 2");
        cfg.bifurcation.steps = *f.steps;
    }
    if (!f.range.empty()) {
        const auto r = split_reals(f.range, ':', "--range");
        if (r.size() != 2 || !(r[0] < r[1])) throw ConfigError("--range expects lo:hi with lo < hi");
        cfg.bifurcation.range = Interval{r[0], r[1]};
    }
    if (!f.weights.empty()) {
        const auto w = split_reals(f.weights, ',', "--weights");
        if (w.size() != 3) throw ConfigError("--weights expects a,b,z");
        cfg.certificate.weights = Weights{w[0], w[1], w[2]};
    }
    if (f.eta) cfg.certificate.eta = *f.eta;
    if (f.search_weights) cfg.certificate.search_weights = true;
    return cfg;
}

InteriorSearch search_of(const RunConfig& cfg) {
    return InteriorSearch{cfg.equilibria.grid_points, cfg.equilibria.tol};
}

std::vector<EquilibriumReport> all_equilibria(const RunConfig& cfg) {
    std::vector<EquilibriumReport> eqs{trivial_equilibrium(), aphid_free_equilibrium(cfg.params)};
    const auto& P = cfg.params;
    if (P.a * P.e > P.m) {
        for (auto& e : find_interior_equilibria(P, search_of(cfg))) eqs.push_back(e);
    }
    return eqs;
}

void cmd_equilibria(const RunConfig& cfg, Sink& sink) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : all_equilibria(cfg))
        rows.push_back({std::string(kind_name(e.kind)), format_number(e.point.x),
                        format_number(e.point.y), format_number(e.point.z),
                        format_number(e.residual), yes_no(e.marginal)});
    sink.table("equilibria.csv", csv_text({"kind", "x", "y", "z", "residual", "marginal"}, rows));

    const auto ex = existence_conditions(cfg.params);
    std::vector<std::vector<std::string>> er;
    er.push_back(kv("ae_gt_m", yes_no(ex.ae_gt_m)));
    er.push_back(kv("x_lower", ex.x_lower ? format_number(*ex.x_lower) : ""));
    er.push_back(kv("H_sign_at_lower", ex.H_at_lower ? std::to_string(*ex.H_at_lower) : ""));
    er.push_back(kv("H_at_K", format_number(ex.H_at_K)));
    er.push_back(kv("threshold_holds", yes_no(ex.threshold_holds)));
    sink.table("existence.csv", csv_text({"quantity", "value"}, er));
}

void cmd_stability(const RunConfig& cfg, Sink& sink) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : all_equilibria(cfg)) {
        StabilityReport r;
        switch (e.kind) {
        case EquilibriumKind::Trivial: r = classify_E0(cfg.params); break;
        case EquilibriumKind::AphidFree: r = classify_E1(cfg.params); break;
        case EquilibriumKind::Interior: r = classify_interior(cfg.params, e); break;
        }
        std::vector<std::string> row = {std::string(kind_name(e.kind)), format_number(e.point.x),
                                        format_number(e.point.y), format_number(e.point.z),
                                        format_number(r.coeffs.a1), format_number(r.coeffs.a2),
                                        format_number(r.coeffs.a3),
                                        format_number(r.coeffs.discriminant_rh),
                                        std::string(verdict_name(r.verdict)), r.criterion};
        for (const auto& lam : r.eigenvalues) {
            row.push_back(format_number(lam.real()));
            row.push_back(format_number(lam.imag()));
        }
        rows.push_back(std::move(row));
    }
    sink.table("stability.csv",
               csv_text({"kind", "x", "y", "z", "a1", "a2", "a3", "g", "verdict", "criterion",
                         "re1", "im1", "re2", "im2", "re3", "im3"},
                        rows));
}

void cmd_certify(const RunConfig& cfg, Sink& sink) {
    const auto& P = cfg.params;
    const auto& o = cfg.certificate;
    const FeasibleRegion region = feasible_region(P, o.x0.value_or(P.K));

    Weights w = o.weights;
    if (o.search_weights) {
        if (!(o.grid_lo > 0 && o.grid_lo < o.grid_hi) || o.grid_count < 2)
            throw ConfigError("certificate weight grid needs 0 < grid_lo < grid_hi and grid_count >= 2");
        validate_config(CertificateConfig{o.eta, w, region});
        w = search_weights(P, o.eta, region, WeightGrid::log_spaced(o.grid_lo, o.grid_hi, o.grid_count))
                .weights;
    }
    const CertificateConfig cc{o.eta, w, region};
    const CertificateReport rep = certify(P, cc);

    const double uptake = P.a * P.e * P.K / (P.h + P.K);
    const double loss = P.p * P.b * P.K / (P.n * P.l) + P.m;

    std::vector<std::vector<std::string>> rows;
    auto add = [&](const std::string& k, double v) { rows.push_back(kv(k, format_number(v))); };
    add("eta", o.eta);
    add("alpha", w.alpha);
    add("beta", w.beta);
    add("zeta", w.zeta);
    add("K1", region.K1);
    add("M", region.M);
    add("N11", rep.N.N11);
    add("N12", rep.N.N12);
    add("N21", rep.N.N21);
    add("N22", rep.N.N22);
    add("N23", rep.N.N23);
    add("N31", rep.N.N31);
    add("N32", rep.N.N32);
    add("N33", rep.N.N33);
    add("L1", rep.cases.L1);
    add("L2", rep.cases.L2);
    add("L3", rep.cases.L3);
    add("L", rep.cases.L);
    add("N12_compat", rep.N12_compat);
    add("L1_compat", rep.cases_compat.L1);
    add("L2_compat", rep.cases_compat.L2);
    add("L3_compat", rep.cases_compat.L3);
    add("L_compat", rep.cases_compat.L);
    rows.push_back(kv("N12_discrepancy", yes_no(rep.N12_discrepancy)));
    add("persistence_uptake", uptake);
    add("persistence_loss", loss);
    rows.push_back(kv("persistence_ok", yes_no(rep.persistence_ok)));
    rows.push_back(kv("certified", yes_no(rep.certified)));
    sink.table("certificate.csv", csv_text({"quantity", "value"}, rows));
}

ContinuationOptions continuation_of(const RunConfig& cfg) {
    return ContinuationOptions{search_of(cfg), cfg.bifurcation.tol};
}

void cmd_bifurcate(const RunConfig& cfg, Sink& sink) {
    const auto& b = cfg.bifurcation;
    const ScanResult scan = scan_parameter(cfg.params, b.parameter, b.range, b.steps, continuation_of(cfg));
    sink.table("scan.csv", scan_csv(scan));
    sink.table("aphid_free.csv", aphid_free_csv(scan));
    sink.table("events.csv", events_csv(scan.events));
}

void cmd_critical_values(const RunConfig& cfg, Sink& sink) {
    const auto& P = cfg.params;
    const auto opts = continuation_of(cfg);
    const BifurcationEvent fold =
        find_saddle_node(P, cfg.bifurcation.saddle_node_range, opts, Param::b);
    const BifurcationEvent hopf = find_hopf(P, cfg.bifurcation.hopf_range, opts, Param::b);

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"m_star", "transcritical", format_number(critical_m(P))});
    rows.push_back({"b_star", "transcritical", format_number(critical_b_transcritical(P))});
    rows.push_back({"b_tilde", "saddle-node", format_number(fold.critical_value)});
    rows.push_back({"b_bar", "hopf", format_number(hopf.critical_value)});
    sink.table("critical_values.csv", csv_text({"name", "kind", "value"}, rows));
}

void cmd_simulate(const RunConfig& cfg, Sink& sink) {
    const auto& s = cfg.simulation;
    IntegratorConfig ic;
    ic.rel_tol = s.rel_tol;
    ic.abs_tol = s.abs_tol;
    ic.max_step = s.max_step;
    ic.t_end = s.t_end;
    ic.initial = s.initial;
    ic.strict_positivity = true;
    if (!(s.t_end > 0) || !(s.max_step > 0) || !(s.rel_tol > 0) || !(s.abs_tol > 0))
        throw ConfigError("simulation t_end, max_step and tolerances must be positive");
    if (s.initial.x < 0 || s.initial.y < 0 || s.initial.z < 0)
        throw ConfigError("simulation initial state must be non-negative");

    const Trajectory traj = integrate(cfg.params, ic);
    sink.table("trajectory.csv", trajectory_csv(traj));
    if (s.svg) {
        char title[96];
        std::snprintf(title, sizeof title, "b = %.4g, start (%.3g, %.3g, %.3g)", cfg.params.b,
                      s.initial.x, s.initial.y, s.initial.z);
        sink.file_only("trajectory.svg", trajectory_svg(traj, title));
    }
    if (sink.to_files()) {
        const State& last = traj.states.back();
        sink.stream() << "final t=" << format_number(traj.times.back()) << " x=" << format_number(last.x)
                      << " y=" << format_number(last.y) << " z=" << format_number(last.z)
                      << " steps=" << traj.stats.accepted << "\n";
    }
}

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON parameter file");
    sub->add_option("--set", f.sets, "override, name=value or group.key=value (repeatable)")
        ->take_all()
        ->allow_extra_args(false);
    sub->add_option("--out", f.out_dir, "output directory; CSV goes to stdout when absent");
    sub->add_option("--tol", f.tol, "solver tolerance");
    sub->add_option("--steps", f.steps, "number of scan values");
    sub->add_option("--range", f.range, "scan interval lo:hi");
    sub->add_option("--weights", f.weights, "norm weights a,b,z");
    sub->add_option("--eta", f.eta, "persistence floor");
    sub->add_flag("--search-weights", f.search_weights, "minimize the bound over a weight grid");
}

} // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Crop, aphid and natural-enemy model: equilibria, stability and bifurcations"};
    app.require_subcommand(1);
    Flags f;
    const char* names[] = {"equilibria", "stability", "certify", "bifurcate", "critical-values",
                           "simulate"};
    const char* help[] = {"list equilibria with residuals and existence conditions",
                          "local stability of every equilibrium",
                          "global-stability certificate bounds",
                          "parameter scan with bifurcation events",
                          "closed-form and located critical parameter values",
                          "integrate a trajectory"};
    for (int i = 0; i < 6; ++i) add_flags(app.add_subcommand(names[i], help[i]), f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig cfg = build_config(f, command);
        Sink sink(f.out_dir, out);
        if (command == "equilibria") cmd_equilibria(cfg, sink);
        else if (command == "stability") cmd_stability(cfg, sink);
        else if (command == "certify") cmd_certify(cfg, sink);
        else if (command == "bifurcate") cmd_bifurcate(cfg, sink);
        else if (command == "critical-values") cmd_critical_values(cfg, sink);
        else cmd_simulate(cfg, sink);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "output error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace tritrophic
