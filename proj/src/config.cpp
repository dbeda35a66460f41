#include "tritrophic/config.hpp"

#include "tritrophic/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace tritrophic {

using nlohmann::json;

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ParseError("key '" + key + "': expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& key) {
    if (!j.is_number_integer()) throw ParseError("key '" + key + "': expected an integer");
    return j.get<int>();
}

bool boolean(const json& j, const std::string& key) {
    if (!j.is_boolean()) throw ParseError("key '" + key + "': expected true or false");
    return j.get<bool>();
}

std::array<double, 3> triple(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 3) throw ParseError("key '" + key + "': expected [x, y, z]");
    return {number(j[0], key), number(j[1], key), number(j[2], key)};
}

Interval interval(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2) throw ParseError("key '" + key + "': expected [lo, hi]");
    Interval r{number(j[0], key), number(j[1], key)};
    if (!(r.lo < r.hi)) throw ConfigError("key '" + key + "': need lo < hi");
    return r;
}

template <class Fn>
void for_each_known(const json& group, const std::string& name, const std::set<std::string>& known,
                    Fn&& fn) {
    if (!group.is_object()) throw ParseError("key '" + name + "': expected an object");
    for (const auto& [key, value] : group.items()) {
        const std::string full = name + "." + key;
        if (!known.count(key)) throw UnknownKey("unknown key '" + full + "'");
        fn(key, value, full);
    }
}

RunConfig from_json(const json& root) {
    if (!root.is_object()) throw ParseError("config root must be a JSON object");
    RunConfig cfg;
    std::set<std::string> seen;

    for (const auto& [key, value] : root.items()) {
        if (auto which = param_from_name(key)) {
            cfg.params = with_param(cfg.params, *which, number(value, key));
            seen.insert(key);
        } else if (key == "equilibria") {
            auto& o = cfg.equilibria;
            for_each_known(value, key, {"grid_points", "tol"},
                           [&](const std::string& k, const json& v, const std::string& full) {
                               if (k == "grid_points") o.grid_points = integer(v, full);
                               else o.tol = number(v, full);
                           });
        } else if (key == "certificate") {
            auto& o = cfg.certificate;
            for_each_known(value, key,
                           {"eta", "weights", "x0", "search_weights", "grid_lo", "grid_hi", "grid_count"},
                           [&](const std::string& k, const json& v, const std::string& full) {
                               if (k == "eta") o.eta = number(v, full);
                               else if (k == "weights") {
                                   const auto w = triple(v, full);
                                   o.weights = Weights{w[0], w[1], w[2]};
                               } else if (k == "x0") o.x0 = number(v, full);
                               else if (k == "search_weights") o.search_weights = boolean(v, full);
                               else if (k == "grid_lo") o.grid_lo = number(v, full);
                               else if (k == "grid_hi") o.grid_hi = number(v, full);
                               else o.grid_count = integer(v, full);
                           });
        } else if (key == "bifurcation") {
            auto& o = cfg.bifurcation;
            for_each_known(value, key,
                           {"parameter", "range", "steps", "saddle_node_range", "hopf_range", "tol"},
                           [&](const std::string& k, const json& v, const std::string& full) {
                               if (k == "parameter") {
                                   if (!v.is_string()) throw ParseError("key '" + full + "': expected \"m\" or \"b\"");
                                   const auto p = param_from_name(v.get<std::string>());
                                   if (!p || (*p != Param::m && *p != Param::b))
                                       throw ConfigError("key '" + full + "': expected \"m\" or \"b\"");
                                   o.parameter = *p;
                               } else if (k == "range") o.range = interval(v, full);
                               else if (k == "steps") o.steps = integer(v, full);
                               else if (k == "saddle_node_range") o.saddle_node_range = interval(v, full);
                               else if (k == "hopf_range") o.hopf_range = interval(v, full);
                               else o.tol = number(v, full);
                           });
        } else if (key == "simulation") {
            auto& o = cfg.simulation;
            for_each_known(value, key, {"initial", "t_end", "rel_tol", "abs_tol", "max_step", "svg"},
                           [&](const std::string& k, const json& v, const std::string& full) {
                               if (k == "initial") o.initial = to_state(triple(v, full));
                               else if (k == "t_end") o.t_end = number(v, full);
                               else if (k == "rel_tol") o.rel_tol = number(v, full);
                               else if (k == "abs_tol") o.abs_tol = number(v, full);
                               else if (k == "max_step") o.max_step = number(v, full);
                               else o.svg = boolean(v, full);
                           });
        } else {
            throw UnknownKey("unknown key '" + key + "'");
        }
    }
    for (Param p : kAllParams)
        if (!seen.count(std::string(param_name(p))))
            throw ParseError("missing parameter '" + std::string(param_name(p)) + "'");
    cfg.params = validate_params(cfg.params);
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json j = json::object();
    for (Param p : kAllParams) j[std::string(param_name(p))] = get_param(cfg.params, p);
    j["equilibria"] = {{"grid_points", cfg.equilibria.grid_points}, {"tol", cfg.equilibria.tol}};
    const auto& c = cfg.certificate;
    j["certificate"] = {{"eta", c.eta},
                        {"weights", {c.weights.alpha, c.weights.beta, c.weights.zeta}},
                        {"search_weights", c.search_weights},
                        {"grid_lo", c.grid_lo},
                        {"grid_hi", c.grid_hi},
                        {"grid_count", c.grid_count}};
    if (c.x0) j["certificate"]["x0"] = *c.x0;
    const auto& b = cfg.bifurcation;
    j["bifurcation"] = {{"parameter", std::string(param_name(b.parameter))},
                        {"range", {b.range.lo, b.range.hi}},
                        {"steps", b.steps},
                        {"saddle_node_range", {b.saddle_node_range.lo, b.saddle_node_range.hi}},
                        {"hopf_range", {b.hopf_range.lo, b.hopf_range.hi}},
                        {"tol", b.tol}};
    const auto& s = cfg.simulation;
    j["simulation"] = {{"initial", {s.initial.x, s.initial.y, s.initial.z}},
                       {"t_end", s.t_end},
                       {"rel_tol", s.rel_tol},
                       {"abs_tol", s.abs_tol},
                       {"max_step", s.max_step},
                       {"svg", s.svg}};
    return j;
}

} // namespace

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("config parse error at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": "
                         + e.what());
    }
    return from_json(root);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("--set expects name=value, got '" + std::string(assignment) + "'");
    const std::string name(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));

    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }

    json j = to_json(cfg);
    const auto dot = name.find('.');
    if (dot == std::string::npos) {
        if (!param_from_name(name)) throw UnknownKey("unknown key '" + name + "'");
        j[name] = value;
    } else {
        const std::string group = name.substr(0, dot);
        if (!j.contains(group) || !j[group].is_object()) throw UnknownKey("unknown key '" + name + "'");
        j[group][name.substr(dot + 1)] = value;
    }
    cfg = from_json(j);
}

std::string dump_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

} // namespace tritrophic
