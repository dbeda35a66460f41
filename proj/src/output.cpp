#include "tritrophic/output.hpp"

#include "tritrophic/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tritrophic {

namespace {

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const State& s = traj.states[i];
        rows.push_back({format_number(traj.times[i]), format_number(s.x), format_number(s.y),
                        format_number(s.z)});
    }
    return csv_text({"t", "x", "y", "z"}, rows);
}

std::string scan_csv(const ScanResult& scan) {
    std::vector<std::vector<std::string>> rows;
    for (const ScanRow& row : scan.rows)
        for (const BranchPoint& pt : row.equilibria)
            rows.push_back({format_number(row.value), format_number(pt.point.x),
                            format_number(pt.point.y), format_number(pt.point.z),
                            std::string(verdict_name(pt.verdict)), format_number(pt.coeffs.a1),
                            format_number(pt.coeffs.a2), format_number(pt.coeffs.a3),
                            format_number(pt.coeffs.discriminant_rh)});
    return csv_text({std::string(param_name(scan.parameter)), "x", "y", "z", "verdict", "a1", "a2",
                     "a3", "g"},
                    rows);
}

std::string aphid_free_csv(const ScanResult& scan) {
    std::vector<std::vector<std::string>> rows;
    for (const ScanRow& row : scan.rows)
        rows.push_back({format_number(row.value), std::string(verdict_name(row.aphid_free_verdict)),
                        format_number(row.aphid_free_thresholds.first),
                        format_number(row.aphid_free_thresholds.second)});
    return csv_text({std::string(param_name(scan.parameter)), "verdict", "uptake", "loss"}, rows);
}

std::string events_csv(const std::vector<BifurcationEvent>& events) {
    std::vector<std::vector<std::string>> rows;
    for (const BifurcationEvent& ev : events) {
        std::vector<std::string> r = {std::string(bifurcation_name(ev.kind)),
                                      std::string(param_name(ev.parameter)),
                                      format_number(ev.critical_value), format_number(ev.location.x),
                                      format_number(ev.location.y), format_number(ev.location.z)};
        if (ev.transversality) {
            r.push_back(format_number(ev.transversality->q1));
            r.push_back(format_number(ev.transversality->q2));
            r.push_back(format_number(ev.transversality->q3));
        } else {
            r.insert(r.end(), {"", "", ""});
        }
        rows.push_back(std::move(r));
    }
    return csv_text({"kind", "parameter", "critical_value", "x", "y", "z", "q1", "q2", "q3"}, rows);
}

std::string trajectory_svg(const Trajectory& traj, const std::string& title) {
    constexpr double W = 800, H = 480, left = 70, right = 150, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;

    const double t0 = traj.times.empty() ? 0 : traj.times.front();
    const double t1 = traj.times.empty() ? 1 : std::max(traj.times.back(), t0 + 1e-12);
    double vmax = 0;
    for (const State& s : traj.states) vmax = std::max({vmax, s.x, s.y, s.z});
    if (vmax <= 0) vmax = 1;
    vmax *= 1.05;

    auto px = [&](double t) { return left + (t - t0) / (t1 - t0) * pw; };
    auto py = [&](double v) { return top + ph - std::max(v, 0.0) / vmax * ph; };

    const std::size_t n = traj.times.size();
    const std::size_t stride = std::max<std::size_t>(1, (n + 1999) / 2000);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << coord(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // Axes and ticks.
    os << "<g stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top + ph) << "\" x2=\""
       << coord(left + pw) << "\" y2=\"" << coord(top + ph) << "\"/>\n";
    os << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(left)
       << "\" y2=\"" << coord(top + ph) << "\"/>\n";
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double t = t0 + (t1 - t0) * i / 5;
        const double v = vmax * i / 5;
        os << "<line x1=\"" << coord(px(t)) << "\" y1=\"" << coord(top + ph) << "\" x2=\""
           << coord(px(t)) << "\" y2=\"" << coord(top + ph + 5) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << coord(px(t)) << "\" y=\"" << coord(top + ph + 20)
           << "\" text-anchor=\"middle\">" << short_number(t) << "</text>\n";
        os << "<line x1=\"" << coord(left - 5) << "\" y1=\"" << coord(py(v)) << "\" x2=\""
           << coord(left) << "\" y2=\"" << coord(py(v)) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << coord(left - 8) << "\" y=\"" << coord(py(v) + 4)
           << "\" text-anchor=\"end\">" << short_number(v) << "</text>\n";
    }
    os << "<text x=\"" << coord(left + pw / 2) << "\" y=\"" << coord(H - 10)
       << "\" text-anchor=\"middle\">t</text>\n";
    os << "</g>\n";

    struct Series {
        const char* name;
        const char* color;
        double State::*field;
    };
    const Series series[] = {{"x (crop)", "#2ca02c", &State::x},
                             {"y (aphid)", "#d62728", &State::y},
                             {"z (enemy)", "#1f77b4", &State::z}};
    for (const Series& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < n; i += stride)
            os << coord(px(traj.times[i])) << "," << coord(py(traj.states[i].*s.field)) << " ";
        if (n > 0 && (n - 1) % stride != 0)
            os << coord(px(traj.times[n - 1])) << "," << coord(py(traj.states[n - 1].*s.field));
        os << "\"/>\n";
    }

    os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i < 3; ++i) {
        const double y = top + 10 + 20 * i;
        os << "<line x1=\"" << coord(left + pw + 15) << "\" y1=\"" << coord(y) << "\" x2=\""
           << coord(left + pw + 40) << "\" y2=\"" << coord(y) << "\" stroke=\"" << series[i].color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << coord(left + pw + 45) << "\" y=\"" << coord(y + 4) << "\">"
           << series[i].name << "</text>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << contents;
    if (!out) throw IoError("failed writing " + path.string());
}

} // namespace tritrophic
