#pragma once

#include "tritrophic/bifurcation.hpp"
#include "tritrophic/simulate.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tritrophic {

/// 17 significant digits, so every double survives a text round trip.
std::string format_number(double v);

/// Header plus rows, comma separated, newline terminated.
std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

/// Columns t,x,y,z.
std::string trajectory_csv(const Trajectory& traj);

/// Columns <param>,x,y,z,verdict,a1,a2,a3,g; one row per (value, interior equilibrium).
std::string scan_csv(const ScanResult& scan);

/// Columns <param>,verdict,uptake,loss for the aphid-free point.
std::string aphid_free_csv(const ScanResult& scan);

/// Columns kind,parameter,critical_value,x,y,z,q1,q2,q3.
std::string events_csv(const std::vector<BifurcationEvent>& events);

/// Static line chart of x(t), y(t), z(t) with axes and a legend.
std::string trajectory_svg(const Trajectory& traj, const std::string& title);

/// Throws IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& contents);

} // namespace tritrophic
