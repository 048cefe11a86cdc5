#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qwcage/caging.hpp"
#include "qwcage/spectrum.hpp"

namespace qwcage {

using Json = nlohmann::ordered_json;

/// "%.12g" with -0 normalized to 0; the one float format used in CSV output.
std::string fmt_num(double x);

/// Writes via a temporary file and an atomic rename; no partial outputs.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string butterfly_csv(const Butterfly& butterfly);

/// Minimal scatter plot; points are (x, y), downsampled to max_points.
std::string svg_scatter(const std::vector<std::pair<double, double>>& points,
                        double x_lo, double x_hi, double y_lo, double y_hi,
                        double radius = 1.0, int max_points = 20000);

std::string butterfly_svg(const Butterfly& butterfly);

Json graph_json(const Lattice& lattice, const GaugeField& gauge);

Json cage_report_json(const Lattice& lattice, const CageReport& report);

Json basis_state_json(const BasisState& s);
Json site_json(const SiteId& s);

}  // namespace qwcage
