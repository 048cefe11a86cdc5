#include "qwcage/io.hpp"

#include <cstdio>
#include <fstream>

namespace qwcage {

std::string fmt_num(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string butterfly_csv(const Butterfly& butterfly) {
  std::string out = "f,k,epsilon\n";
  out.reserve(out.size() + butterfly.points.size() * 24);
  for (const auto& p : butterfly.points) {
    out += fmt_num(p.f);
    out += ',';
    if (p.has_k) out += fmt_num(p.k);
    out += ',';
    out += fmt_num(p.eps);
    out += '\n';
  }
  return out;
}

std::string svg_scatter(const std::vector<std::pair<double, double>>& points,
                        double x_lo, double x_hi, double y_lo, double y_hi,
                        double radius, int max_points) {
  const int w = 840, h = 600, margin = 40;
  const double sx = (w - 2 * margin) / (x_hi - x_lo);
  const double sy = (h - 2 * margin) / (y_hi - y_lo);
  const size_t stride = std::max<size_t>(1, points.size() / size_t(max_points));
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<rect x=\"" + std::to_string(margin) + "\" y=\"" + std::to_string(margin) +
         "\" width=\"" + std::to_string(w - 2 * margin) + "\" height=\"" +
         std::to_string(h - 2 * margin) + "\" fill=\"none\" stroke=\"black\"/>\n";
  char buf[96];
  for (size_t i = 0; i < points.size(); i += stride) {
    const double px = margin + (points[i].first - x_lo) * sx;
    const double py = h - margin - (points[i].second - y_lo) * sy;
    if (px < margin || px > w - margin || py < margin || py > h - margin) continue;
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\"/>\n", px,
                  py, radius);
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

std::string butterfly_svg(const Butterfly& butterfly) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(butterfly.points.size());
  double f_lo = 0.0, f_hi = 1.0;
  for (const auto& p : butterfly.points) {
    pts.emplace_back(p.f, p.eps);
    f_lo = std::min(f_lo, p.f);
    f_hi = std::max(f_hi, p.f);
  }
  return svg_scatter(pts, f_lo, f_hi, -kPi, kPi, 0.8);
}

Json basis_state_json(const BasisState& s) {
  return Json{{"cell", {s.cell.m, s.cell.n}},
              {"kind", std::string(1, kind_char(s.kind))},
              {"slot", s.slot}};
}

Json site_json(const SiteId& s) {
  return Json{{"cell", {s.cell.m, s.cell.n}},
              {"kind", std::string(1, kind_char(s.kind))}};
}

Json graph_json(const Lattice& lattice, const GaugeField& gauge) {
  Json edges = Json::array();
  for (const Edge& e : lattice.edges()) {
    const double phase = peierls_phase(gauge, lattice, e.a, e.b);
    edges.push_back(Json{{"from", basis_state_json(e.a)},
                         {"to", basis_state_json(e.b)},
                         {"phase", phase}});
  }
  Json plaquettes = Json::array();
  for (const Plaquette& p : lattice.plaquettes())
    plaquettes.push_back(Json{{"cell", {p.cell.m, p.cell.n}},
                              {"face", p.face},
                              {"flux", plaquette_flux(gauge, lattice, p)}});
  return Json{{"schema", 1},
              {"graph", lattice.graph() == GraphKind::DiamondChain ? "dc" : "t3"},
              {"cells", {lattice.cells_x(), lattice.cells_y()}},
              {"boundary", lattice.boundary() == Boundary::Periodic ? "periodic" : "open"},
              {"edges", edges},
              {"plaquettes", plaquettes}};
}

Json cage_report_json(const Lattice& lattice, const CageReport& report) {
  Json b = Json::array();
  for (int i = 0; i < report.recursion.b.size(); ++i) b.push_back(report.recursion.b(i));
  Json support = Json::array();
  for (const SiteId& s : report.support) support.push_back(site_json(s));
  Json out{{"schema", 1},
           {"initial", basis_state_json(report.initial)},
           {"caged", report.caged},
           {"n_c", report.n_c},
           {"b", b},
           {"support", support},
           {"radius", report.radius},
           {"max_leak", report.max_leak}};
  if (report.period)
    out["period"] = *report.period;
  else
    out["period"] = report.caged ? Json("quasiperiodic") : Json(nullptr);
  out["chi"] = report.chi;
  (void)lattice;
  return out;
}

}  // namespace qwcage
