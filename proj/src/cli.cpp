#include "qwcage/cli.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <iostream>

#include <CLI11.hpp>

#include "qwcage/io.hpp"
#include "qwcage/parallel.hpp"

namespace qwcage {

namespace {

struct ExperimentConfig {
  std::string graph = "dc";
  std::string coin_a;  // empty: G4 (dc) or G6 (t3)
  std::string coin_b = "H2";
  std::string coin_c = "H2";
  std::string flux;    // empty: per-command default
  int k = 0;           // 0: per-graph default
  std::string init = "all";
  int steps = -1;      // -1: per-command default
  double tol = 1e-8;
  std::string out;
  bool svg = false;
  int threads = 1;
  std::string report;
  std::string sweep;      // e.g. "phi=0:6.2832:65"
  std::string angle_set;  // e.g. "1.0472,0.7854,0.5236"
  std::string layout;
  int bounds = 100;
  int cells = 0;  // 0: auto
};

Json config_json(const std::string& command, const ExperimentConfig& c) {
  return Json{{"command", command}, {"graph", c.graph},   {"coin-a", c.coin_a},
              {"coin-b", c.coin_b}, {"coin-c", c.coin_c}, {"flux", c.flux},
              {"k", c.k},           {"init", c.init},     {"steps", c.steps},
              {"tol", c.tol},       {"out", c.out},       {"svg", c.svg},
              {"threads", c.threads}, {"report", c.report}, {"sweep", c.sweep},
              {"angle-set", c.angle_set}, {"layout", c.layout}, {"bounds", c.bounds},
              {"cells", c.cells}};
}

void load_config_file(const std::string& path, const std::string& command,
                      ExperimentConfig& c) {
  std::ifstream in(path);
  require(bool(in), "cannot open config file " + path);
  Json j = Json::parse(in);
  if (j.contains("command"))
    require(j["command"] == command, "config file is for command '" +
                                         j["command"].get<std::string>() + "'");
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("graph", c.graph);
  get("coin-a", c.coin_a);
  get("coin-b", c.coin_b);
  get("coin-c", c.coin_c);
  get("flux", c.flux);
  get("k", c.k);
  get("init", c.init);
  get("steps", c.steps);
  get("tol", c.tol);
  get("out", c.out);
  get("svg", c.svg);
  get("threads", c.threads);
  get("report", c.report);
  get("sweep", c.sweep);
  get("angle-set", c.angle_set);
  get("layout", c.layout);
  get("bounds", c.bounds);
  get("cells", c.cells);
}

GraphKind parse_graph(const std::string& g) {
  if (g == "dc") return GraphKind::DiamondChain;
  if (g == "t3") return GraphKind::Dice;
  throw std::invalid_argument("graph must be dc or t3");
}

CoinAssignment parse_coins(const ExperimentConfig& c, GraphKind graph) {
  CoinAssignment coins;
  std::string hub = c.coin_a;
  if (hub.empty()) hub = graph == GraphKind::DiamondChain ? "G4" : "G6";
  std::string rim_b = c.coin_b, rim_c = c.coin_c;
  if (graph == GraphKind::Dice && rim_b == "H2") rim_b = "G3";
  if (graph == GraphKind::Dice && rim_c == "H2") rim_c = "G3";
  coins.hub = CoinSpec::parse(hub);
  coins.rim_b = CoinSpec::parse(rim_b);
  coins.rim_c = CoinSpec::parse(rim_c);
  return coins;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string tok =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    require(!tok.empty(), "empty number in list");
    out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Cell center_cell(const Lattice& lat) {
  return {lat.cells_x() / 2, lat.cells_y() / 2};
}

std::vector<BasisState> parse_init(const std::string& spec, const Lattice& lat,
                                   bool all_hub_slots) {
  std::vector<BasisState> states;
  if (spec == "all" || spec.empty()) {
    const Cell c = center_cell(lat);
    const int n = all_hub_slots ? lat.coordination(SiteKind::HubA) : 1;
    for (int s = 0; s < n; ++s) states.push_back({c, SiteKind::HubA, s});
    return states;
  }
  const size_t c1 = spec.find(',');
  const size_t c2 = spec.find(',', c1 + 1);
  require(c1 != std::string::npos && c2 != std::string::npos,
          "init must be cell,kind,slot or 'all'");
  const std::string cell_tok = spec.substr(0, c1);
  const std::string kind_tok = spec.substr(c1 + 1, c2 - c1 - 1);
  const int slot = std::stoi(spec.substr(c2 + 1));
  Cell cell{0, 0};
  if (const size_t colon = cell_tok.find(':'); colon != std::string::npos) {
    cell.m = std::stoi(cell_tok.substr(0, colon));
    cell.n = std::stoi(cell_tok.substr(colon + 1));
  } else {
    cell.m = std::stoi(cell_tok);
  }
  SiteKind kind;
  if (kind_tok == "A" || kind_tok == "a") kind = SiteKind::HubA;
  else if (kind_tok == "B" || kind_tok == "b") kind = SiteKind::RimB;
  else if (kind_tok == "C" || kind_tok == "c") kind = SiteKind::RimC;
  else throw std::invalid_argument("init kind must be A, B or C");
  require(lat.contains(cell), "init cell outside lattice");
  require(slot >= 0 && slot < lat.coordination(kind), "init slot out of range");
  states.push_back({cell, kind, slot});
  return states;
}

GaugeField gauge_for(GraphKind graph, double f) {
  return graph == GraphKind::DiamondChain ? GaugeField::dc_single_edge(f)
                                          : GaugeField::t3_landau_flux(f);
}

Lattice arnoldi_lattice(GraphKind graph, int cells_override) {
  if (graph == GraphKind::DiamondChain) {
    const int n = cells_override > 0 ? cells_override : 11;
    return Lattice::diamond_chain(n, Boundary::Open);
  }
  const int n = cells_override > 0 ? cells_override : 13;
  return Lattice::dice(n, n, Boundary::Open);
}

std::string svg_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".svg");
  return p.string();
}

// Per-level spread across k for each flux group of a butterfly.
struct PinchSummary {
  double f = 0.0;
  double spread = 0.0;
  bool pinched = false;
};

PinchSummary pinch_from_butterfly(const Butterfly& b) {
  // Per flux: worst multiset distance of any k-block spectrum to the first
  // block; zero exactly at a full pinch and safe against the branch cut.
  PinchSummary best;
  best.spread = std::numeric_limits<double>::infinity();
  std::vector<double> fs, spreads;
  size_t i = 0;
  while (i < b.points.size()) {
    size_t j = i;
    while (j < b.points.size() && b.points[j].f == b.points[i].f) ++j;
    const size_t group = j - i;
    int blocks;
    if (b.graph == GraphKind::DiamondChain) {
      blocks = b.k_samples;
    } else {
      const int n1 = int(std::ceil(std::sqrt(double(b.k_samples))));
      blocks = n1 * ((b.k_samples + n1 - 1) / n1);
    }
    const size_t levels = group / size_t(blocks);
    std::vector<double> first(levels), other(levels);
    for (size_t lvl = 0; lvl < levels; ++lvl) first[lvl] = b.points[i + lvl].eps;
    double worst = 0.0;
    for (int blk = 1; blk < blocks; ++blk) {
      for (size_t lvl = 0; lvl < levels; ++lvl)
        other[lvl] = b.points[i + size_t(blk) * levels + lvl].eps;
      worst = std::max(worst, circular_multiset_distance(first, other));
    }
    fs.push_back(b.points[i].f);
    spreads.push_back(worst);
    i = j;
  }
  const auto it = std::min_element(spreads.begin(), spreads.end());
  const size_t idx = it - spreads.begin();
  best.f = fs[idx];
  best.spread = *it;
  if (b.graph == GraphKind::DiamondChain && idx > 0 && idx + 1 < spreads.size()) {
    const double y0 = spreads[idx - 1] * spreads[idx - 1];
    const double y1 = spreads[idx] * spreads[idx];
    const double y2 = spreads[idx + 1] * spreads[idx + 1];
    const double denom = y0 - 2 * y1 + y2;
    if (denom > 0) {
      best.f -= 0.5 * (fs[idx + 1] - fs[idx]) * (y2 - y0) / denom;
      best.spread =
          std::sqrt(std::max(0.0, y1 - (y2 - y0) * (y2 - y0) / (8 * denom)));
    }
  }
  best.pinched = best.spread < 1e-6;
  return best;
}

std::string cell_label(GraphKind graph, Cell c) {
  if (graph == GraphKind::DiamondChain) return std::to_string(c.m);
  return std::to_string(c.m) + ":" + std::to_string(c.n);
}

// ---------------------------------------------------------------------------

int cmd_bands(const ExperimentConfig& cfg, bool butterfly_mode) {
  const GraphKind graph = parse_graph(cfg.graph);
  if (butterfly_mode)
    require(graph == GraphKind::Dice, "butterfly runs on --graph t3; use bands for the chain");
  const CoinAssignment coins = parse_coins(cfg, graph);
  require(!cfg.out.empty(), "need --out PATH");
  std::string flux_spec = cfg.flux;
  if (flux_spec.empty())
    flux_spec = graph == GraphKind::DiamondChain ? "0:1:512" : "q<=30";
  const FluxGrid flux = FluxGrid::parse(flux_spec);
  const int k = cfg.k > 0 ? cfg.k : (graph == GraphKind::DiamondChain ? 256 : 8);
  const int threads = std::max(1, cfg.threads);

  const Butterfly b = graph == GraphKind::DiamondChain
                          ? dc_butterfly(coins, flux, k, threads)
                          : t3_butterfly(coins, flux, k, threads);
  atomic_write(cfg.out, butterfly_csv(b));
  if (cfg.svg) atomic_write(svg_path(cfg.out), butterfly_svg(b));
  PinchSummary pinch = pinch_from_butterfly(b);
  if (graph == GraphKind::DiamondChain && !pinch.pinched) {
    // The critical flux may fall between grid nodes; evaluate there.
    const auto at = pinch_scan(graph, coins, FluxGrid::single(pinch.f), k, threads);
    pinch.spread = std::min(pinch.spread, at.spread_min);
    pinch.pinched = pinch.spread < 1e-6;
  }
  std::cout << (butterfly_mode ? "butterfly" : "bands") << ": " << b.points.size()
            << " points; pinch f=" << fmt_num(pinch.f) << " spread="
            << fmt_num(pinch.spread) << " pinched=" << (pinch.pinched ? 1 : 0) << "\n";
  if (graph == GraphKind::Dice) {
    // Cross-diagnostic: the Krylov coefficient locates the critical flux
    // independently of the spectra.
    const Lattice lat = arnoldi_lattice(graph, cfg.cells);
    const auto scan =
        critical_flux_scan(lat, coins, {center_cell(lat), SiteKind::HubA, 0},
                           flux.values(), threads);
    if (!scan.minima.empty())
      std::cout << "caging: b12 minimum " << fmt_num(scan.minima[0].second)
                << " at f_c=" << fmt_num(scan.minima[0].first) << "\n";
  }
  return 0;
}

CoinSpec with_angle(const CoinSpec& coin, const std::string& field, double value,
                    bool is_rim_c) {
  if (auto u = coin.params_u2()) {
    CoinParamsU2 p = *u;
    if (field == "theta") p.theta = value;
    else if (field == "phi") p.phi = value;
    else if (field == "beta") p.beta = value;
    else if (field == "omega") { if (is_rim_c) p.omega = value; }
    else throw std::invalid_argument("unknown sweep field '" + field + "' for a U2 coin");
    return CoinSpec::make_u2(p);
  }
  if (auto r = coin.params_r3()) {
    CoinParamsR3 p = *r;
    if (field == "alpha") p.alpha = value;
    else if (field == "gamma") p.gamma = value;
    else if (field == "omega") { if (is_rim_c) p.omega = value; }
    else throw std::invalid_argument("unknown sweep field '" + field + "' for an R3 coin");
    return CoinSpec::make_r3(p);
  }
  throw std::invalid_argument("sweeps need U2 or R3 family rim coins");
}

int cmd_arnoldi(const ExperimentConfig& cfg) {
  const GraphKind graph = parse_graph(cfg.graph);
  const CoinAssignment coins = parse_coins(cfg, graph);
  const Lattice lat = arnoldi_lattice(graph, cfg.cells);
  const int n_star = graph == GraphKind::DiamondChain ? 8 : 12;
  const int threads = std::max(1, cfg.threads);
  const std::string flux_spec = cfg.flux.empty() ? "0:1:201" : cfg.flux;
  const FluxGrid flux = FluxGrid::parse(flux_spec);
  const auto inits = parse_init(cfg.init, lat, /*all_hub_slots=*/true);

  if (flux.kind == FluxGrid::Kind::Single) {
    const WalkOperator w = build_walk(lat, gauge_for(graph, flux.value), coins);
    Json reports = Json::array();
    std::set<std::pair<std::pair<int, int>, int>> union_sites;
    for (const BasisState& s0 : inits) {
      CageReport report =
          detect_cage(lat, w, s0, cfg.tol, cfg.steps > 0 ? cfg.steps : 1000);
      if (report.caged) {
        const PeriodResult pr = dynamics_period(report, 200, 1e-8);
        report.period = pr.period;
        report.chi = pr.chi;
      }
      for (const SiteId& s : report.support)
        union_sites.insert({{s.cell.m, s.cell.n}, kind_index(s.kind)});
      std::cout << "init " << to_string(s0) << ": "
                << (report.caged ? "caged n_c=" + std::to_string(report.n_c) +
                                       " radius=" + std::to_string(report.radius)
                                 : "not caged")
                << "\n";
      reports.push_back(cage_report_json(lat, report));
    }
    Json union_json = Json::array();
    for (const auto& [cell, kind] : union_sites)
      union_json.push_back(site_json({{cell.first, cell.second},
                                      static_cast<SiteKind>(kind)}));
    const Json out{{"schema", 1},
                   {"flux", flux.value},
                   {"reports", reports},
                   {"support_union", union_json}};
    if (!cfg.out.empty())
      atomic_write(cfg.out, out.dump(2) + "\n");
    else
      std::cout << out.dump(2) << "\n";
    return 0;
  }

  // Surface mode: relative b_{n*} over [angle-set] x flux x [sweep].
  std::vector<double> angles{0.0};
  bool have_angles = !cfg.angle_set.empty();
  if (have_angles) angles = parse_number_list(cfg.angle_set);
  std::string sweep_name;
  std::vector<double> sweep_vals{0.0};
  bool have_sweep = !cfg.sweep.empty();
  if (have_sweep) {
    const size_t eq = cfg.sweep.find('=');
    require(eq != std::string::npos, "sweep must be name=lo:hi:count");
    sweep_name = cfg.sweep.substr(0, eq);
    const FluxGrid g = FluxGrid::parse(cfg.sweep.substr(eq + 1));
    require(g.kind == FluxGrid::Kind::Grid, "sweep must be name=lo:hi:count");
    sweep_vals = g.values();
  }
  const std::vector<double> fs = flux.values();
  const std::string main_angle = graph == GraphKind::DiamondChain ? "theta" : "alpha";
  const BasisState s0 = inits.front();

  const int na = int(angles.size()), nf = int(fs.size()), ns = int(sweep_vals.size());
  std::vector<double> b_out(size_t(na) * nf * ns);
  parallel_for(na * nf * ns, threads, [&](int idx) {
    const int ia = idx / (nf * ns);
    const int jf = (idx / ns) % nf;
    const int ls = idx % ns;
    CoinAssignment local = coins;
    if (have_angles) {
      local.rim_b = with_angle(local.rim_b, main_angle, angles[ia], false);
      local.rim_c = with_angle(local.rim_c, main_angle, angles[ia], true);
    }
    if (have_sweep) {
      local.rim_b = with_angle(local.rim_b, sweep_name, sweep_vals[ls], false);
      local.rim_c = with_angle(local.rim_c, sweep_name, sweep_vals[ls], true);
    }
    const WalkOperator w = build_walk(lat, gauge_for(graph, fs[jf]), local);
    const ArnoldiResult res = arnoldi(w, basis_vector(lat, s0), n_star, 0.0);
    b_out[idx] = res.b.size() >= n_star ? res.relative_b(n_star) : 0.0;
  });

  std::string csv;
  if (have_angles) csv += main_angle + ",";
  csv += "f";
  if (have_sweep) csv += "," + sweep_name;
  csv += ",b" + std::to_string(n_star) + "\n";
  for (int ia = 0; ia < na; ++ia)
    for (int jf = 0; jf < nf; ++jf)
      for (int ls = 0; ls < ns; ++ls) {
        if (have_angles) csv += fmt_num(angles[ia]) + ",";
        csv += fmt_num(fs[jf]);
        if (have_sweep) csv += "," + fmt_num(sweep_vals[ls]);
        csv += "," + fmt_num(b_out[(size_t(ia) * nf + jf) * ns + ls]) + "\n";
      }
  require(!cfg.out.empty(), "need --out PATH");
  atomic_write(cfg.out, csv);

  Json minima = Json::array();
  for (int ia = 0; ia < na; ++ia) {
    double best = std::numeric_limits<double>::infinity();
    int bj = 0, bl = 0;
    for (int jf = 0; jf < nf; ++jf)
      for (int ls = 0; ls < ns; ++ls) {
        const double v = b_out[(size_t(ia) * nf + jf) * ns + ls];
        if (v < best) { best = v; bj = jf; bl = ls; }
      }
    Json entry{{"f", fs[bj]}, {"b", best}};
    if (have_angles) entry[main_angle] = angles[ia];
    if (have_sweep) entry[sweep_name] = sweep_vals[bl];
    minima.push_back(entry);
    std::cout << "minimum";
    if (have_angles) std::cout << " " << main_angle << "=" << fmt_num(angles[ia]);
    std::cout << ": b" << n_star << "=" << fmt_num(best) << " at f=" << fmt_num(fs[bj]);
    if (have_sweep) std::cout << " " << sweep_name << "=" << fmt_num(sweep_vals[bl]);
    std::cout << "\n";
  }
  if (!cfg.report.empty())
    atomic_write(cfg.report, Json{{"schema", 1}, {"minima", minima}}.dump(2) + "\n");
  return 0;
}

int cmd_evolve(const ExperimentConfig& cfg) {
  const GraphKind graph = parse_graph(cfg.graph);
  const CoinAssignment coins = parse_coins(cfg, graph);
  const int steps = cfg.steps >= 0 ? cfg.steps : 16;
  const FluxGrid flux = FluxGrid::parse(cfg.flux.empty() ? "0.5" : cfg.flux);
  require(flux.kind == FluxGrid::Kind::Single, "evolve needs a single --flux value");
  require(!cfg.out.empty(), "need --out PATH");

  const int def = 2 * steps + 5;
  const int n = cfg.cells > 0 ? cfg.cells : def;
  const Lattice lat = graph == GraphKind::DiamondChain
                          ? Lattice::diamond_chain(n, Boundary::Open)
                          : Lattice::dice(n, n, Boundary::Open);
  auto inits = parse_init(cfg.init, lat, /*all_hub_slots=*/false);
  const BasisState s0 = inits.front();

  // Warn when the light cone can reach a dangling edge.
  const auto dist = lat.graph_distances(s0.site());
  int boundary_dist = std::numeric_limits<int>::max();
  for (int i = 0; i < lat.num_states(); ++i) {
    const BasisState s = lat.state(i);
    if (!lat.opposite(s))
      boundary_dist = std::min(boundary_dist, dist[lat.site_index(s.site())]);
  }
  if (steps >= boundary_dist)
    std::cerr << "warning: lattice may be too small, wavefront can reach the open "
                 "boundary (distance "
              << boundary_dist << ", steps " << steps << ")\n";

  const WalkOperator w = build_walk(lat, gauge_for(graph, flux.value), coins);
  std::string site_csv = "step,cell,kind,probability\n";
  std::string slot_csv = "step,cell,kind,slot,re,im,prob\n";
  Eigen::VectorXcd psi = basis_vector(lat, s0);
  for (int t = 0; t <= steps; ++t) {
    if (t > 0) psi = w.matrix * psi;
    const auto prob = site_probabilities(lat, psi);
    for (int s = 0; s < int(prob.size()); ++s) {
      if (prob[s] <= 1e-15) continue;
      const SiteId site = lat.site(s);
      site_csv += std::to_string(t) + "," + cell_label(graph, site.cell) + "," +
                  kind_char(site.kind) + ("," + fmt_num(prob[s])) + "\n";
    }
    for (int i = 0; i < lat.num_states(); ++i) {
      const double p = std::norm(psi(i));
      if (p <= 1e-15) continue;
      const BasisState s = lat.state(i);
      slot_csv += std::to_string(t) + "," + cell_label(graph, s.cell) + "," +
                  kind_char(s.kind) + "," + std::to_string(s.slot) + "," +
                  fmt_num(psi(i).real()) + "," + fmt_num(psi(i).imag()) + "," +
                  fmt_num(p) + "\n";
    }
  }
  atomic_write(cfg.out, site_csv);
  std::filesystem::path slots(cfg.out);
  slots.replace_extension(".slots.csv");
  atomic_write(slots, slot_csv);

  CageReport report = detect_cage(lat, w, s0, cfg.tol, std::min(200, std::max(steps, 50)));
  if (report.caged) {
    const PeriodResult pr = dynamics_period(report, 200, 1e-8);
    std::cout << "caged: n_c=" << report.n_c << " radius=" << report.radius;
    if (pr.period)
      std::cout << " period=" << *pr.period << " chi=" << fmt_num(pr.chi) << "\n";
    else
      std::cout << " period=quasiperiodic\n";
  } else {
    std::cout << "not caged\n";
  }
  return 0;
}

int cmd_superlattice(const ExperimentConfig& cfg) {
  require(parse_graph(cfg.graph) == GraphKind::DiamondChain,
          "superlattice engineering runs on the diamond chain");
  require(!cfg.layout.empty(), "need --layout over {H,G}");
  const SuperlatticeLayout layout = SuperlatticeLayout::parse(cfg.layout);
  const FluxGrid flux = FluxGrid::parse(cfg.flux.empty() ? "0.5" : cfg.flux);
  require(flux.kind == FluxGrid::Kind::Single, "superlattice needs a single --flux value");
  const CoinSpec rim = CoinSpec::parse(cfg.coin_b);
  require(rim.dim() == 2, "rim coin must be 2-dimensional");
  const int steps = cfg.steps >= 0 ? cfg.steps : std::max(300, 3 * layout.size());
  require(!cfg.out.empty(), "need --out PATH");

  Json sites = Json::array();
  int passed = 0, total = 0;
  auto run_site = [&](SiteId init) {
    const SuperlatticeCheck check =
        verify_superlattice_cage(layout, init, flux.value, steps, rim);
    Json entry{{"init", site_json(init)}};
    entry["predicted"] = Json{
        {"left", check.predicted.left ? Json(*check.predicted.left) : Json(nullptr)},
        {"right", check.predicted.right ? Json(*check.predicted.right) : Json(nullptr)}};
    entry["measured"] = Json{{"left", check.measured_left},
                             {"right", check.measured_right},
                             {"max_leak", check.max_leak},
                             {"walls_reached", check.walls_reached}};
    entry["pass"] = check.pass;
    sites.push_back(entry);
    ++total;
    if (check.pass) ++passed;
  };
  for (int m = 1; m + 1 < layout.size(); ++m) run_site({{m, 0}, SiteKind::HubA});
  for (int m = 1; m + 2 < layout.size(); ++m) {
    run_site({{m, 0}, SiteKind::RimB});
    run_site({{m, 0}, SiteKind::RimC});
  }
  const Json out{{"schema", 1},        {"layout", layout.coins},
                 {"flux", flux.value}, {"rim", rim.str()},
                 {"steps", steps},     {"sites", sites}};
  atomic_write(cfg.out, out.dump(2) + "\n");
  std::cout << "superlattice: " << passed << "/" << total << " site predictions verified\n";
  return passed == total ? 0 : 1;
}

int cmd_period_search(const ExperimentConfig& cfg) {
  const auto solutions = commensurate_period_search(cfg.bounds, cfg.bounds);
  Json list = Json::array();
  for (const auto& s : solutions)
    list.push_back(Json{{"p1", s.p1},
                        {"q1", s.q1},
                        {"p2", s.p2},
                        {"q2", s.q2},
                        {"period", s.period},
                        {"trivial", s.trivial}});
  const Json out{{"schema", 1}, {"bounds", cfg.bounds}, {"solutions", list}};
  if (!cfg.out.empty())
    atomic_write(cfg.out, out.dump(2) + "\n");
  else
    std::cout << out.dump(2) << "\n";
  int nontrivial = 0;
  for (const auto& s : solutions)
    if (!s.trivial) ++nontrivial;
  std::cerr << "solutions: " << solutions.size() << " (" << nontrivial
            << " non-trivial)\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"quantum-walk cages on the diamond chain and the dice lattice"};
  app.require_subcommand(1);
  ExperimentConfig cfg;
  bool print_config = false;
  std::string config_path;

  const std::vector<std::string> commands = {"bands",  "butterfly",    "arnoldi",
                                             "evolve", "superlattice", "appendix-e"};
  // Config files load before flag parsing so flags win.
  for (size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  try {
    if (!config_path.empty() && !args.empty()) load_config_file(config_path, args[0], cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file (flags override)");
    sub->add_flag("--print-config", print_config, "print the effective config and exit");
    sub->add_option("--graph", cfg.graph)->check(CLI::IsMember({"dc", "t3"}));
    sub->add_option("--coin-a", cfg.coin_a, "hub coin spec");
    sub->add_option("--coin-b", cfg.coin_b, "rim b coin spec");
    sub->add_option("--coin-c", cfg.coin_c, "rim c coin spec");
    sub->add_option("--flux", cfg.flux, "value | lo:hi:n | q<=Q");
    sub->add_option("--k", cfg.k, "wave-vector samples");
    sub->add_option("--init", cfg.init, "cell,kind,slot or 'all'");
    sub->add_option("--steps", cfg.steps);
    sub->add_option("--tol", cfg.tol);
    sub->add_option("--out", cfg.out, "output path");
    sub->add_flag("--svg", cfg.svg, "also write an SVG scatter");
    sub->add_option("--threads", cfg.threads);
    sub->add_option("--report", cfg.report, "extra JSON summary path");
    sub->add_option("--sweep", cfg.sweep, "angle sweep name=lo:hi:n");
    sub->add_option("--angle-set", cfg.angle_set, "comma list of theta/alpha values");
    sub->add_option("--layout", cfg.layout, "hub coin layout over {H,G}");
    sub->add_option("--bounds", cfg.bounds, "search bound for appendix-e");
    sub->add_option("--cells", cfg.cells, "lattice extent override");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (print_config) {
    std::cout << config_json(command, cfg).dump(2) << "\n";
    return 0;
  }
  try {
    if (command == "bands") return cmd_bands(cfg, false);
    if (command == "butterfly") return cmd_bands(cfg, true);
    if (command == "arnoldi") return cmd_arnoldi(cfg);
    if (command == "evolve") return cmd_evolve(cfg);
    if (command == "superlattice") return cmd_superlattice(cfg);
    if (command == "appendix-e") return cmd_period_search(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace qwcage
