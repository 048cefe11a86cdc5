#include "qwcage/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <tuple>

namespace qwcage {

namespace {

struct Hop {
  int dm, dn;
  SiteKind kind;
  int slot;
};

// Diamond chain, rim b below the hub row, rim c above.
constexpr Hop kDcHub[4] = {
    {0, 0, SiteKind::RimC, 1},    // right-up
    {-1, 0, SiteKind::RimC, 0},   // left-up
    {-1, 0, SiteKind::RimB, 0},   // left-down
    {0, 0, SiteKind::RimB, 1},    // right-down
};
constexpr Hop kDcRimB[2] = {
    {1, 0, SiteKind::HubA, 2},    // right
    {0, 0, SiteKind::HubA, 3},    // left
};
constexpr Hop kDcRimC[2] = {
    {1, 0, SiteKind::HubA, 1},    // right
    {0, 0, SiteKind::HubA, 0},    // left
};

// T3 tiling on the triangular Bravais lattice t1=(1,0), t2=(1/2,sqrt(3)/2);
// hub a at the lattice node, rim b at the up-triangle centroid, rim c at the
// down-triangle centroid. Slots run anti-clockwise from the +x axis.
constexpr Hop kT3Hub[6] = {
    {0, 0, SiteKind::RimB, 2},     // 30 deg
    {-1, 0, SiteKind::RimC, 1},    // 90 deg
    {-1, 0, SiteKind::RimB, 0},    // 150 deg
    {-1, -1, SiteKind::RimC, 0},   // 210 deg
    {0, -1, SiteKind::RimB, 1},    // 270 deg
    {0, -1, SiteKind::RimC, 2},    // 330 deg
};
constexpr Hop kT3RimB[3] = {
    {1, 0, SiteKind::HubA, 2},     // 330 deg
    {0, 1, SiteKind::HubA, 4},     // 90 deg
    {0, 0, SiteKind::HubA, 0},     // 210 deg
};
// The two rim sublattices are mirror images; c slots run clockwise from the
// +x-closest edge where b slots run anti-clockwise.
constexpr Hop kT3RimC[3] = {
    {1, 1, SiteKind::HubA, 3},     // 30 deg
    {1, 0, SiteKind::HubA, 1},     // 270 deg
    {0, 1, SiteKind::HubA, 5},     // 150 deg
};

int mod(int a, int p) {
  int r = a % p;
  return r < 0 ? r + p : r;
}

}  // namespace

std::string to_string(const BasisState& s) {
  std::string out = "(";
  out += std::to_string(s.cell.m);
  out += ":";
  out += std::to_string(s.cell.n);
  out += ",";
  out += kind_char(s.kind);
  out += ",";
  out += std::to_string(s.slot);
  out += ")";
  return out;
}

Lattice::Lattice(GraphKind g, int nx, int ny, Boundary b)
    : graph_(g), boundary_(b), nx_(nx), ny_(ny) {}

Lattice Lattice::diamond_chain(int cells, Boundary boundary) {
  require(cells >= 1, "diamond chain needs at least one cell");
  return Lattice(GraphKind::DiamondChain, cells, 1, boundary);
}

Lattice Lattice::dice(int cells_x, int cells_y, Boundary boundary) {
  require(cells_x >= 1 && cells_y >= 1, "dice lattice needs at least 1x1 cells");
  return Lattice(GraphKind::Dice, cells_x, cells_y, boundary);
}

int Lattice::coordination(SiteKind kind) const {
  if (graph_ == GraphKind::DiamondChain) return kind == SiteKind::HubA ? 4 : 2;
  return kind == SiteKind::HubA ? 6 : 3;
}

Cell Lattice::wrap(Cell c) const { return {mod(c.m, nx_), mod(c.n, ny_)}; }

int Lattice::index(const BasisState& s) const {
  int offset = 0;
  if (graph_ == GraphKind::DiamondChain) {
    static constexpr int off[3] = {0, 4, 6};
    offset = off[kind_index(s.kind)];
  } else {
    static constexpr int off[3] = {0, 6, 9};
    offset = off[kind_index(s.kind)];
  }
  return cell_index(s.cell) * states_per_cell() + offset + s.slot;
}

BasisState Lattice::state(int index) const {
  const int spc = states_per_cell();
  const int ci = index / spc;
  int r = index % spc;
  Cell cell{ci / ny_, ci % ny_};
  const int hub = coordination(SiteKind::HubA);
  const int rim = coordination(SiteKind::RimB);
  if (r < hub) return {cell, SiteKind::HubA, r};
  r -= hub;
  if (r < rim) return {cell, SiteKind::RimB, r};
  return {cell, SiteKind::RimC, r - rim};
}

SiteId Lattice::site(int index) const {
  Cell cell{(index / 3) / ny_, (index / 3) % ny_};
  return {cell, static_cast<SiteKind>(index % 3)};
}

BasisState Lattice::opposite_unbounded(const BasisState& s) const {
  const Hop* hop = nullptr;
  if (graph_ == GraphKind::DiamondChain) {
    switch (s.kind) {
      case SiteKind::HubA: hop = &kDcHub[s.slot]; break;
      case SiteKind::RimB: hop = &kDcRimB[s.slot]; break;
      case SiteKind::RimC: hop = &kDcRimC[s.slot]; break;
    }
  } else {
    switch (s.kind) {
      case SiteKind::HubA: hop = &kT3Hub[s.slot]; break;
      case SiteKind::RimB: hop = &kT3RimB[s.slot]; break;
      case SiteKind::RimC: hop = &kT3RimC[s.slot]; break;
    }
  }
  return {{s.cell.m + hop->dm, s.cell.n + hop->dn}, hop->kind, hop->slot};
}

std::optional<BasisState> Lattice::opposite(const BasisState& s) const {
  require(s.slot >= 0 && s.slot < coordination(s.kind), "invalid slot");
  BasisState v = opposite_unbounded(s);
  if (boundary_ == Boundary::Periodic) {
    v.cell = wrap(v.cell);
    return v;
  }
  if (!contains(v.cell)) return std::nullopt;
  return v;
}

Eigen::Vector2d Lattice::site_position(const SiteId& s) const {
  if (graph_ == GraphKind::DiamondChain) {
    switch (s.kind) {
      case SiteKind::HubA: return {double(s.cell.m), 0.0};
      case SiteKind::RimB: return {s.cell.m + 0.5, -0.5};
      case SiteKind::RimC: return {s.cell.m + 0.5, 0.5};
    }
  }
  const Eigen::Vector2d t1(1.0, 0.0);
  const Eigen::Vector2d t2(0.5, std::sqrt(3.0) / 2.0);
  Eigen::Vector2d base = s.cell.m * t1 + s.cell.n * t2;
  switch (s.kind) {
    case SiteKind::HubA: return base;
    case SiteKind::RimB: return base + (t1 + t2) / 3.0;
    case SiteKind::RimC: return base + 2.0 * (t1 + t2) / 3.0;
  }
  return base;
}

std::vector<Edge> Lattice::edges() const {
  std::vector<Edge> out;
  for (int ci = 0; ci < num_cells(); ++ci) {
    Cell cell{ci / ny_, ci % ny_};
    for (SiteKind kind : {SiteKind::RimB, SiteKind::RimC}) {
      for (int slot = 0; slot < coordination(kind); ++slot) {
        BasisState u{cell, kind, slot};
        if (auto v = opposite(u)) out.push_back({u, *v});
      }
    }
  }
  return out;
}

std::vector<Plaquette> Lattice::plaquettes() const {
  std::vector<Plaquette> out;
  const int faces = graph_ == GraphKind::DiamondChain ? 1 : 3;
  for (int ci = 0; ci < num_cells(); ++ci) {
    Cell cell{ci / ny_, ci % ny_};
    for (int face = 0; face < faces; ++face) {
      Plaquette p{cell, face};
      if (boundary_ == Boundary::Open) {
        bool ok = true;
        for (const SiteId& s : plaquette_loop(p))
          if (!contains(s.cell)) ok = false;
        if (!ok) continue;
      }
      out.push_back(p);
    }
  }
  return out;
}

std::array<SiteId, 4> Lattice::plaquette_loop(const Plaquette& p) const {
  const Cell r = p.cell;
  const Cell r10{r.m + 1, r.n};
  const Cell r01{r.m, r.n + 1};
  if (graph_ == GraphKind::DiamondChain) {
    require(p.face == 0, "diamond chain has a single plaquette per cell");
    return {SiteId{r, SiteKind::HubA}, SiteId{r, SiteKind::RimB},
            SiteId{r10, SiteKind::HubA}, SiteId{r, SiteKind::RimC}};
  }
  switch (p.face) {
    case 0:  // rhombus across the t1 hub bond
      return {SiteId{r, SiteKind::HubA}, SiteId{r, SiteKind::RimB},
              SiteId{r10, SiteKind::HubA}, SiteId{{r.m, r.n - 1}, SiteKind::RimC}};
    case 1:  // rhombus across the t2 hub bond
      return {SiteId{r, SiteKind::HubA}, SiteId{{r.m - 1, r.n}, SiteKind::RimC},
              SiteId{r01, SiteKind::HubA}, SiteId{r, SiteKind::RimB}};
    case 2:  // rhombus across the t2-t1 hub bond
      return {SiteId{r10, SiteKind::HubA}, SiteId{r, SiteKind::RimB},
              SiteId{r01, SiteKind::HubA}, SiteId{r, SiteKind::RimC}};
    default:
      throw std::invalid_argument("unknown plaquette face");
  }
}

int Lattice::cell_distance(Cell a, Cell b) const {
  auto dist = [this](int dm, int dn) {
    if (graph_ == GraphKind::DiamondChain) return std::abs(dm);
    return (std::abs(dm) + std::abs(dn) + std::abs(dm + dn)) / 2;
  };
  int dm = b.m - a.m;
  int dn = b.n - a.n;
  if (boundary_ == Boundary::Open) return dist(dm, dn);
  int best = dist(dm, dn);
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      best = std::min(best, dist(dm + i * nx_, dn + j * ny_));
  return best;
}

std::vector<int> Lattice::graph_distances(const SiteId& from) const {
  std::vector<int> dist(num_sites(), -1);
  std::deque<int> queue;
  dist[site_index(from)] = 0;
  queue.push_back(site_index(from));
  while (!queue.empty()) {
    int si = queue.front();
    queue.pop_front();
    SiteId s = site(si);
    for (int slot = 0; slot < coordination(s.kind); ++slot) {
      auto v = opposite(BasisState{s.cell, s.kind, slot});
      if (!v) continue;
      int vi = site_index(v->site());
      if (dist[vi] < 0) {
        dist[vi] = dist[si] + 1;
        queue.push_back(vi);
      }
    }
  }
  return dist;
}

std::vector<BasisState> enumerate_basis(const Lattice& lattice) {
  std::vector<BasisState> out;
  out.reserve(lattice.num_states());
  for (int i = 0; i < lattice.num_states(); ++i) out.push_back(lattice.state(i));
  return out;
}

// ---------------------------------------------------------------------------
// Gauge fields

GaugeField GaugeField::dc_single_edge(double f) {
  return GaugeField(GraphKind::DiamondChain, GaugeKind::DcSingleEdge, f);
}

GaugeField GaugeField::t3_landau(int p, int q) {
  require(q >= 1, "t3_landau: q must be positive");
  require(std::gcd(std::abs(p), q) == 1, "t3_landau: p/q must be in lowest terms");
  GaugeField g(GraphKind::Dice, GaugeKind::T3Landau, double(p) / double(q));
  g.p_ = p;
  g.q_ = q;
  return g;
}

GaugeField GaugeField::t3_landau_flux(double f) {
  GaugeField g(GraphKind::Dice, GaugeKind::T3Landau, f);
  g.p_ = 0;
  g.q_ = 0;  // irrational / free flux: no magnetic cell claimed
  return g;
}

GaugeField GaugeField::t3_periodic_third(double f) {
  require(std::abs(std::abs(f) - 1.0 / 3.0) < 1e-12,
          "t3_periodic_third: flux must be +1/3 or -1/3");
  return GaugeField(GraphKind::Dice, GaugeKind::T3PeriodicThird, f);
}

GaugeField GaugeField::with_site_twist(int period_m, int period_n,
                                       std::map<std::tuple<int, int, int>, double> chi) const {
  GaugeField g = *this;
  g.twist_pm_ = std::max(1, period_m);
  g.twist_pn_ = std::max(1, period_n);
  g.twist_chi_ = std::move(chi);
  return g;
}

double GaugeField::twist(const SiteId& s) const {
  if (twist_chi_.empty()) return 0.0;
  auto it = twist_chi_.find({kind_index(s.kind), mod(s.cell.m, twist_pm_), mod(s.cell.n, twist_pn_)});
  return it == twist_chi_.end() ? 0.0 : it->second;
}

double GaugeField::base_phase(const SiteId& from, const SiteId& to) const {
  switch (kind_) {
    case GaugeKind::DcSingleEdge: {
      // Marked directed edge: hub of cell m+1 toward rim c of cell m.
      if (from.kind == SiteKind::HubA && to.kind == SiteKind::RimC &&
          from.cell.m == to.cell.m + 1)
        return kTwoPi * f_;
      if (from.kind == SiteKind::RimC && to.kind == SiteKind::HubA &&
          to.cell.m == from.cell.m + 1)
        return -kTwoPi * f_;
      return 0.0;
    }
    case GaugeKind::T3Landau: {
      // Oblique (t1, t2) coordinates; phase = 6*pi*f * mean(a) * delta(b)
      // gives 2*pi*f through every rhombus.
      auto oblique = [](const SiteId& s) -> std::pair<double, double> {
        double m = s.cell.m, n = s.cell.n;
        switch (s.kind) {
          case SiteKind::HubA: return {m, n};
          case SiteKind::RimB: return {m + 1.0 / 3.0, n + 1.0 / 3.0};
          case SiteKind::RimC: return {m + 2.0 / 3.0, n + 2.0 / 3.0};
        }
        return {m, n};
      };
      auto [a1, b1] = oblique(from);
      auto [a2, b2] = oblique(to);
      return -6.0 * kPi * f_ * 0.5 * (a1 + a2) * (b2 - b1);
    }
    case GaugeKind::T3PeriodicThird: {
      // All hub-b edges carry zero phase; hub->c phases depend only on the
      // hub cell relative to the c cell, making the table cell-periodic.
      auto table = [](Cell hub, Cell c) -> double {
        int dm = hub.m - c.m, dn = hub.n - c.n;
        if (dm == 1 && dn == 0) return 0.0;
        if (dm == 0 && dn == 1) return kTwoPi / 3.0;
        if (dm == 1 && dn == 1) return 2.0 * kTwoPi / 3.0;
        throw std::invalid_argument("t3_periodic_third: not a hub-c edge");
      };
      double sign = f_ > 0 ? 1.0 : -1.0;  // positive base table realizes f = +1/3
      if (from.kind == SiteKind::HubA && to.kind == SiteKind::RimC)
        return sign * table(from.cell, to.cell);
      if (from.kind == SiteKind::RimC && to.kind == SiteKind::HubA)
        return -sign * table(to.cell, from.cell);
      return 0.0;
    }
  }
  return 0.0;
}

double GaugeField::phase(const SiteId& from, const SiteId& to) const {
  return base_phase(from, to) + twist(to) - twist(from);
}

double peierls_phase(const GaugeField& gauge, const Lattice& lattice,
                     const BasisState& from, const BasisState& to) {
  require(gauge.graph() == lattice.graph(), "gauge/lattice graph mismatch");
  BasisState v = lattice.opposite_unbounded(from);
  bool adjacent = v.site() == to.site();
  if (!adjacent && lattice.boundary() == Boundary::Periodic) {
    BasisState w = v;
    w.cell = lattice.wrap(w.cell);
    adjacent = w.site() == to.site() && v.kind == to.kind;
  }
  require(adjacent, "peierls_phase: states are not the two ends of an edge");
  return gauge.phase(from.site(), v.site());
}

double plaquette_flux(const GaugeField& gauge, const Lattice& lattice,
                      const Plaquette& plaquette) {
  require(gauge.graph() == lattice.graph(), "gauge/lattice graph mismatch");
  auto loop = lattice.plaquette_loop(plaquette);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += gauge.phase(loop[i], loop[(i + 1) % 4]);
  return reduce_flux(sum / kTwoPi);
}

}  // namespace qwcage
