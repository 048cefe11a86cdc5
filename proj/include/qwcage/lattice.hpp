#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qwcage/common.hpp"

namespace qwcage {

enum class GraphKind { DiamondChain, Dice };
enum class Boundary { Periodic, Open };

enum class SiteKind : int { HubA = 0, RimB = 1, RimC = 2 };

inline int kind_index(SiteKind k) { return static_cast<int>(k); }
inline char kind_char(SiteKind k) { return "ABC"[kind_index(k)]; }

struct Cell {
  int m = 0;
  int n = 0;
  auto operator<=>(const Cell&) const = default;
};

struct SiteId {
  Cell cell;
  SiteKind kind = SiteKind::HubA;
  auto operator<=>(const SiteId&) const = default;
};

/// One Hilbert-space basis vector: a site plus the index of one of its
/// incident directed edges.
struct BasisState {
  Cell cell;
  SiteKind kind = SiteKind::HubA;
  int slot = 0;
  auto operator<=>(const BasisState&) const = default;
  SiteId site() const { return {cell, kind}; }
};

std::string to_string(const BasisState& s);

/// An undirected edge given by its two endpoint states.
struct Edge {
  BasisState a;
  BasisState b;
};

struct Plaquette {
  Cell cell;
  int face = 0;  // 0 for the diamond chain; 0..2 for the dice lattice
};

/// Diamond-chain or dice (T3) lattice on a finite extent, with the slot
/// conventions fixed once in adjacency tables:
///   DC rims: slot 0 = right edge, slot 1 = left edge.
///   DC hubs: slot 0 = right-up, then anti-clockwise (left-up, left-down,
///            right-down); rim b sits below the hub row, rim c above.
///   T3 hubs and rim b: slots numbered anti-clockwise starting from the
///       edge closest to the +x axis. Rim c (the mirror sublattice of b)
///       numbered clockwise from the same starting edge.
class Lattice {
 public:
  static Lattice diamond_chain(int cells, Boundary boundary);
  static Lattice dice(int cells_x, int cells_y, Boundary boundary);

  GraphKind graph() const { return graph_; }
  Boundary boundary() const { return boundary_; }
  int cells_x() const { return nx_; }
  int cells_y() const { return ny_; }
  int num_cells() const { return nx_ * ny_; }
  int states_per_cell() const { return graph_ == GraphKind::DiamondChain ? 8 : 12; }
  int num_states() const { return num_cells() * states_per_cell(); }
  int num_sites() const { return num_cells() * 3; }
  int coordination(SiteKind kind) const;

  bool contains(Cell c) const { return c.m >= 0 && c.m < nx_ && c.n >= 0 && c.n < ny_; }
  Cell wrap(Cell c) const;
  int cell_index(Cell c) const { return c.m * ny_ + c.n; }

  /// Canonical index of a state: cell-major, then kinds A,B,C, then slot.
  int index(const BasisState& s) const;
  BasisState state(int index) const;
  int site_index(const SiteId& s) const { return cell_index(s.cell) * 3 + kind_index(s.kind); }
  SiteId site(int index) const;

  /// Partner state across the same undirected edge, on the infinite lattice
  /// (result cell may lie outside the extent).
  BasisState opposite_unbounded(const BasisState& s) const;

  /// Partner state on the finite lattice; nullopt for a dangling edge on an
  /// open boundary.
  std::optional<BasisState> opposite(const BasisState& s) const;

  /// Cartesian position (unit lattice constant).
  Eigen::Vector2d site_position(const SiteId& s) const;

  /// Every undirected edge once; a is the canonical (rim-side) endpoint.
  std::vector<Edge> edges() const;

  std::vector<Plaquette> plaquettes() const;

  /// Anti-clockwise site loop bounding a plaquette (4 sites, closing hop
  /// implied). Cells are given unwrapped.
  std::array<SiteId, 4> plaquette_loop(const Plaquette& p) const;

  /// Distance in unit cells: |dm| on the chain, triangular-lattice word
  /// metric on T3. Periodic extents minimize over images.
  int cell_distance(Cell a, Cell b) const;

  /// Edge-graph distances from one site to all sites (BFS).
  std::vector<int> graph_distances(const SiteId& from) const;

 private:
  Lattice(GraphKind g, int nx, int ny, Boundary b);
  GraphKind graph_;
  Boundary boundary_;
  int nx_;
  int ny_;
};

std::vector<BasisState> enumerate_basis(const Lattice& lattice);

enum class GaugeKind { DcSingleEdge, T3Landau, T3PeriodicThird };

/// Assigns Peierls phases to directed edges. Site twists (for gauge
/// invariance tests) add chi(to) - chi(from) on top of the base table.
class GaugeField {
 public:
  static GaugeField dc_single_edge(double f);
  /// Landau-type gauge, phases periodic along t2 and, for f = p/q, periodic
  /// mod 2*pi under q cells along t1.
  static GaugeField t3_landau(int p, int q);
  /// Same gauge at an arbitrary real flux (open-boundary use).
  static GaugeField t3_landau_flux(double f);
  /// Cell-periodic gauge, valid only at f = +1/3 or -1/3.
  static GaugeField t3_periodic_third(double f);

  GraphKind graph() const { return graph_; }
  GaugeKind kind() const { return kind_; }
  double flux() const { return f_; }
  double reduced_flux() const { return reduce_flux(f_); }
  int landau_p() const { return p_; }
  int landau_q() const { return q_; }

  /// Phase (radians) acquired when hopping from one site to an adjacent
  /// one, evaluated on the given (unwrapped) cell representatives.
  double phase(const SiteId& from, const SiteId& to) const;

  /// Copy with an added per-site phase twist chi(kind, m mod pm, n mod pn).
  GaugeField with_site_twist(int period_m, int period_n,
                             std::map<std::tuple<int, int, int>, double> chi) const;

 private:
  GaugeField(GraphKind g, GaugeKind k, double f) : graph_(g), kind_(k), f_(f) {}
  double base_phase(const SiteId& from, const SiteId& to) const;
  double twist(const SiteId& s) const;

  GraphKind graph_;
  GaugeKind kind_;
  double f_ = 0.0;
  int p_ = 0;
  int q_ = 1;
  int twist_pm_ = 1;
  int twist_pn_ = 1;
  std::map<std::tuple<int, int, int>, double> twist_chi_;
};

/// Peierls phase between two adjacent basis states; throws on non-adjacent
/// pairs. Antisymmetric under reversal.
double peierls_phase(const GaugeField& gauge, const Lattice& lattice,
                     const BasisState& from, const BasisState& to);

/// Oriented phase sum around a plaquette divided by 2*pi, reduced to
/// (-1/2, 1/2].
double plaquette_flux(const GaugeField& gauge, const Lattice& lattice,
                      const Plaquette& plaquette);

}  // namespace qwcage
