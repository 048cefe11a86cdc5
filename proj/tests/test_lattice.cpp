#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "qwcage/io.hpp"
#include "qwcage/lattice.hpp"

using namespace qwcage;

TEST_CASE("basis enumeration counts and order") {
  const Lattice dc1 = Lattice::diamond_chain(1, Boundary::Periodic);
  CHECK(enumerate_basis(dc1).size() == 8);
  const Lattice t3 = Lattice::dice(1, 1, Boundary::Periodic);
  CHECK(enumerate_basis(t3).size() == 12);

  const Lattice dc3 = Lattice::diamond_chain(3, Boundary::Open);
  const auto basis = enumerate_basis(dc3);
  CHECK(basis.size() == 24);
  // cell-major, kinds A,B,C, then slots
  CHECK(basis[0] == BasisState{{0, 0}, SiteKind::HubA, 0});
  CHECK(basis[4] == BasisState{{0, 0}, SiteKind::RimB, 0});
  CHECK(basis[6] == BasisState{{0, 0}, SiteKind::RimC, 0});
  CHECK(basis[8] == BasisState{{1, 0}, SiteKind::HubA, 0});
  CHECK(basis[23] == BasisState{{2, 0}, SiteKind::RimC, 1});
  for (int i = 0; i < 24; ++i) CHECK(dc3.index(basis[i]) == i);
}

TEST_CASE("invalid extents are rejected") {
  CHECK_THROWS_AS(Lattice::diamond_chain(0, Boundary::Open), std::invalid_argument);
  CHECK_THROWS_AS(Lattice::dice(2, -1, Boundary::Open), std::invalid_argument);
}

TEST_CASE("coordination numbers") {
  const Lattice dc = Lattice::diamond_chain(2, Boundary::Periodic);
  CHECK(dc.coordination(SiteKind::HubA) == 4);
  CHECK(dc.coordination(SiteKind::RimB) == 2);
  const Lattice t3 = Lattice::dice(2, 2, Boundary::Periodic);
  CHECK(t3.coordination(SiteKind::HubA) == 6);
  CHECK(t3.coordination(SiteKind::RimC) == 3);
}

TEST_CASE("rim b right edge meets the hub left-down slot") {
  const Lattice dc = Lattice::diamond_chain(5, Boundary::Open);
  const auto v = dc.opposite({{2, 0}, SiteKind::RimB, 0});
  REQUIRE(v.has_value());
  CHECK(*v == BasisState{{3, 0}, SiteKind::HubA, 2});
}

TEST_CASE("opposite is an involution") {
  test::Rng rng(21);
  for (const Lattice& lat : {Lattice::diamond_chain(6, Boundary::Periodic),
                             Lattice::dice(4, 4, Boundary::Periodic)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const BasisState s = lat.state(rng.integer(0, lat.num_states() - 1));
      const auto v = lat.opposite(s);
      REQUIRE(v.has_value());
      CHECK(*lat.opposite(*v) == s);
    }
  }
}

TEST_CASE("dice hub adjacency matches the hand-built table") {
  // Slot directions from a hub: 30, 90, 150, 210, 270, 330 degrees; partners
  // tabulated once by hand from the tiling geometry.
  const Lattice t3 = Lattice::dice(5, 5, Boundary::Open);
  const Cell r{2, 2};
  const BasisState expected[6] = {
      {{2, 2}, SiteKind::RimB, 2}, {{1, 2}, SiteKind::RimC, 1},
      {{1, 2}, SiteKind::RimB, 0}, {{1, 1}, SiteKind::RimC, 0},
      {{2, 1}, SiteKind::RimB, 1}, {{2, 1}, SiteKind::RimC, 2}};
  for (int slot = 0; slot < 6; ++slot) {
    const auto v = t3.opposite({r, SiteKind::HubA, slot});
    REQUIRE(v.has_value());
    CHECK(*v == expected[slot]);
  }
}

TEST_CASE("open boundaries dangle") {
  const Lattice dc = Lattice::diamond_chain(3, Boundary::Open);
  CHECK(!dc.opposite({{2, 0}, SiteKind::RimB, 0}).has_value());   // right edge out
  CHECK(dc.opposite({{2, 0}, SiteKind::RimB, 1}).has_value());
  const Lattice ring = Lattice::diamond_chain(3, Boundary::Periodic);
  CHECK(ring.opposite({{2, 0}, SiteKind::RimB, 0}) ==
        BasisState{{0, 0}, SiteKind::HubA, 2});
}

TEST_CASE("every edge joins a hub to a rim") {
  for (const Lattice& lat : {Lattice::diamond_chain(4, Boundary::Periodic),
                             Lattice::dice(3, 3, Boundary::Periodic)}) {
    for (const Edge& e : lat.edges()) {
      const bool a_hub = e.a.kind == SiteKind::HubA;
      const bool b_hub = e.b.kind == SiteKind::HubA;
      CHECK(a_hub != b_hub);
    }
  }
}

TEST_CASE("edge and plaquette counts per cell") {
  const Lattice dc = Lattice::diamond_chain(4, Boundary::Periodic);
  CHECK(dc.edges().size() == 4 * 4);
  CHECK(dc.plaquettes().size() == 4);
  const Lattice t3 = Lattice::dice(3, 2, Boundary::Periodic);
  CHECK(t3.edges().size() == 6 * 6);
  CHECK(t3.plaquettes().size() == 3 * 6);
}

TEST_CASE("chain gauge marks a single edge") {
  const Lattice dc = Lattice::diamond_chain(4, Boundary::Open);
  const GaugeField gauge = GaugeField::dc_single_edge(0.3);
  int marked = 0;
  for (const Edge& e : dc.edges()) {
    const double phase = peierls_phase(gauge, dc, e.a, e.b);
    CHECK(phase == -peierls_phase(gauge, dc, e.b, e.a));
    if (phase != 0.0) {
      ++marked;
      CHECK(std::abs(std::abs(phase) - kTwoPi * 0.3) < 1e-15);
    }
  }
  CHECK(marked == 3);  // one marked edge per interior diamond
}

TEST_CASE("zero field means zero phases") {
  const Lattice t3 = Lattice::dice(3, 3, Boundary::Open);
  const GaugeField gauge = GaugeField::t3_landau_flux(0.0);
  for (const Edge& e : t3.edges()) CHECK(peierls_phase(gauge, t3, e.a, e.b) == 0.0);
}

TEST_CASE("peierls_phase rejects non-adjacent pairs") {
  const Lattice dc = Lattice::diamond_chain(4, Boundary::Open);
  const GaugeField gauge = GaugeField::dc_single_edge(0.1);
  CHECK_THROWS_AS(peierls_phase(gauge, dc, {{0, 0}, SiteKind::HubA, 0},
                                {{3, 0}, SiteKind::RimB, 1}),
                  std::invalid_argument);
}

TEST_CASE("plaquette fluxes read the gauge flux") {
  const Lattice dc = Lattice::diamond_chain(4, Boundary::Open);
  CHECK(plaquette_flux(GaugeField::dc_single_edge(0.3), dc, {{1, 0}, 0}) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK(plaquette_flux(GaugeField::dc_single_edge(0.0), dc, {{0, 0}, 0}) == 0.0);

  const Lattice t3 = Lattice::dice(4, 4, Boundary::Open);
  for (const auto& gauge :
       {GaugeField::t3_landau(1, 3), GaugeField::t3_landau_flux(0.37),
        GaugeField::t3_periodic_third(-1.0 / 3.0), GaugeField::t3_periodic_third(1.0 / 3.0)}) {
    for (const Plaquette& p : t3.plaquettes())
      CHECK(std::abs(reduce_flux(plaquette_flux(gauge, t3, p) - gauge.flux())) < 1e-12);
  }
}

TEST_CASE("periodic-third gauge requires flux one third") {
  CHECK_THROWS_AS(GaugeField::t3_periodic_third(0.25), std::invalid_argument);
  CHECK_THROWS_AS(GaugeField::t3_landau(2, 4), std::invalid_argument);
}

TEST_CASE("periodic-third gauge is invariant under both unit translations") {
  const Lattice t3 = Lattice::dice(5, 5, Boundary::Open);
  const GaugeField gauge = GaugeField::t3_periodic_third(-1.0 / 3.0);
  for (const Edge& e : Lattice::dice(2, 2, Boundary::Open).edges()) {
    const double base = peierls_phase(gauge, t3, e.a, e.b);
    for (auto [dm, dn] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{2, 1}}) {
      Edge shifted = e;
      shifted.a.cell.m += dm;
      shifted.a.cell.n += dn;
      shifted.b.cell.m += dm;
      shifted.b.cell.n += dn;
      CHECK(peierls_phase(gauge, t3, shifted.a, shifted.b) ==
            doctest::Approx(base).epsilon(1e-13));
    }
  }
}

TEST_CASE("cell distances") {
  const Lattice dc = Lattice::diamond_chain(10, Boundary::Periodic);
  CHECK(dc.cell_distance({1, 0}, {4, 0}) == 3);
  CHECK(dc.cell_distance({0, 0}, {9, 0}) == 1);  // wraps
  const Lattice t3 = Lattice::dice(9, 9, Boundary::Open);
  CHECK(t3.cell_distance({4, 4}, {4, 4}) == 0);
  CHECK(t3.cell_distance({4, 4}, {5, 4}) == 1);
  CHECK(t3.cell_distance({4, 4}, {5, 3}) == 1);   // t1 - t2 step
  CHECK(t3.cell_distance({4, 4}, {6, 3}) == 2);
  CHECK(t3.cell_distance({4, 4}, {3, 2}) == 3);
}

TEST_CASE("graph distances via adjacency") {
  const Lattice dc = Lattice::diamond_chain(5, Boundary::Open);
  const auto dist = dc.graph_distances({{2, 0}, SiteKind::HubA});
  CHECK(dist[dc.site_index({{2, 0}, SiteKind::HubA})] == 0);
  CHECK(dist[dc.site_index({{2, 0}, SiteKind::RimB})] == 1);
  CHECK(dist[dc.site_index({{3, 0}, SiteKind::HubA})] == 2);
  CHECK(dist[dc.site_index({{0, 0}, SiteKind::HubA})] == 4);
}

TEST_CASE("graph export lists edges with phases") {
  const Lattice dc = Lattice::diamond_chain(3, Boundary::Open);
  const Json j = graph_json(dc, GaugeField::dc_single_edge(0.25));
  CHECK(j["schema"] == 1);
  CHECK(j["edges"].size() == dc.edges().size());
  CHECK(j["plaquettes"].size() == 2);
  for (const auto& p : j["plaquettes"]) CHECK(double(p["flux"]) == doctest::Approx(0.25));
}
