#include <doctest.h>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "qwcage/spectrum.hpp"

using namespace qwcage;

TEST_CASE("closed-form chain bands, edge values") {
  // theta = pi/2, phi = omega = 0, f = 0, k = -pi/2: the inverse cosine closes
  const DcBands bands = dc_bands_analytic(kPi / 2, 0, 0, 0, 0, -kPi / 2);
  std::vector<double> disp(bands.dispersive.begin(), bands.dispersive.end());
  CHECK(circular_multiset_distance(
            disp, {3 * kPi / 4, 3 * kPi / 4, -kPi / 4, -kPi / 4}) < 1e-14);
  // beta - phi/2 = pi/2 makes the flat quartet theta-independent
  for (double theta : {0.2, 1.0, 2.5}) {
    const DcBands b = dc_bands_analytic(theta, 0, 0, kPi / 2, 0.3, 1.0);
    std::vector<double> flat(b.flat.begin(), b.flat.end());
    CHECK(circular_multiset_distance(
              flat, {kPi / 4, 3 * kPi / 4, -kPi / 4, -3 * kPi / 4}) < 1e-14);
  }
}

TEST_CASE("chain bands match the Bloch block spectrum") {
  test::Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const double t = rng.angle(), p = rng.angle(), w = rng.angle(), b = rng.angle();
    const double f = rng.unit(), k = rng.angle();
    const CoinAssignment coins = test::dc_family("G4", t, p, w, b);
    const auto numeric = quasi_energies(bloch_block_dc(coins, f, k));
    const auto formula = dc_bands_analytic(t, p, w, b, f, k).all();
    CHECK(circular_multiset_distance(numeric, formula) < 1e-9);
  }
}

TEST_CASE("chain Bloch blocks are unitary with vanishing diagonal quarters") {
  test::Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const CoinAssignment coins =
        test::dc_family(trial % 2 ? "G4" : "H4", rng.angle(), rng.angle(), rng.angle(),
                        rng.angle());
    const Eigen::MatrixXcd w = bloch_block_dc(coins, rng.unit(), rng.angle());
    CHECK(unitarity_error(w) < 1e-12);
    CHECK(w.block(0, 0, 4, 4).cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.block(4, 4, 4, 4).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(std::abs(w.determinant()) - 1.0) < 1e-10);
  }
}

TEST_CASE("Bloch spectra fold the real-space ring spectrum") {
  test::Rng rng(33);
  const int n = 5;
  const Lattice ring = Lattice::diamond_chain(n, Boundary::Periodic);
  const double f = rng.unit();
  const CoinAssignment coins =
      test::dc_family("G4", rng.angle(), rng.angle(), rng.angle(), rng.angle());
  const WalkOperator w = build_walk(ring, GaugeField::dc_single_edge(f), coins);
  const auto full = quasi_energies(Eigen::MatrixXcd(w.matrix));
  std::vector<double> folded;
  for (int j = 0; j < n; ++j) {
    const auto part = quasi_energies(bloch_block_dc(coins, f, kTwoPi * j / n));
    folded.insert(folded.end(), part.begin(), part.end());
  }
  CHECK(circular_multiset_distance(full, folded) < 1e-9);
}

TEST_CASE("eigenphase spread under a gauge twist vanishes") {
  test::Rng rng(34);
  const CoinAssignment coins =
      test::dc_family("G4", rng.angle(), rng.angle(), rng.angle(), rng.angle());
  const double f = rng.unit(), k = rng.angle();

  const Lattice mag = Lattice::diamond_chain(1, Boundary::Periodic);
  const Lattice chain = Lattice::diamond_chain(6, Boundary::Periodic);
  std::map<std::tuple<int, int, int>, double> chi;
  for (int kind = 0; kind < 3; ++kind) chi[{kind, 0, 0}] = rng.angle();
  const GaugeField g1 = GaugeField::dc_single_edge(f);
  const GaugeField g2 = g1.with_site_twist(1, 1, chi);
  const auto s1 = quasi_energies(
      Eigen::MatrixXcd(build_walk(chain, g1, coins).matrix));
  const auto s2 = quasi_energies(
      Eigen::MatrixXcd(build_walk(chain, g2, coins).matrix));
  CHECK(circular_multiset_distance(s1, s2) < 1e-9);
  (void)mag;
  (void)k;
}

TEST_CASE("hadamard-hub pinch levels are k-independent and exact") {
  test::Rng rng(35);
  for (int trial = 0; trial < 8; ++trial) {
    const double t = rng.angle(), p = rng.angle(), w = rng.angle(), b = rng.angle();
    const CoinAssignment coins = test::dc_family("H4", t, p, w, b);
    const auto formula = dc_pinch_energies_h4(t, p, b);
    const std::vector<double> expect(formula.begin(), formula.end());
    for (int i = 0; i < 10; ++i) {
      const auto numeric = quasi_energies(bloch_block_dc(coins, w / kTwoPi, rng.angle()));
      CHECK(circular_multiset_distance(numeric, expect) < 1e-9);
    }
  }
}

TEST_CASE("hadamard pinch closed form, frozen arguments") {
  // (pi/4, pi, 0): inner arccos arguments are (-1/sqrt2 +- sqrt(3/2))/2
  const double a_plus = (-1.0 / std::sqrt(2.0) + std::sqrt(1.5)) / 2.0;
  const double a_minus = (-1.0 / std::sqrt(2.0) - std::sqrt(1.5)) / 2.0;
  const auto eps = dc_pinch_energies_h4(kPi / 4, kPi, 0);
  std::vector<double> expect;
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0})
      for (double inner : {std::acos(a_plus), std::acos(a_minus)})
        expect.push_back(reduce_angle(kPi / 4 + s1 * kPi / 2 + kPi / 4 + s2 * inner / 2));
  CHECK(circular_multiset_distance({eps.begin(), eps.end()}, expect) < 1e-14);
  // theta = 0, beta - phi/2 = pi/2: arguments (1 +- 1)/2, arccos in {0, pi/2}
  const auto eps2 = dc_pinch_energies_h4(0, 0, kPi / 2);
  std::vector<double> expect2;
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0})
      for (double inner : {0.0, kPi / 2})
        expect2.push_back(reduce_angle(kPi / 4 + s1 * kPi / 2 + s2 * inner / 2));
  CHECK(circular_multiset_distance({eps2.begin(), eps2.end()}, expect2) < 1e-14);
}

TEST_CASE("quasi energies of the identity and error paths") {
  const auto eps = quasi_energies(Eigen::MatrixXcd::Identity(6, 6));
  for (double e : eps) CHECK(e == 0.0);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(4, 4) * 2.0;
  CHECK_THROWS_AS(quasi_energies(bad), std::invalid_argument);
}

TEST_CASE("the two squared-walk sub-blocks are isospectral") {
  test::Rng rng(36);
  const auto hub = bloch_hub_indices(GraphKind::DiamondChain, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const CoinAssignment coins =
        test::dc_family(trial % 2 ? "G4" : "H4", rng.angle(), rng.angle(), rng.angle(),
                        rng.angle());
    const Eigen::MatrixXcd w = bloch_block_dc(coins, rng.unit(), rng.angle());
    const auto [ha, hb] = w2_subblocks(w, hub);
    CHECK(circular_multiset_distance(quasi_energies(ha), quasi_energies(hb)) < 1e-10);
  }
}

TEST_CASE("bipartite fast path equals direct diagonalization") {
  test::Rng rng(37);
  const auto hub_dc = bloch_hub_indices(GraphKind::DiamondChain, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const CoinAssignment coins =
        test::dc_family("G4", rng.angle(), rng.angle(), rng.angle(), rng.angle());
    const Eigen::MatrixXcd w = bloch_block_dc(coins, rng.unit(), rng.angle());
    CHECK(circular_multiset_distance(quasi_energies(w),
                                     quasi_energies_bipartite(w, hub_dc)) < 1e-9);
  }
  const auto hub_t3 = bloch_hub_indices(GraphKind::Dice, 2);
  for (int trial = 0; trial < 4; ++trial) {
    const CoinAssignment coins = test::t3_family(rng.angle(), rng.angle());
    const Eigen::MatrixXcd w =
        bloch_block_t3_landau(coins, 1, 2, rng.angle(), rng.angle());
    CHECK(circular_multiset_distance(quasi_energies(w),
                                     quasi_energies_bipartite(w, hub_t3)) < 1e-9);
  }
}

TEST_CASE("dice Landau blocks: structure and validation") {
  const CoinAssignment coins = test::t3_family(0.9, 0.3);
  const Eigen::MatrixXcd w = bloch_block_t3_landau(coins, 0, 1, 0.4, -1.1);
  CHECK(w.rows() == 12);
  CHECK(unitarity_error(w) < 1e-12);
  CHECK(quasi_energies(w).size() == 12);
  CHECK(bloch_block_t3_landau(coins, 1, 4, 0, 0).rows() == 48);
  CHECK_THROWS_AS(bloch_block_t3_landau(test::dc_family("G4", 1, 0, 0, 0), 1, 2, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("dice pinch levels at half flux, doubly degenerate") {
  test::Rng rng(38);
  for (int trial = 0; trial < 5; ++trial) {
    const double alpha = rng.angle(), gamma = rng.angle();
    const CoinAssignment coins = test::t3_family(alpha, gamma);
    const auto levels = t3_pinch_energies(alpha);
    CHECK(levels.size() == 12);
    std::vector<double> doubled;
    for (double e : levels) {
      doubled.push_back(e);
      doubled.push_back(e);
    }
    for (int i = 0; i < 5; ++i) {
      const auto numeric =
          quasi_energies(bloch_block_t3_landau(coins, 1, 2, rng.angle(), rng.angle()));
      CHECK(circular_multiset_distance(numeric, doubled) < 1e-9);
    }
  }
}

TEST_CASE("dice pinch levels at alpha = 2 pi / 3 are commensurate") {
  for (double e : t3_pinch_energies(kTwoPi / 3)) {
    const double ratio = e / (kPi / 6.0);
    CHECK(std::abs(ratio - std::lround(ratio)) < 1e-12);
  }
}

TEST_CASE("periodic-third blocks agree with the Landau gauge") {
  test::Rng rng(39);
  for (const CoinAssignment& coins :
       {test::t3_family(1.3, 0.4), test::t3_family(1.3, 0.4, -kTwoPi / 3)}) {
    const Eigen::MatrixXcd w3 = bloch_block_t3_third(coins, -1.0 / 3.0, 0.7, -0.2);
    CHECK(w3.rows() == 12);
    CHECK(unitarity_error(w3) < 1e-12);
    for (int i = 0; i < 3; ++i) {
      const double k1 = rng.angle(), k2 = rng.angle();
      const auto landau = quasi_energies(bloch_block_t3_landau(coins, -1, 3, k1, k2));
      std::vector<double> third;
      for (int j = 0; j < 3; ++j) {
        const auto part = quasi_energies(bloch_block_t3_third(
            coins, -1.0 / 3.0, (k1 + kPi + kTwoPi * j) / 3.0, k2 - kPi / 3.0));
        third.insert(third.end(), part.begin(), part.end());
      }
      CHECK(circular_multiset_distance(landau, third) < 1e-9);
    }
  }
  CHECK_THROWS_AS(bloch_block_t3_third(test::t3_family(1, 0), 0.2, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("flux grid parsing") {
  CHECK(FluxGrid::parse("0.5").kind == FluxGrid::Kind::Single);
  const FluxGrid g = FluxGrid::parse("0:1:5");
  CHECK(g.values() == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
  const FluxGrid r = FluxGrid::parse("q<=3");
  const auto fr = r.fractions();
  CHECK(fr == std::vector<std::pair<int, int>>{{0, 1}, {1, 3}, {1, 2}, {2, 3}, {1, 1}});
  CHECK_THROWS_AS(FluxGrid::parse("q<=0"), std::invalid_argument);
  CHECK_THROWS_AS(FluxGrid::parse("0:1:0"), std::invalid_argument);
  CHECK_THROWS_AS(FluxGrid::parse("abc"), std::invalid_argument);
}

TEST_CASE("chain butterfly pinches at the predicted critical flux") {
  // grover hub: pinch at 1/2
  const auto scan_g = pinch_scan(GraphKind::DiamondChain,
                                 test::dc_family("G4", kPi / 4, kPi, 0, 0),
                                 FluxGrid::grid(0, 1, 101), 24, 2);
  CHECK(scan_g.pinched);
  CHECK(std::abs(scan_g.f_min - 0.5) < 1e-6);
  // hadamard hub with omega = 0: pinch at 0
  const auto scan_h = pinch_scan(GraphKind::DiamondChain,
                                 test::dc_family("H4", kPi / 4, 0, 0, 0),
                                 FluxGrid::grid(0, 1, 101), 24, 2);
  CHECK(scan_h.pinched);
  CHECK(std::min(scan_h.f_min, 1.0 - scan_h.f_min) < 1e-6);
}

TEST_CASE("butterfly point sets carry both lattice symmetries") {
  const CoinAssignment coins = test::dc_family("G4", 0.6, 1.9, 0, -0.8);
  const Butterfly b = dc_butterfly(coins, FluxGrid::grid(0, 1, 9), 8, 2);
  CHECK(b.points.size() == 9 * 8 * 8);
  // epsilon -> epsilon + pi maps each (f, k) octet onto itself
  for (size_t i = 0; i < b.points.size(); i += 8) {
    std::vector<double> eps, shifted;
    for (int j = 0; j < 8; ++j) {
      eps.push_back(b.points[i + j].eps);
      shifted.push_back(reduce_angle(b.points[i + j].eps + kPi));
    }
    CHECK(circular_multiset_distance(eps, shifted) < 1e-9);
  }
  // f -> f + 1 maps the first flux column onto the last
  std::vector<double> first, last;
  for (size_t i = 0; i < 64; ++i) {
    first.push_back(b.points[i].eps);
    last.push_back(b.points[b.points.size() - 64 + i].eps);
  }
  CHECK(circular_multiset_distance(first, last) < 1e-9);
}

TEST_CASE("dice butterfly has flat bands and a half-flux pinch") {
  const CoinAssignment coins = test::t3_family(kTwoPi / 3, test::kGamma3);
  const auto scan = pinch_scan(GraphKind::Dice, coins, FluxGrid::rationals(6), 8, 4);
  CHECK(scan.pinched);
  CHECK(scan.f_min == doctest::Approx(0.5));
  const Butterfly b = t3_butterfly(coins, FluxGrid::rationals(3), 8, 2);
  CHECK(!b.points.empty());
  for (const auto& p : b.points) CHECK(!p.has_k);
  // flat levels at f = 1/3: some sorted levels are k-independent
  std::vector<std::vector<double>> levels(36);
  const auto hub = bloch_hub_indices(GraphKind::Dice, 3);
  test::Rng rng(40);
  for (int i = 0; i < 4; ++i) {
    const auto eps = quasi_energies_bipartite(
        bloch_block_t3_landau(coins, 1, 3, rng.angle(), rng.angle()), hub);
    for (int j = 0; j < 36; ++j) levels[j].push_back(eps[j]);
  }
  int flat = 0;
  for (auto& level : levels)
    if (circular_diameter(level) < 1e-9) ++flat;
  CHECK(flat >= 2);
}

TEST_CASE("butterfly input validation") {
  const CoinAssignment coins = test::t3_family(1.0, 0.2);
  CHECK_THROWS_AS(t3_butterfly(coins, FluxGrid::grid(0, 1, 4), 4), std::invalid_argument);
  CHECK_THROWS_AS(FluxGrid::rationals(0), std::invalid_argument);
}

TEST_CASE("spectral symmetries of the chain walk") {
  test::Rng rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    const CoinAssignment coins =
        test::dc_family("G4", rng.angle(), rng.angle(), rng.angle(), rng.angle());
    const double f = rng.unit(), k = rng.angle();
    CHECK(symmetry_residual(coins, f, k, SymmetryId::FluxTranslation) < 1e-9);
    CHECK(symmetry_residual(coins, f, k, SymmetryId::EnergyTranslation) < 1e-9);
    CHECK(symmetry_residual(coins, f, k, SymmetryId::FluxMirror) < 1e-9);
    CHECK(symmetry_residual(coins, f, k, SymmetryId::EnergyMirror) < 1e-9);
  }
  CHECK(parse_symmetry("flux-mirror") == SymmetryId::FluxMirror);
  CHECK(!parse_symmetry("nope").has_value());
}

TEST_CASE("flat bands are independent of k, f, and conditionally of theta") {
  test::Rng rng(42);
  const double t = rng.angle(), p = rng.angle(), b = rng.angle();
  const CoinAssignment coins = test::dc_family("G4", t, p, 0, b);
  const auto flat = dc_bands_analytic(t, p, 0, b, 0, 0).flat;
  for (int i = 0; i < 12; ++i) {
    const double f = rng.unit(), k = rng.angle();
    const auto eps = quasi_energies(bloch_block_dc(coins, f, k));
    for (double level : flat) {
      double best = kPi;
      for (double e : eps) best = std::min(best, circ_dist(e, level));
      CHECK(best < 1e-10);
    }
  }
}
