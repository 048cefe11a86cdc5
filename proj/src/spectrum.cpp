#include "qwcage/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qwcage/parallel.hpp"

namespace qwcage {

namespace {

int floordiv(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

/// Dense W(k) over a magnetic cell of `mag.cells_x()` lattice cells along t1
/// (one along t2); k1, k2 are Bloch phases per magnetic translation.
Eigen::MatrixXcd bloch_block(const Lattice& mag, const GaugeField& gauge,
                             const CoinAssignment& assignment, double k1, double k2) {
  require(assignment.hub_override.empty(),
          "bloch blocks require a strictly periodic coin assignment");
  const int mag_q = mag.cells_x();
  const int dim = mag.num_states();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const BasisState u = mag.state(i);
    const BasisState v = mag.opposite_unbounded(u);
    const int d1 = floordiv(v.cell.m, mag_q);
    const int d2 = v.cell.n;
    const BasisState folded{{v.cell.m - d1 * mag_q, 0}, v.kind, v.slot};
    const double theta = gauge.phase(u.site(), v.site());
    s(mag.index(folded), i) = std::polar(1.0, theta - (k1 * d1 + k2 * d2));
  }
  Eigen::MatrixXcd c = Eigen::MatrixXcd(assemble_coin_operator(assignment, mag));
  return s * c;
}

std::vector<double> k_line(int n) {
  require(n >= 1, "need at least one k sample");
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = -kPi + kTwoPi * j / n;
  return out;
}

std::pair<int, int> k_grid_dims(int n) {
  require(n >= 1, "need at least one k sample");
  int n1 = int(std::ceil(std::sqrt(double(n))));
  int n2 = (n + n1 - 1) / n1;
  return {n1, n2};
}

std::vector<double> sorted_eigenphases(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  solver.compute(m, /*computeEigenvectors=*/false);
  std::vector<double> eps(m.rows());
  for (int i = 0; i < m.rows(); ++i) eps[i] = reduce_angle(std::arg(solver.eigenvalues()[i]));
  std::sort(eps.begin(), eps.end());
  return eps;
}

}  // namespace

Eigen::MatrixXcd bloch_block_dc(const CoinAssignment& assignment, double f, double k) {
  const Lattice mag = Lattice::diamond_chain(1, Boundary::Periodic);
  assignment.validate_for(mag);
  return bloch_block(mag, GaugeField::dc_single_edge(f), assignment, k, 0.0);
}

Eigen::MatrixXcd bloch_block_t3_landau(const CoinAssignment& assignment, int p, int q,
                                       double k1, double k2) {
  const GaugeField gauge = GaugeField::t3_landau(p, q);
  const Lattice mag = Lattice::dice(q, 1, Boundary::Periodic);
  assignment.validate_for(mag);
  return bloch_block(mag, gauge, assignment, k1, k2);
}

Eigen::MatrixXcd bloch_block_t3_third(const CoinAssignment& assignment, double f,
                                      double k1, double k2) {
  const GaugeField gauge = GaugeField::t3_periodic_third(f);
  const Lattice mag = Lattice::dice(1, 1, Boundary::Periodic);
  assignment.validate_for(mag);
  return bloch_block(mag, gauge, assignment, k1, k2);
}

std::vector<double> quasi_energies(const Eigen::MatrixXcd& block, double unitary_tol) {
  const int n = int(block.rows());
  require(n == block.cols(), "quasi_energies: block must be square");
  double err = 0.0;
  if (n <= 64) {
    err = unitarity_error(block);
  } else {
    for (int j : {0, n / 3, (2 * n) / 3, n - 1}) {
      Eigen::VectorXcd col = block.adjoint() * (block * Eigen::VectorXcd::Unit(n, j));
      col[j] -= Complex(1, 0);
      err = std::max(err, col.cwiseAbs().maxCoeff());
    }
  }
  if (err >= unitary_tol)
    throw std::invalid_argument("quasi_energies: block is not unitary (err=" +
                                std::to_string(err) + ")");
  return sorted_eigenphases(block);
}

std::vector<int> bloch_hub_indices(GraphKind graph, int magnetic_cells) {
  const int spc = graph == GraphKind::DiamondChain ? 8 : 12;
  const int hub = graph == GraphKind::DiamondChain ? 4 : 6;
  std::vector<int> idx;
  idx.reserve(hub * magnetic_cells);
  for (int c = 0; c < magnetic_cells; ++c)
    for (int s = 0; s < hub; ++s) idx.push_back(c * spc + s);
  return idx;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> w2_subblocks(
    const Eigen::MatrixXcd& block, const std::vector<int>& hub_indices) {
  const int n = int(block.rows());
  std::vector<char> is_hub(n, 0);
  for (int i : hub_indices) is_hub[i] = 1;
  std::vector<int> rim;
  rim.reserve(n - hub_indices.size());
  for (int i = 0; i < n; ++i)
    if (!is_hub[i]) rim.push_back(i);
  const Eigen::MatrixXcd w2 = block * block;
  auto take = [&](const std::vector<int>& rows) {
    Eigen::MatrixXcd sub(rows.size(), rows.size());
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < rows.size(); ++j) sub(i, j) = w2(rows[i], rows[j]);
    return sub;
  };
  return {take(hub_indices), take(rim)};
}

std::vector<double> quasi_energies_bipartite(const Eigen::MatrixXcd& block,
                                             const std::vector<int>& hub_indices) {
  const int n = int(block.rows());
  const int h = int(hub_indices.size());
  require(2 * h == n, "bipartite fast path needs half the basis on hubs");
  const Eigen::MatrixXcd w2 = block * block;
  Eigen::MatrixXcd sub(h, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) sub(i, j) = w2(hub_indices[i], hub_indices[j]);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  solver.compute(sub, false);
  std::vector<double> eps;
  eps.reserve(n);
  for (int i = 0; i < h; ++i) {
    const double e = reduce_angle(std::arg(solver.eigenvalues()[i]));
    eps.push_back(e / 2.0);
    eps.push_back(reduce_angle(e / 2.0 + kPi));
  }
  std::sort(eps.begin(), eps.end());
  return eps;
}

// ---------------------------------------------------------------------------
// Closed forms

std::vector<double> DcBands::all() const {
  std::vector<double> out(dispersive.begin(), dispersive.end());
  out.insert(out.end(), flat.begin(), flat.end());
  std::sort(out.begin(), out.end());
  return out;
}

DcBands dc_bands_analytic(double theta, double phi, double omega, double beta,
                          double f, double k) {
  const double x1 = std::sin(theta) * std::cos(kPi * f - omega / 2.0) *
                    std::cos(kPi * f - omega / 2.0 + k + (kPi - phi) / 2.0);
  const double cd = clamped_acos(x1);
  const double x2 = std::cos(beta - phi / 2.0) * std::cos(theta);
  const double cf = clamped_acos(x2);
  DcBands bands{};
  int i = 0, j = 0;
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0}) {
      bands.dispersive[i++] = reduce_angle((phi + kPi) / 4.0 + s1 * cd / 2.0 + s2 * kPi / 2.0);
      bands.flat[j++] = reduce_angle(s1 * kPi / 2.0 + phi / 4.0 + s2 * cf / 2.0);
    }
  return bands;
}

std::array<double, 8> dc_pinch_energies_h4(double theta, double phi, double beta) {
  const double sb = std::sin(beta - phi / 2.0);
  const double root =
      std::sqrt(2.0 * std::sin(theta) * std::sin(theta) +
                std::cos(theta) * std::cos(theta) * sb * sb);
  std::array<double, 8> eps{};
  int i = 0;
  for (double s3 : {1.0, -1.0}) {
    const double inner = clamped_acos((sb * std::cos(theta) + s3 * root) / 2.0);
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0})
        eps[i++] = reduce_angle(kPi / 4.0 + s1 * kPi / 2.0 + phi / 4.0 + s2 * inner / 2.0);
  }
  std::sort(eps.begin(), eps.end());
  return eps;
}

std::vector<double> t3_pinch_energies(double alpha) {
  const double a = clamped_acos((2.0 + std::cos(alpha)) / 3.0);
  std::vector<double> eps = {0.0, kPi / 2.0, -kPi / 2.0, kPi};
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0}) {
      eps.push_back(s1 * kPi / 2.0 + s2 * alpha / 2.0);
      eps.push_back(s1 * kPi / 2.0 + s2 * a / 2.0);
    }
  for (double& e : eps) e = reduce_angle(e);
  std::sort(eps.begin(), eps.end());
  return eps;
}

// ---------------------------------------------------------------------------
// Flux sampling

FluxGrid FluxGrid::single(double f) {
  FluxGrid g;
  g.kind = Kind::Single;
  g.value = f;
  return g;
}

FluxGrid FluxGrid::grid(double lo, double hi, int count) {
  require(count >= 1, "flux grid needs at least one point");
  FluxGrid g;
  g.kind = Kind::Grid;
  g.lo = lo;
  g.hi = hi;
  g.count = count;
  return g;
}

FluxGrid FluxGrid::rationals(int qmax) {
  require(qmax >= 1, "rational flux sampling needs qmax >= 1");
  FluxGrid g;
  g.kind = Kind::Rationals;
  g.qmax = qmax;
  return g;
}

FluxGrid FluxGrid::parse(const std::string& text) {
  require(!text.empty(), "empty flux spec");
  if (text.rfind("q<=", 0) == 0) {
    size_t used = 0;
    int q = std::stoi(text.substr(3), &used);
    require(used == text.size() - 3, "bad flux spec '" + text + "'");
    return rationals(q);
  }
  if (text.find(':') != std::string::npos) {
    const size_t c1 = text.find(':');
    const size_t c2 = text.find(':', c1 + 1);
    require(c2 != std::string::npos, "flux grid must be lo:hi:count");
    size_t u1 = 0, u2 = 0, u3 = 0;
    const std::string a = text.substr(0, c1);
    const std::string b = text.substr(c1 + 1, c2 - c1 - 1);
    const std::string c = text.substr(c2 + 1);
    const double lo = std::stod(a, &u1);
    const double hi = std::stod(b, &u2);
    const int n = std::stoi(c, &u3);
    require(u1 == a.size() && u2 == b.size() && u3 == c.size(),
            "bad flux spec '" + text + "'");
    return grid(lo, hi, n);
  }
  size_t used = 0;
  double v = std::stod(text, &used);
  require(used == text.size(), "bad flux spec '" + text + "'");
  return single(v);
}

std::vector<double> FluxGrid::values() const {
  switch (kind) {
    case Kind::Single: return {value};
    case Kind::Grid: {
      std::vector<double> out(count);
      for (int i = 0; i < count; ++i)
        out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
      return out;
    }
    case Kind::Rationals: {
      std::vector<double> out;
      for (auto [p, q] : fractions()) out.push_back(double(p) / q);
      return out;
    }
  }
  return {};
}

std::vector<std::pair<int, int>> FluxGrid::fractions() const {
  require(kind == Kind::Rationals, "fractions() needs rational sampling");
  std::vector<std::pair<int, int>> out;
  for (int q = 1; q <= qmax; ++q)
    for (int p = 0; p <= q; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    return a.first * int64_t(b.second) < b.first * int64_t(a.second);
  });
  return out;
}

std::string FluxGrid::str() const {
  char buf[96];
  switch (kind) {
    case Kind::Single: std::snprintf(buf, sizeof buf, "%.12g", value); break;
    case Kind::Grid: std::snprintf(buf, sizeof buf, "%.12g:%.12g:%d", lo, hi, count); break;
    case Kind::Rationals: std::snprintf(buf, sizeof buf, "q<=%d", qmax); break;
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Butterflies and pinch detection

Butterfly dc_butterfly(const CoinAssignment& assignment, const FluxGrid& flux,
                       int k_samples, int threads) {
  const auto fs = flux.values();
  require(!fs.empty(), "empty flux grid");
  const auto ks = k_line(k_samples);
  const auto hub = bloch_hub_indices(GraphKind::DiamondChain, 1);
  Butterfly b{{}, GraphKind::DiamondChain, flux, k_samples};
  std::vector<std::vector<ButterflyPoint>> rows(fs.size());
  parallel_for(int(fs.size()), threads, [&](int i) {
    std::vector<ButterflyPoint>& row = rows[i];
    row.reserve(ks.size() * 8);
    for (double k : ks) {
      const auto eps = quasi_energies_bipartite(bloch_block_dc(assignment, fs[i], k), hub);
      for (double e : eps) row.push_back({fs[i], k, e, true});
    }
  });
  for (auto& row : rows) b.points.insert(b.points.end(), row.begin(), row.end());
  return b;
}

Butterfly t3_butterfly(const CoinAssignment& assignment, const FluxGrid& flux,
                       int k_samples, int threads) {
  require(flux.kind == FluxGrid::Kind::Rationals,
          "dice butterfly samples rational fluxes p/q (use q<=Q)");
  const auto fracs = flux.fractions();
  const auto [n1, n2] = k_grid_dims(k_samples);
  const auto ks1 = k_line(n1);
  const auto ks2 = k_line(n2);
  Butterfly b{{}, GraphKind::Dice, flux, k_samples};
  std::vector<std::vector<ButterflyPoint>> rows(fracs.size());
  parallel_for(int(fracs.size()), threads, [&](int i) {
    const auto [p, q] = fracs[i];
    const double f = double(p) / q;
    const auto hub = bloch_hub_indices(GraphKind::Dice, q);
    std::vector<ButterflyPoint>& row = rows[i];
    for (double k1 : ks1)
      for (double k2 : ks2) {
        const auto eps =
            quasi_energies_bipartite(bloch_block_t3_landau(assignment, p, q, k1, k2), hub);
        for (double e : eps) row.push_back({f, 0.0, e, false});
      }
  });
  for (auto& row : rows) b.points.insert(b.points.end(), row.begin(), row.end());
  return b;
}

PinchScan pinch_scan(GraphKind graph, const CoinAssignment& assignment,
                     const FluxGrid& flux, int k_samples, int threads,
                     double threshold) {
  // Spread = worst multiset distance of any k-spectrum to the first one;
  // zero exactly when every band is k-independent, and immune to the
  // branch cut (sorted-level bookkeeping breaks when a pinch level sits
  // at +-pi).
  PinchScan scan;
  if (graph == GraphKind::DiamondChain) {
    scan.flux = flux.values();
    require(!scan.flux.empty(), "empty flux grid");
    const auto ks = k_line(k_samples);
    const auto hub = bloch_hub_indices(graph, 1);
    scan.spread.assign(scan.flux.size(), 0.0);
    parallel_for(int(scan.flux.size()), threads, [&](int i) {
      std::vector<double> first;
      double worst = 0.0;
      for (double k : ks) {
        const auto eps =
            quasi_energies_bipartite(bloch_block_dc(assignment, scan.flux[i], k), hub);
        if (first.empty())
          first = eps;
        else
          worst = std::max(worst, circular_multiset_distance(first, eps));
      }
      scan.spread[i] = worst;
    });
  } else {
    const auto fracs = flux.fractions();
    const auto [n1, n2] = k_grid_dims(k_samples);
    const auto ks1 = k_line(n1);
    const auto ks2 = k_line(n2);
    scan.flux.resize(fracs.size());
    scan.spread.assign(fracs.size(), 0.0);
    parallel_for(int(fracs.size()), threads, [&](int i) {
      const auto [p, q] = fracs[i];
      scan.flux[i] = double(p) / q;
      const auto hub = bloch_hub_indices(graph, q);
      std::vector<double> first;
      double worst = 0.0;
      for (double k1 : ks1)
        for (double k2 : ks2) {
          const auto eps = quasi_energies_bipartite(
              bloch_block_t3_landau(assignment, p, q, k1, k2), hub);
          if (first.empty())
            first = eps;
          else
            worst = std::max(worst, circular_multiset_distance(first, eps));
        }
      scan.spread[i] = worst;
    });
  }
  const auto it = std::min_element(scan.spread.begin(), scan.spread.end());
  const int i = int(it - scan.spread.begin());
  scan.f_min = scan.flux[i];
  scan.spread_min = *it;
  // Parabolic refinement on squared spreads (the spread closes linearly in
  // f at a pinch, so its square is smooth there), then a direct evaluation
  // at the refined flux.
  if (graph == GraphKind::DiamondChain && i > 0 && i + 1 < int(scan.flux.size())) {
    const double y0 = scan.spread[i - 1] * scan.spread[i - 1];
    const double y1 = scan.spread[i] * scan.spread[i];
    const double y2 = scan.spread[i + 1] * scan.spread[i + 1];
    const double denom = y0 - 2 * y1 + y2;
    if (denom > 0) {
      const double h = scan.flux[i + 1] - scan.flux[i];
      scan.f_min = scan.flux[i] - 0.5 * h * (y2 - y0) / denom;
      const auto ks = k_line(k_samples);
      const auto hub = bloch_hub_indices(graph, 1);
      std::vector<double> first;
      double worst = 0.0;
      for (double k : ks) {
        const auto eps =
            quasi_energies_bipartite(bloch_block_dc(assignment, scan.f_min, k), hub);
        if (first.empty())
          first = eps;
        else
          worst = std::max(worst, circular_multiset_distance(first, eps));
      }
      scan.spread_min = std::min(scan.spread_min, worst);
    }
  }
  scan.pinched = scan.spread_min < threshold;
  return scan;
}

std::optional<SymmetryId> parse_symmetry(const std::string& name) {
  if (name == "flux-translation") return SymmetryId::FluxTranslation;
  if (name == "energy-translation") return SymmetryId::EnergyTranslation;
  if (name == "flux-mirror") return SymmetryId::FluxMirror;
  if (name == "energy-mirror") return SymmetryId::EnergyMirror;
  return std::nullopt;
}

double symmetry_residual(const CoinAssignment& assignment, double f, double k,
                         SymmetryId id) {
  const auto pb = assignment.rim_b.params_u2();
  const auto pc = assignment.rim_c.params_u2();
  require(pb.has_value() && pc.has_value(),
          "symmetry_residual: rim coins must be U2 family");
  const double phi = pc->phi;
  const double omega = pc->omega;
  const auto spec = [&](double ff, double kk) {
    return quasi_energies(bloch_block_dc(assignment, ff, kk));
  };
  const std::vector<double> base = spec(f, k);
  std::vector<double> image;
  switch (id) {
    case SymmetryId::FluxTranslation:
      image = spec(f + 1.0, k);
      break;
    case SymmetryId::EnergyTranslation:
      image = base;
      for (double& e : image) e = reduce_angle(e + kPi);
      break;
    case SymmetryId::FluxMirror:
      image = spec(-f + omega / kPi, -k - kPi + phi);
      break;
    case SymmetryId::EnergyMirror:
      image = spec(f, k + kPi);
      for (double& e : image) e = reduce_angle(-e + phi / 2.0);
      break;
  }
  return circular_multiset_distance(base, image);
}

}  // namespace qwcage
