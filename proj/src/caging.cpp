#include "qwcage/caging.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "qwcage/parallel.hpp"

namespace qwcage {

namespace {
constexpr double kSupportEps = 1e-12;
}

double ArnoldiResult::relative_b(int one_based) const {
  require(one_based >= 1 && one_based <= b.size(), "relative_b: index out of range");
  const double denom = b.head(one_based).maxCoeff();
  return denom > 0 ? b(one_based - 1) / denom : 0.0;
}

ArnoldiResult arnoldi(const WalkOperator& walk, const Eigen::VectorXcd& psi0,
                      int max_iter, double tol) {
  require(int(psi0.size()) == walk.dim, "arnoldi: state dimension mismatch");
  const double norm0 = psi0.norm();
  require(norm0 > 1e-14, "arnoldi: zero initial vector");
  max_iter = std::min(max_iter, walk.dim);
  require(max_iter >= 1, "arnoldi: max_iter must be positive");

  ArnoldiResult res;
  res.tol = tol;
  Eigen::MatrixXcd q(walk.dim, max_iter + 1);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(max_iter, max_iter);
  Eigen::VectorXd b(max_iter);
  q.col(0) = psi0 / norm0;

  int m = 0;
  double bmax = 0.0;
  for (int n = 0; n < max_iter; ++n) {
    Eigen::VectorXcd w = walk.matrix * q.col(n);
    // Two-pass Gram-Schmidt keeps the Krylov basis orthonormal to ~1e-15.
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= n; ++j) {
        const Complex c = q.col(j).dot(w);
        w -= c * q.col(j);
        if (n < max_iter) h(j, n) += c;
      }
    const double bn = w.norm();
    b(n) = bn;
    m = n + 1;
    const double denom = n == 0 ? 1.0 : bmax;
    // The second clause stops on numerically exact zeros even at tol = 0;
    // continuing would orthonormalize round-off noise.
    if (bn / denom < tol || bn < 1e-13 * std::max(1.0, bmax)) {
      res.termination = n + 1;
      break;
    }
    bmax = std::max(bmax, bn);
    if (n + 1 < max_iter) {
      q.col(n + 1) = w / bn;
      h(n + 1, n) = bn;
    }
  }
  res.krylov = q.leftCols(m);
  res.b = b.head(m);
  res.hessenberg = h.topLeftCorner(m, m);
  return res;
}

CageReport detect_cage(const Lattice& lattice, const WalkOperator& walk,
                       const BasisState& initial, double tol, int verify_steps) {
  CageReport report;
  report.initial = initial;
  const Eigen::VectorXcd psi0 = basis_vector(lattice, initial);
  report.recursion = arnoldi(walk, psi0, walk.dim, tol);
  report.caged = report.recursion.termination.has_value();
  report.n_c = report.caged ? *report.recursion.termination : 0;
  if (!report.caged) return report;

  std::set<int> support_idx;
  for (int c = 0; c < report.recursion.krylov.cols(); ++c) {
    const auto prob = site_probabilities(lattice, report.recursion.krylov.col(c));
    for (int s = 0; s < int(prob.size()); ++s)
      if (prob[s] > kSupportEps) support_idx.insert(s);
  }
  report.radius = 0;
  for (int s : support_idx) {
    const SiteId site = lattice.site(s);
    report.support.push_back(site);
    report.radius =
        std::max(report.radius, lattice.cell_distance(initial.cell, site.cell));
  }

  Eigen::VectorXcd psi = psi0;
  for (int t = 0; t < verify_steps; ++t) {
    psi = walk.matrix * psi;
    const auto prob = site_probabilities(lattice, psi);
    double leak = 0.0;
    for (int s = 0; s < int(prob.size()); ++s)
      if (!support_idx.count(s)) leak += prob[s];
    report.max_leak = std::max(report.max_leak, leak);
  }
  return report;
}

CriticalFluxScan critical_flux_scan(const Lattice& lattice,
                                    const CoinAssignment& assignment,
                                    const BasisState& initial,
                                    const std::vector<double>& flux_grid,
                                    int threads) {
  require(!flux_grid.empty(), "critical_flux_scan: empty flux grid");
  CriticalFluxScan scan;
  scan.n_star = lattice.graph() == GraphKind::DiamondChain ? 8 : 12;
  scan.flux = flux_grid;
  scan.b.assign(flux_grid.size(), 0.0);
  parallel_for(int(flux_grid.size()), threads, [&](int i) {
    const GaugeField gauge = lattice.graph() == GraphKind::DiamondChain
                                 ? GaugeField::dc_single_edge(flux_grid[i])
                                 : GaugeField::t3_landau_flux(flux_grid[i]);
    const WalkOperator w = build_walk(lattice, gauge, assignment);
    const ArnoldiResult res = arnoldi(w, basis_vector(lattice, initial), scan.n_star, 0.0);
    scan.b[i] = res.b.size() >= scan.n_star ? res.relative_b(scan.n_star) : 0.0;
  });
  for (size_t i = 1; i + 1 < scan.b.size(); ++i) {
    if (!(scan.b[i] < scan.b[i - 1] && scan.b[i] <= scan.b[i + 1])) continue;
    // Refine on b^2, which is smooth through a conical minimum. A node that
    // already sits at (numerical) zero is the minimum.
    const double y0 = scan.b[i - 1] * scan.b[i - 1];
    const double y1 = scan.b[i] * scan.b[i];
    const double y2 = scan.b[i + 1] * scan.b[i + 1];
    double f = scan.flux[i];
    double bmin = scan.b[i];
    const double denom = y0 - 2 * y1 + y2;
    if (denom > 0 && bmin > 1e-12) {
      const double h = (scan.flux[i + 1] - scan.flux[i - 1]) / 2.0;
      f -= 0.5 * h * (y2 - y0) / denom;
      bmin = std::sqrt(std::max(0.0, y1 - (y2 - y0) * (y2 - y0) / (8 * denom)));
    }
    scan.minima.emplace_back(f, bmin);
  }
  std::sort(scan.minima.begin(), scan.minima.end(),
            [](auto a, auto b) { return a.second < b.second; });
  return scan;
}

PeriodResult dynamics_period(const CageReport& cage, int max_period, double tol) {
  require(cage.caged, "dynamics_period: report is not caged");
  const Eigen::MatrixXcd& h = cage.recursion.hessenberg;
  const int m = int(h.rows());
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(m, m);
  for (int p = 1; p <= max_period; ++p) {
    power = power * h;
    const Complex phase = power(0, 0);
    if (std::abs(phase) < 0.5) continue;
    const Complex u = phase / std::abs(phase);
    const double dev =
        (power - u * Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
    if (dev < tol) return {p, std::arg(phase)};
  }
  return {std::nullopt, 0.0};
}

std::vector<PeriodicitySolution> commensurate_period_search(int q1_max, int q2_max,
                                                            double tol) {
  require(q1_max >= 1 && q2_max >= 1, "commensurate_period_search: bounds must be >= 1");
  std::vector<PeriodicitySolution> out;
  for (int q1 = 1; q1 <= q1_max; ++q1)
    for (int p1 = 0; p1 <= 2 * q1; ++p1) {
      if (std::gcd(p1, q1) != 1) continue;
      const double alpha = kPi * p1 / q1;
      const double ratio = clamped_acos((2.0 + std::cos(alpha)) / 3.0) / kPi;
      for (int q2 = 1; q2 <= q2_max; ++q2) {
        const int p2 = int(std::lround(ratio * q2));
        if (std::abs(ratio - double(p2) / q2) < tol) {
          out.push_back({p1, q1, p2, q2, 4 * std::lcm(q1, q2), p2 == 0});
          break;
        }
      }
    }
  return out;
}

Eigen::Matrix4d rl_transform() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4d m;
  // columns: |R+>, |R->, |L+>, |L-> over hub slots (right-up, left-up,
  // left-down, right-down)
  m << s, s, 0, 0,
       0, 0, s, s,
       0, 0, s, -s,
       s, -s, 0, 0;
  return m;
}

KOutAction k_out_action(const CoinParamsU2& rim_coin, double f) {
  const Lattice lat = Lattice::diamond_chain(3, Boundary::Open);
  const GaugeField gauge = GaugeField::dc_single_edge(f);
  CoinAssignment rim_only;
  rim_only.hub = CoinSpec::named(CoinSpec::Tag::Identity, 4);
  rim_only.rim_b = CoinSpec::make_u2(rim_coin);
  rim_only.rim_c = CoinSpec::make_u2(rim_coin);
  const auto s = shift_operator(lat, gauge);
  const Eigen::MatrixXcd k = Eigen::MatrixXcd(s * assemble_coin_operator(rim_only, lat) * s);

  const Eigen::Matrix4d rl = rl_transform();
  auto hub_block = [&](const Eigen::VectorXcd& v, int cell) {
    Eigen::Vector4cd out;
    for (int slot = 0; slot < 4; ++slot)
      out(slot) = v(lat.index({{cell, 0}, SiteKind::HubA, slot}));
    return out;
  };

  KOutAction action;
  for (int in = 0; in < 4; ++in) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(lat.num_states());
    for (int slot = 0; slot < 4; ++slot)
      v(lat.index({{1, 0}, SiteKind::HubA, slot})) = rl(slot, in);
    const Eigen::VectorXcd kv = k * v;
    const Eigen::Vector4cd left = rl.transpose() * hub_block(kv, 0);
    const Eigen::Vector4cd right = rl.transpose() * hub_block(kv, 2);
    const double total = left.squaredNorm() + right.squaredNorm();
    if (total < 1e-24)
      throw std::domain_error("k_out_action: no out-channel (fully reflecting rim coin)");
    KOutAction::Entry entry{RlState::RPlus, 0, Complex(0, 0), 0.0};
    double best = -1.0;
    for (int j = 0; j < 4; ++j) {
      if (std::abs(left(j)) > best) {
        best = std::abs(left(j));
        entry = {static_cast<RlState>(j), -1, left(j), std::norm(left(j)) / total};
      }
      if (std::abs(right(j)) > best) {
        best = std::abs(right(j));
        entry = {static_cast<RlState>(j), +1, right(j), std::norm(right(j)) / total};
      }
    }
    action.map[in] = entry;
  }
  return action;
}

SuperlatticeLayout SuperlatticeLayout::parse(const std::string& text) {
  require(text.size() >= 3, "layout needs at least 3 cells");
  for (char c : text)
    require(c == 'H' || c == 'G', std::string("layout characters must be H or G, got '") + c + "'");
  return {text};
}

CoinAssignment SuperlatticeLayout::assignment(const CoinSpec& rim) const {
  CoinAssignment out;
  out.hub = CoinSpec::named(CoinSpec::Tag::Hadamard, 4);
  out.rim_b = rim;
  out.rim_c = rim;
  for (int m = 0; m < size(); ++m)
    out.hub_override[{m, 0}] = CoinSpec::named(
        coins[m] == 'G' ? CoinSpec::Tag::Grover : CoinSpec::Tag::Hadamard, 4);
  return out;
}

namespace {

char substitution_coin(double f) {
  const double rf = reduce_flux(f);
  if (std::abs(rf) < 1e-9) return 'H';
  if (std::abs(std::abs(rf) - 0.5) < 1e-9) return 'G';
  throw std::invalid_argument("superlattice rules apply at flux 0 or 1/2 only");
}

std::optional<int> wall_right(const std::string& coins, int n0, char sub) {
  for (int s = n0 + 1; s < int(coins.size()); ++s)
    if (coins[s] == sub) return s + 1 < int(coins.size()) ? std::optional<int>(s + 1)
                                                          : std::nullopt;
  return std::nullopt;
}

std::optional<int> wall_left(const std::string& coins, int n0, char sub) {
  for (int s = n0 - 2; s >= 0; --s)
    if (coins[s] == sub) return s;
  return std::nullopt;
}

}  // namespace

WallPrediction predict_superlattice_cage(const SuperlatticeLayout& layout,
                                         const SiteId& initial, double f) {
  const char sub = substitution_coin(f);
  const int n0 = initial.cell.m;
  const std::string& coins = layout.coins;
  if (initial.kind == SiteKind::HubA) {
    require(n0 >= 1 && n0 + 1 < layout.size(), "initial hub needs neighbours on both sides");
    return {wall_left(coins, n0, sub), wall_right(coins, n0, sub)};
  }
  // A rim state splits onto its two hubs after one step, arriving with only
  // right-pointing components on the left hub and only left-pointing ones on
  // the right hub. The first-neighbour exemption of the hub rules therefore
  // does not apply: leftward the walk stops at the first substitution coin at
  // or below n0-1; rightward a substitution directly at n0+1 already sticks
  // on n0+2, otherwise the walk runs to the first substitution beyond.
  require(n0 >= 1 && n0 + 2 < layout.size(), "initial rim needs hub neighbours with margin");
  WallPrediction walls;
  for (int s = n0 - 1; s >= 0; --s)
    if (coins[s] == sub) {
      walls.left = s;
      break;
    }
  if (coins[n0 + 1] == sub) {
    walls.right = n0 + 2 < layout.size() ? std::optional<int>(n0 + 2) : std::nullopt;
  } else {
    walls.right = wall_right(coins, n0 + 1, sub);
  }
  return walls;
}

SuperlatticeCheck verify_superlattice_cage(const SuperlatticeLayout& layout,
                                           const SiteId& initial, double f, int steps,
                                           const CoinSpec& rim, double leak_tol) {
  require(steps >= 1, "verify needs at least one step");
  SuperlatticeCheck check;
  check.predicted = predict_superlattice_cage(layout, initial, f);

  const Lattice lat = Lattice::diamond_chain(layout.size(), Boundary::Open);
  const WalkOperator walk = build_walk(lat, GaugeField::dc_single_edge(f),
                                       layout.assignment(rim));

  // The predicted walls bound the maximal cage, the union over the initial
  // site's internal states; evolve every slot and merge the supports.
  std::vector<double> hub_max(layout.size(), 0.0);
  const auto wl = check.predicted.left;
  const auto wr = check.predicted.right;
  for (int slot = 0; slot < lat.coordination(initial.kind); ++slot) {
    Eigen::VectorXcd psi = basis_vector(lat, {initial.cell, initial.kind, slot});
    for (int t = 0; t < steps; ++t) {
      psi = walk.matrix * psi;
      const auto prob = site_probabilities(lat, psi);
      double leak = 0.0;
      for (int s = 0; s < int(prob.size()); ++s) {
        const SiteId site = lat.site(s);
        const int m = site.cell.m;
        if (site.kind == SiteKind::HubA) {
          hub_max[m] = std::max(hub_max[m], prob[s]);
          if ((wl && m < *wl) || (wr && m > *wr)) leak += prob[s];
        } else {
          if ((wl && m < *wl) || (wr && m >= *wr)) leak += prob[s];
        }
      }
      check.max_leak = std::max(check.max_leak, leak);
    }
  }

  check.measured_left = layout.size();
  check.measured_right = -1;
  for (int m = 0; m < layout.size(); ++m)
    if (hub_max[m] > kSupportEps) {
      check.measured_left = std::min(check.measured_left, m);
      check.measured_right = std::max(check.measured_right, m);
    }

  bool pass = true;
  if (wl) {
    pass = pass && check.measured_left == *wl && hub_max[*wl] > 1e-8;
  } else {
    pass = pass && check.measured_left <= 1;  // spread to the boundary region
  }
  if (wr) {
    pass = pass && check.measured_right == *wr && hub_max[*wr] > 1e-8;
  } else {
    pass = pass && check.measured_right >= layout.size() - 2;
  }
  check.walls_reached = (!wl || hub_max[*wl] > 1e-8) && (!wr || hub_max[*wr] > 1e-8);
  if (wl && wr) pass = pass && check.max_leak < leak_tol;
  check.pass = pass;
  return check;
}

}  // namespace qwcage
