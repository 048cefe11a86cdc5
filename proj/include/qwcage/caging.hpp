#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qwcage/walk.hpp"

namespace qwcage {

/// Krylov reduction of the walk operator to Hessenberg form with full
/// re-orthogonalization. b holds the subdiagonal coefficients b_1..b_m;
/// termination is the 1-based index n_c of the first coefficient whose
/// relative size fell below tol.
struct ArnoldiResult {
  Eigen::MatrixXcd krylov;      // dim x m orthonormal columns
  Eigen::VectorXd b;            // m coefficients, b(i) = b_{i+1}
  Eigen::MatrixXcd hessenberg;  // m x m projected walk operator
  std::optional<int> termination;
  double tol = 0.0;

  double relative_b(int one_based) const;
};

ArnoldiResult arnoldi(const WalkOperator& walk, const Eigen::VectorXcd& psi0,
                      int max_iter, double tol = 1e-8);

/// Caging verdict for a localized initial state: Krylov termination plus a
/// brute-force confinement check.
struct CageReport {
  bool caged = false;
  int n_c = 0;  // 0 when not caged
  ArnoldiResult recursion;
  std::vector<SiteId> support;  // sites carrying Krylov weight
  int radius = 0;               // max cell distance from the initial cell
  double max_leak = 0.0;        // probability outside support while evolving
  std::optional<int> period;    // filled by dynamics_period callers
  double chi = 0.0;             // global phase per period
  BasisState initial;
};

CageReport detect_cage(const Lattice& lattice, const WalkOperator& walk,
                       const BasisState& initial, double tol = 1e-8,
                       int verify_steps = 1000);

/// b_{n*}(f) over a flux grid (n* = 8 on the chain, 12 on T3), with local
/// minima refined parabolically on b^2.
struct CriticalFluxScan {
  int n_star = 0;
  std::vector<double> flux;
  std::vector<double> b;                        // relative b_{n*}
  std::vector<std::pair<double, double>> minima;  // (f, b) sorted by b
};

CriticalFluxScan critical_flux_scan(const Lattice& lattice,
                                    const CoinAssignment& assignment,
                                    const BasisState& initial,
                                    const std::vector<double>& flux_grid,
                                    int threads = 1);

/// Smallest P <= max_period such that W^P acts as one global phase on the
/// cage subspace; nullopt means quasiperiodic within the search bound.
struct PeriodResult {
  std::optional<int> period;
  double chi = 0.0;
};

PeriodResult dynamics_period(const CageReport& cage, int max_period = 200,
                             double tol = 1e-8);

/// Rational solutions of acos((2 + cos(pi p1/q1))/3) = pi p2/q2, each giving
/// a periodic cage dynamics of period 4 lcm(q1, q2) on T3.
struct PeriodicitySolution {
  int p1, q1, p2, q2;
  int period;
  bool trivial;  // the alpha = 0 (mod 2 pi) degenerate case
};

std::vector<PeriodicitySolution> commensurate_period_search(int q1_max, int q2_max,
                                                            double tol = 1e-12);

/// Change of basis of the 4-dimensional hub space to
/// {|R+>, |R->, |L+>, |L->} (right/left doublets, symmetric/antisymmetric).
Eigen::Matrix4d rl_transform();

enum class RlState : int { RPlus = 0, RMinus = 1, LPlus = 2, LMinus = 3 };

/// The transmitted part of K = S U2 S across one diamond, expressed in the
/// RL basis: each input RL state at cell n0 maps to one RL state at n0 +- 1.
struct KOutAction {
  struct Entry {
    RlState target;
    int dcell;          // +1 or -1
    Complex amplitude;  // of the dominant channel
    double purity;      // |amplitude|^2 / total transmitted weight
  };
  std::array<Entry, 4> map;  // indexed by input RlState
};

KOutAction k_out_action(const CoinParamsU2& rim_coin, double f);

/// Hub-coin layouts over cells; 'H' for Hadamard, 'G' for Grover.
struct SuperlatticeLayout {
  std::string coins;
  static SuperlatticeLayout parse(const std::string& text);
  CoinAssignment assignment(const CoinSpec& rim) const;
  int size() const { return int(coins.size()); }
};

/// Cage walls predicted by the substitution-coin rules. nullopt = the side
/// is not closed within the layout.
struct WallPrediction {
  std::optional<int> left;
  std::optional<int> right;
};

WallPrediction predict_superlattice_cage(const SuperlatticeLayout& layout,
                                         const SiteId& initial, double f);

/// Brute-force check of a wall prediction by direct evolution.
struct SuperlatticeCheck {
  WallPrediction predicted;
  int measured_left = 0;
  int measured_right = 0;
  double max_leak = 0.0;   // probability beyond the predicted walls
  bool walls_reached = false;
  bool pass = false;
};

SuperlatticeCheck verify_superlattice_cage(const SuperlatticeLayout& layout,
                                           const SiteId& initial, double f, int steps,
                                           const CoinSpec& rim, double leak_tol = 1e-9);

}  // namespace qwcage
