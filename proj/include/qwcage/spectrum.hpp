#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qwcage/coins.hpp"
#include "qwcage/lattice.hpp"

namespace qwcage {

/// 8x8 Bloch block W(k) of the diamond-chain walk in the cell-periodic
/// single-edge gauge. Ordered [hub slots | rim b | rim c]; the hub-hub and
/// rim-rim 4x4 diagonal sub-blocks vanish.
Eigen::MatrixXcd bloch_block_dc(const CoinAssignment& assignment, double f, double k);

/// 12q x 12q Bloch block at rational flux p/q in the Landau gauge; k1 is the
/// Bloch phase per magnetic translation (q cells along t1), k2 per t2.
Eigen::MatrixXcd bloch_block_t3_landau(const CoinAssignment& assignment, int p, int q,
                                       double k1, double k2);

/// 12x12 Bloch block at flux +-1/3 in the cell-periodic gauge.
Eigen::MatrixXcd bloch_block_t3_third(const CoinAssignment& assignment, double f,
                                      double k1, double k2);

/// Eigenphases of a unitary block, sorted ascending in (-pi, pi].
std::vector<double> quasi_energies(const Eigen::MatrixXcd& block,
                                   double unitary_tol = 1e-10);

/// Fast path through the bipartite structure: diagonalizes the hub sub-block
/// of W^2 and returns {E/2} u {E/2 + pi}. hub_indices selects the hub rows
/// of the block's basis.
std::vector<double> quasi_energies_bipartite(const Eigen::MatrixXcd& block,
                                             const std::vector<int>& hub_indices);

/// Rows of the block basis carrying hub states, for the fast path.
std::vector<int> bloch_hub_indices(GraphKind graph, int magnetic_cells);

/// The two diagonal sub-blocks of W^2 (hub and rim), for isospectrality
/// checks.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> w2_subblocks(
    const Eigen::MatrixXcd& block, const std::vector<int>& hub_indices);

/// Closed-form diamond-chain bands for a Grover hub coin and rim coins
/// U2(theta,phi,0,beta) / U2(theta,phi,omega,beta).
struct DcBands {
  std::array<double, 4> dispersive;
  std::array<double, 4> flat;
  std::vector<double> all() const;
};
DcBands dc_bands_analytic(double theta, double phi, double omega, double beta,
                          double f, double k);

/// The eight k-independent quasi-energies at the critical flux f = omega/2pi
/// for a Hadamard hub coin.
std::array<double, 8> dc_pinch_energies_h4(double theta, double phi, double beta);

/// The twelve doubly degenerate pinch quasi-energies of the dice walk with a
/// Grover hub and R3(alpha, gamma) rims at flux 1/2 (each value once).
std::vector<double> t3_pinch_energies(double alpha);

// ---------------------------------------------------------------------------

/// Flux sampling: a single value, a uniform grid, or all rationals p/q with
/// q <= qmax in [0, 1] (Farey sequence).
struct FluxGrid {
  enum class Kind { Single, Grid, Rationals } kind = Kind::Single;
  double value = 0.0;
  double lo = 0.0, hi = 1.0;
  int count = 0;
  int qmax = 0;

  static FluxGrid single(double f);
  static FluxGrid grid(double lo, double hi, int count);
  static FluxGrid rationals(int qmax);
  /// Forms: "0.5", "0:1:512", "q<=30".
  static FluxGrid parse(const std::string& text);

  std::vector<double> values() const;
  std::vector<std::pair<int, int>> fractions() const;  // rationals only
  std::string str() const;
};

struct ButterflyPoint {
  double f;
  double k;  // meaningful only when has_k
  double eps;
  bool has_k;
};

struct Butterfly {
  std::vector<ButterflyPoint> points;
  GraphKind graph;
  FluxGrid flux;
  int k_samples = 0;
};

Butterfly dc_butterfly(const CoinAssignment& assignment, const FluxGrid& flux,
                       int k_samples, int threads = 1);
Butterfly t3_butterfly(const CoinAssignment& assignment, const FluxGrid& flux,
                       int k_samples, int threads = 1);

/// Sum over sorted levels of the circular spread across k; zero when every
/// band is k-independent (a pinch).
struct PinchScan {
  std::vector<double> flux;
  std::vector<double> spread;
  double f_min = 0.0;       // refined location of the spread minimum
  double spread_min = 0.0;
  bool pinched = false;     // spread_min below threshold
};
PinchScan pinch_scan(GraphKind graph, const CoinAssignment& assignment,
                     const FluxGrid& flux, int k_samples, int threads = 1,
                     double threshold = 1e-6);

/// Quasi-energy pattern symmetries of the diamond-chain walk.
enum class SymmetryId { FluxTranslation, EnergyTranslation, FluxMirror, EnergyMirror };
std::optional<SymmetryId> parse_symmetry(const std::string& name);

/// Multiset deviation between the spectrum at (f, k) and its image under the
/// symmetry (with the associated k remapping).
double symmetry_residual(const CoinAssignment& assignment, double f, double k,
                         SymmetryId id);

}  // namespace qwcage
