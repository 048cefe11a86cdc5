#pragma once

#include <map>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "qwcage/lattice.hpp"

namespace qwcage {

struct CoinParamsU2 {
  double theta = 0, phi = 0, omega = 0, beta = 0;
};

struct CoinParamsR3 {
  double alpha = 0, gamma = 0, omega = 0;  // omega = 0 for a plain rotation
};

/// Generic 2x2 unitary coin
///   [ cos(t) e^{i b}    -sin(t) e^{i(p+w)} ]
///   [ sin(t) e^{-i w}    cos(t) e^{i(p-b)} ]
Eigen::MatrixXcd u2(const CoinParamsU2& p);
Eigen::MatrixXcd u2(double theta, double phi, double omega, double beta);

/// Grover coin G_n = (2/n) J - I; hermitian reflection, G_n^2 = I.
Eigen::MatrixXcd grover(int n);

/// Hadamard coin; n = 2 or 4 (H4 = H2 kron H2).
Eigen::MatrixXcd hadamard(int n);

/// SO(3) rotation by alpha about the axis (cos g/sqrt2, sin g, cos g/sqrt2).
Eigen::MatrixXcd r3(double alpha, double gamma);

/// r3 with entry (i,j) multiplied by e^{-i w sum_k eps_ijk}. Unitary when
/// omega is a multiple of 2*pi/3 (for generic rotation parameters).
Eigen::MatrixXcd r3_tilde(double alpha, double gamma, double omega);

/// Discrete Fourier transform coin, entries w^{jk}/sqrt(n), w = e^{2 pi i/n}.
Eigen::MatrixXcd dft(int n);

double unitarity_error(const Eigen::MatrixXcd& m);
bool is_unitary(const Eigen::MatrixXcd& m, double tol = 1e-12);

/// A parsed coin specification. Accepted CLI forms:
///   "U2:theta,phi,omega,beta"  "R3:alpha,gamma"  "R3t:alpha,gamma,omega"
///   "G<n>"  "H2"  "H4"  "D<n>"  "I<n>"
class CoinSpec {
 public:
  enum class Tag { U2, R3, R3t, Grover, Hadamard, Dft, Identity };

  CoinSpec() = default;
  static CoinSpec make_u2(const CoinParamsU2& p);
  static CoinSpec make_r3(const CoinParamsR3& p);
  static CoinSpec named(Tag tag, int n);
  static CoinSpec parse(const std::string& text);

  Tag tag() const { return tag_; }
  int dim() const { return dim_; }
  Eigen::MatrixXcd matrix() const;
  std::string str() const;
  std::optional<CoinParamsU2> params_u2() const;
  std::optional<CoinParamsR3> params_r3() const;

 private:
  Tag tag_ = Tag::Identity;
  int dim_ = 2;
  CoinParamsU2 u2_{};
  CoinParamsR3 r3_{};
};

/// Per-site-kind coins, with optional per-cell hub substitutions for
/// superlattices.
struct CoinAssignment {
  CoinSpec hub;
  CoinSpec rim_b;
  CoinSpec rim_c;
  std::map<Cell, CoinSpec> hub_override;

  const CoinSpec& hub_at(Cell cell) const {
    auto it = hub_override.find(cell);
    return it == hub_override.end() ? hub : it->second;
  }
  void validate_for(const Lattice& lattice) const;
};

/// Block-diagonal coin operator C over the lattice basis enumeration.
Eigen::SparseMatrix<Complex> assemble_coin_operator(const CoinAssignment& assignment,
                                                    const Lattice& lattice);

}  // namespace qwcage
