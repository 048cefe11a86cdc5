#pragma once

#include <Eigen/SparseCore>

#include "qwcage/coins.hpp"
#include "qwcage/lattice.hpp"

namespace qwcage {

/// Shift operator with Peierls phases: hermitian, S^2 = I. Dangling edges on
/// open boundaries act as identity.
Eigen::SparseMatrix<Complex> shift_operator(const Lattice& lattice,
                                            const GaugeField& gauge);

/// The one-step walk W = S C on a finite lattice.
struct WalkOperator {
  Eigen::SparseMatrix<Complex> matrix;
  int dim = 0;
};

WalkOperator walk_operator(const Eigen::SparseMatrix<Complex>& shift,
                           const Eigen::SparseMatrix<Complex>& coin);

WalkOperator build_walk(const Lattice& lattice, const GaugeField& gauge,
                        const CoinAssignment& assignment);

/// psi(N) = W^N psi(0).
Eigen::VectorXcd evolve(const WalkOperator& walk, const Eigen::VectorXcd& psi0,
                        int steps);

/// |amplitude|^2 summed over the slots of each site, indexed by site index.
std::vector<double> site_probabilities(const Lattice& lattice,
                                       const Eigen::VectorXcd& psi);

/// Basis vector localized on one state.
Eigen::VectorXcd basis_vector(const Lattice& lattice, const BasisState& s);

/// True when the two normalized states differ only by a global phase.
bool equal_up_to_phase(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                       double tol = 1e-9);

}  // namespace qwcage
