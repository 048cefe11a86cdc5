#include "qwcage/walk.hpp"

namespace qwcage {

Eigen::SparseMatrix<Complex> shift_operator(const Lattice& lattice,
                                            const GaugeField& gauge) {
  require(gauge.graph() == lattice.graph(), "gauge/lattice graph mismatch");
  if (lattice.boundary() == Boundary::Periodic &&
      gauge.kind() == GaugeKind::T3Landau) {
    // The Landau phases are periodic mod 2*pi only over q cells along t1.
    require(gauge.landau_q() >= 1 && lattice.cells_x() % gauge.landau_q() == 0,
            "periodic extent must be a multiple of the Landau period q");
  }
  const int dim = lattice.num_states();
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    const BasisState u = lattice.state(i);
    const auto v = lattice.opposite(u);
    if (!v) {
      trips.emplace_back(i, i, Complex(1, 0));  // dangling edge: identity
      continue;
    }
    const BasisState vu = lattice.opposite_unbounded(u);
    const double theta = gauge.phase(u.site(), vu.site());
    trips.emplace_back(lattice.index(*v), i, std::polar(1.0, theta));
  }
  Eigen::SparseMatrix<Complex> s(dim, dim);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

WalkOperator walk_operator(const Eigen::SparseMatrix<Complex>& shift,
                           const Eigen::SparseMatrix<Complex>& coin) {
  require(shift.rows() == shift.cols() && coin.rows() == coin.cols() &&
              shift.rows() == coin.rows(),
          "walk_operator: dimension mismatch");
  WalkOperator w;
  w.matrix = shift * coin;
  w.dim = int(shift.rows());
  return w;
}

WalkOperator build_walk(const Lattice& lattice, const GaugeField& gauge,
                        const CoinAssignment& assignment) {
  return walk_operator(shift_operator(lattice, gauge),
                       assemble_coin_operator(assignment, lattice));
}

Eigen::VectorXcd evolve(const WalkOperator& walk, const Eigen::VectorXcd& psi0,
                        int steps) {
  require(steps >= 0, "evolve: steps must be non-negative");
  require(int(psi0.size()) == walk.dim, "evolve: state dimension mismatch");
  Eigen::VectorXcd psi = psi0;
  for (int t = 0; t < steps; ++t) psi = walk.matrix * psi;
  return psi;
}

std::vector<double> site_probabilities(const Lattice& lattice,
                                       const Eigen::VectorXcd& psi) {
  require(int(psi.size()) == lattice.num_states(), "state dimension mismatch");
  std::vector<double> prob(lattice.num_sites(), 0.0);
  for (int i = 0; i < lattice.num_states(); ++i) {
    const BasisState s = lattice.state(i);
    prob[lattice.site_index(s.site())] += std::norm(psi[i]);
  }
  return prob;
}

Eigen::VectorXcd basis_vector(const Lattice& lattice, const BasisState& s) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(lattice.num_states());
  v[lattice.index(s)] = Complex(1, 0);
  return v;
}

bool equal_up_to_phase(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                       double tol) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return false;
  return std::abs(a.dot(b)) / (na * nb) > 1.0 - tol;
}

}  // namespace qwcage
