#include "qwcage/coins.hpp"

#include <charconv>
#include <cmath>

#include <Eigen/Dense>

namespace qwcage {

namespace {
const Complex kI(0.0, 1.0);

std::vector<double> parse_angles(const std::string& text, size_t expected) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    require(!tok.empty(), "coin spec: empty angle");
    size_t used = 0;
    double v = std::stod(tok, &used);
    require(used == tok.size(), "coin spec: bad angle '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  require(out.size() == expected, "coin spec: expected " + std::to_string(expected) +
                                      " angles, got " + std::to_string(out.size()));
  return out;
}
}  // namespace

Eigen::MatrixXcd u2(const CoinParamsU2& p) {
  Eigen::MatrixXcd m(2, 2);
  m(0, 0) = std::cos(p.theta) * std::exp(kI * p.beta);
  m(0, 1) = -std::sin(p.theta) * std::exp(kI * (p.phi + p.omega));
  m(1, 0) = std::sin(p.theta) * std::exp(-kI * p.omega);
  m(1, 1) = std::cos(p.theta) * std::exp(kI * (p.phi - p.beta));
  return m;
}

Eigen::MatrixXcd u2(double theta, double phi, double omega, double beta) {
  return u2(CoinParamsU2{theta, phi, omega, beta});
}

Eigen::MatrixXcd grover(int n) {
  require(n >= 2, "grover: n must be >= 2");
  return Eigen::MatrixXcd::Constant(n, n, 2.0 / n) - Eigen::MatrixXcd::Identity(n, n);
}

Eigen::MatrixXcd hadamard(int n) {
  require(n == 2 || n == 4, "hadamard: n must be 2 or 4");
  Eigen::MatrixXcd h2(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h2 << s, s, s, -s;
  if (n == 2) return h2;
  Eigen::MatrixXcd h4(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) h4.block(2 * i, 2 * j, 2, 2) = h2(i, j) * h2;
  return h4;
}

Eigen::MatrixXcd r3(double alpha, double gamma) {
  Eigen::Vector3d v(std::cos(gamma) / std::sqrt(2.0), std::sin(gamma),
                    std::cos(gamma) / std::sqrt(2.0));
  Eigen::Matrix3d cross;
  cross << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  Eigen::Matrix3d rot = std::cos(alpha) * Eigen::Matrix3d::Identity() +
                        std::sin(alpha) * cross +
                        (1.0 - std::cos(alpha)) * v * v.transpose();
  return rot.cast<Complex>();
}

Eigen::MatrixXcd r3_tilde(double alpha, double gamma, double omega) {
  Eigen::MatrixXcd m = r3(alpha, gamma);
  // sum_k eps_ijk over 1-based indices: +1 above the diagonal cyclically,
  // -1 below.
  static constexpr int sign[3][3] = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (sign[i][j] != 0) m(i, j) *= std::exp(-kI * (omega * sign[i][j]));
  return m;
}

Eigen::MatrixXcd dft(int n) {
  require(n >= 2, "dft: n must be >= 2");
  Eigen::MatrixXcd m(n, n);
  const double s = 1.0 / std::sqrt(double(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m(j, k) = s * std::exp(kI * (kTwoPi * j * k / n));
  return m;
}

double unitarity_error(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd d = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const Eigen::MatrixXcd& m, double tol) {
  return m.rows() == m.cols() && unitarity_error(m) < tol;
}

CoinSpec CoinSpec::make_u2(const CoinParamsU2& p) {
  CoinSpec c;
  c.tag_ = Tag::U2;
  c.dim_ = 2;
  c.u2_ = p;
  return c;
}

CoinSpec CoinSpec::make_r3(const CoinParamsR3& p) {
  CoinSpec c;
  c.tag_ = p.omega == 0.0 ? Tag::R3 : Tag::R3t;
  c.dim_ = 3;
  c.r3_ = p;
  return c;
}

CoinSpec CoinSpec::named(Tag tag, int n) {
  CoinSpec c;
  c.tag_ = tag;
  c.dim_ = n;
  switch (tag) {
    case Tag::Grover: require(n >= 2, "G<n>: n >= 2"); break;
    case Tag::Hadamard: require(n == 2 || n == 4, "H<n>: n in {2,4}"); break;
    case Tag::Dft: require(n >= 2, "D<n>: n >= 2"); break;
    case Tag::Identity: require(n >= 1, "I<n>: n >= 1"); break;
    default: throw std::invalid_argument("named coin must be G/H/D/I");
  }
  return c;
}

CoinSpec CoinSpec::parse(const std::string& text) {
  require(!text.empty(), "empty coin spec");
  size_t colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (name == "U2") {
    auto a = parse_angles(args, 4);
    return make_u2({a[0], a[1], a[2], a[3]});
  }
  if (name == "R3") {
    auto a = parse_angles(args, 2);
    return make_r3({a[0], a[1], 0.0});
  }
  if (name == "R3t") {
    auto a = parse_angles(args, 3);
    return make_r3({a[0], a[1], a[2]});
  }
  require(colon == std::string::npos, "coin '" + name + "' takes no arguments");
  require(name.size() >= 2, "unknown coin spec '" + text + "'");
  int n = 0;
  auto res = std::from_chars(name.data() + 1, name.data() + name.size(), n);
  require(res.ec == std::errc() && res.ptr == name.data() + name.size(),
          "unknown coin spec '" + text + "'");
  switch (name[0]) {
    case 'G': return named(Tag::Grover, n);
    case 'H': return named(Tag::Hadamard, n);
    case 'D': return named(Tag::Dft, n);
    case 'I': return named(Tag::Identity, n);
    default: throw std::invalid_argument("unknown coin spec '" + text + "'");
  }
}

Eigen::MatrixXcd CoinSpec::matrix() const {
  switch (tag_) {
    case Tag::U2: return u2(u2_);
    case Tag::R3: return r3(r3_.alpha, r3_.gamma);
    case Tag::R3t: return r3_tilde(r3_.alpha, r3_.gamma, r3_.omega);
    case Tag::Grover: return grover(dim_);
    case Tag::Hadamard: return hadamard(dim_);
    case Tag::Dft: return dft(dim_);
    case Tag::Identity: return Eigen::MatrixXcd::Identity(dim_, dim_);
  }
  return Eigen::MatrixXcd::Identity(dim_, dim_);
}

std::string CoinSpec::str() const {
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  switch (tag_) {
    case Tag::U2:
      return "U2:" + num(u2_.theta) + "," + num(u2_.phi) + "," + num(u2_.omega) + "," +
             num(u2_.beta);
    case Tag::R3: return "R3:" + num(r3_.alpha) + "," + num(r3_.gamma);
    case Tag::R3t:
      return "R3t:" + num(r3_.alpha) + "," + num(r3_.gamma) + "," + num(r3_.omega);
    case Tag::Grover: return "G" + std::to_string(dim_);
    case Tag::Hadamard: return "H" + std::to_string(dim_);
    case Tag::Dft: return "D" + std::to_string(dim_);
    case Tag::Identity: return "I" + std::to_string(dim_);
  }
  return "?";
}

std::optional<CoinParamsU2> CoinSpec::params_u2() const {
  if (tag_ == Tag::U2) return u2_;
  if (tag_ == Tag::Hadamard && dim_ == 2) return CoinParamsU2{kPi / 4, kPi, 0, 0};
  if (tag_ == Tag::Identity && dim_ == 2) return CoinParamsU2{0, 0, 0, 0};
  return std::nullopt;
}

std::optional<CoinParamsR3> CoinSpec::params_r3() const {
  if (tag_ == Tag::R3 || tag_ == Tag::R3t) return r3_;
  if (tag_ == Tag::Grover && dim_ == 3)
    return CoinParamsR3{kPi, std::asin(1.0 / std::sqrt(3.0)), 0};
  return std::nullopt;
}

void CoinAssignment::validate_for(const Lattice& lattice) const {
  require(hub.dim() == lattice.coordination(SiteKind::HubA),
          "hub coin dimension does not match coordination");
  require(rim_b.dim() == lattice.coordination(SiteKind::RimB),
          "rim b coin dimension does not match coordination");
  require(rim_c.dim() == lattice.coordination(SiteKind::RimC),
          "rim c coin dimension does not match coordination");
  for (const auto& [cell, spec] : hub_override) {
    require(lattice.contains(cell), "hub override outside lattice extent");
    require(spec.dim() == lattice.coordination(SiteKind::HubA),
            "hub override coin dimension does not match coordination");
  }
}

Eigen::SparseMatrix<Complex> assemble_coin_operator(const CoinAssignment& assignment,
                                                    const Lattice& lattice) {
  assignment.validate_for(lattice);
  const Eigen::MatrixXcd mb = assignment.rim_b.matrix();
  const Eigen::MatrixXcd mc = assignment.rim_c.matrix();
  const Eigen::MatrixXcd mhub = assignment.hub.matrix();
  // r3_tilde is unitary only for omega a multiple of 2*pi/3; reject misuse.
  require(is_unitary(mb) && is_unitary(mc) && is_unitary(mhub),
          "coin matrices must be unitary");

  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(lattice.num_states() * 4);
  auto add_block = [&](const BasisState& first, const Eigen::MatrixXcd& m) {
    const int base = lattice.index(first);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (m(i, j) != Complex(0, 0)) trips.emplace_back(base + i, base + j, m(i, j));
  };
  for (int ci = 0; ci < lattice.num_cells(); ++ci) {
    Cell cell = lattice.site(ci * 3).cell;
    auto it = assignment.hub_override.find(cell);
    add_block({cell, SiteKind::HubA, 0}, it == assignment.hub_override.end()
                                             ? mhub
                                             : it->second.matrix());
    add_block({cell, SiteKind::RimB, 0}, mb);
    add_block({cell, SiteKind::RimC, 0}, mc);
  }
  Eigen::SparseMatrix<Complex> c(lattice.num_states(), lattice.num_states());
  c.setFromTriplets(trips.begin(), trips.end());
  return c;
}

}  // namespace qwcage
