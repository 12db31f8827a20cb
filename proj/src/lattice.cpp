#include "mtnv/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mtnv/constants.hpp"

namespace mtnv::lattice {

namespace {

using Block = Eigen::Matrix2cd;

constexpr Complex kI{0.0, 1.0};

// Hole-sector image of a particle-sector 2x2 spin block: -sigma_y X^* sigma_y.
Block hole_block(const Block& x) {
  Block out;
  out(0, 0) = -std::conj(x(1, 1));
  out(0, 1) = std::conj(x(1, 0));
  out(1, 0) = std::conj(x(0, 1));
  out(1, 1) = -std::conj(x(0, 0));
  return out;
}

void add_block(std::vector<Eigen::Triplet<Complex>>& trips, Eigen::Index row,
               Eigen::Index col, const Block& x) {
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (x(a, b) != Complex{}) trips.emplace_back(row + a, col + b, x(a, b));
    }
  }
}

// Particle block and its hole image placed at sites (i, j).
void add_normal(std::vector<Eigen::Triplet<Complex>>& trips, std::size_t i,
                std::size_t j, const Block& x) {
  const auto ri = static_cast<Eigen::Index>(kNambuComponents * i);
  const auto cj = static_cast<Eigen::Index>(kNambuComponents * j);
  add_block(trips, ri, cj, x);
  add_block(trips, ri + 2, cj + 2, hole_block(x));
}

Block onsite_block(const SegmentConfig& s, double hopping) {
  Block x;
  x(0, 0) = -2.0 * hopping + s.mu + s.b_parallel;
  x(1, 1) = -2.0 * hopping + s.mu - s.b_parallel;
  x(0, 1) = s.B_transverse * std::exp(kI * s.theta);
  x(1, 0) = s.B_transverse * std::exp(-kI * s.theta);
  return x;
}

// Block for the bond i -> i+1 (row i, column i+1).
Block bond_block(const LatticeConfig& cfg) {
  Block x = Block::Zero();
  x(0, 0) = -cfg.hopping_t;
  x(1, 1) = -cfg.hopping_t;
  const double a = cfg.spin_orbit_alpha;
  switch (cfg.spin_orbit_form) {
    case SpinOrbitForm::kAxial:
      x(0, 0) += -kI * a;
      x(1, 1) += kI * a;
      break;
    case SpinOrbitForm::kSpinFlip:
      x(0, 1) += a;
      x(1, 0) += -a;
      break;
  }
  return x;
}

std::size_t split_site(const BdGSpectrum& s) {
  if (s.segment_sites.size() == 3) {
    return s.segment_sites[0] + s.segment_sites[1] / 2;
  }
  return s.n_sites() / 2;
}

Eigen::VectorXd site_density(const ComplexVector& v) {
  const auto n = v.size() / kNambuComponents;
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i) = v.segment(kNambuComponents * i, kNambuComponents).squaredNorm();
  }
  return d;
}

// Majorana pair (left, right) from a positive-energy eigenvector.
std::pair<ComplexVector, ComplexVector> majorana_pair(const ComplexVector& u,
                                                      std::size_t split) {
  const ComplexVector cu = particle_hole_conjugate(u);
  const auto left = static_cast<Eigen::Index>(kNambuComponents * split);
  const Complex z = u.head(left).dot(cu.head(left));  // conj(u) . Cu
  const double chi = std::abs(z) > 0.0 ? 0.5 * std::arg(z) : 0.0;
  const ComplexVector w = std::exp(kI * chi) * u;
  const ComplexVector cw = particle_hole_conjugate(w);
  ComplexVector first = (w + cw) / std::sqrt(2.0);
  ComplexVector second = kI * (w - cw) / std::sqrt(2.0);
  first.normalize();
  second.normalize();
  return {std::move(first), std::move(second)};
}

LatticeConfig with_angles(const LatticeConfig& cfg, double theta_l,
                          double theta_r) {
  LatticeConfig out = cfg;
  out.segments[0].theta = theta_l;
  out.segments[2].theta = theta_r;
  return out;
}

}  // namespace

std::size_t LatticeConfig::total_sites() const {
  return std::accumulate(
      segments.begin(), segments.end(), std::size_t{0},
      [](std::size_t acc, const SegmentConfig& s) { return acc + s.n_sites; });
}

std::vector<std::size_t> LatticeConfig::segment_sites() const {
  std::vector<std::size_t> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(s.n_sites);
  return out;
}

double millitesla_to_mev(double millitesla) {
  return constants::kWireZeemanMeVPerTesla * millitesla * 1e-3;
}

double hopping_from_mass(double effective_mass_ratio, double spacing_nm) {
  return constants::kHbarSqOver2MeMeVNm2 /
         (effective_mass_ratio * spacing_nm * spacing_nm);
}

double lattice_spin_orbit(double alpha_ev_angstrom, double spacing_nm) {
  // 1 eV A = 100 meV nm.
  return alpha_ev_angstrom * 100.0 / (2.0 * spacing_nm);
}

LatticeConfig paper_lattice_config() {
  const double zeeman = millitesla_to_mev(200.0);
  SegmentConfig topo{300, 0.0, zeeman, zeeman, 0.0, 0.5, 0.0};
  SegmentConfig normal{20, -0.6, zeeman, 0.0, 0.0, 0.5, 0.0};
  SegmentConfig right = topo;
  right.n_sites = 180;

  LatticeConfig cfg;
  cfg.segments = {topo, normal, right};
  cfg.effective_mass_ratio = 0.015;
  cfg.lattice_spacing_a = 10.0;
  cfg.hopping_t = hopping_from_mass(cfg.effective_mass_ratio,
                                    cfg.lattice_spacing_a);
  cfg.spin_orbit_alpha = lattice_spin_orbit(0.2, cfg.lattice_spacing_a);
  return cfg;
}

void validate(const LatticeConfig& cfg) {
  if (cfg.segments.size() != 3) {
    std::ostringstream msg;
    msg << "lattice config needs exactly 3 segments (T, N, T), got "
        << cfg.segments.size();
    throw ConfigError(msg.str());
  }
  if (!(cfg.hopping_t > 0.0)) throw ConfigError("hopping_t must be > 0");
  for (std::size_t k = 0; k < cfg.segments.size(); ++k) {
    const auto& s = cfg.segments[k];
    std::string where = "segment " + std::to_string(k) + ": ";
    if (s.n_sites < 1) throw ConfigError(where + "n_sites must be >= 1");
    if (s.delta < 0.0) throw ConfigError(where + "delta must be >= 0");
    if (s.B_transverse < 0.0) {
      throw ConfigError(where + "B_transverse must be >= 0");
    }
  }
}

SparseMatrix build_hamiltonian_sparse(const LatticeConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.total_sites();
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(n * 24);

  const Block bond = bond_block(cfg);
  std::size_t site = 0;
  for (const auto& seg : cfg.segments) {
    const Block onsite = onsite_block(seg, cfg.hopping_t);
    const Complex pairing = seg.delta * std::exp(kI * seg.phi);
    for (std::size_t k = 0; k < seg.n_sites; ++k, ++site) {
      add_normal(trips, site, site, onsite);
      const auto r = static_cast<Eigen::Index>(kNambuComponents * site);
      if (pairing != Complex{}) {
        trips.emplace_back(r + 0, r + 2, pairing);
        trips.emplace_back(r + 1, r + 3, pairing);
        trips.emplace_back(r + 2, r + 0, std::conj(pairing));
        trips.emplace_back(r + 3, r + 1, std::conj(pairing));
      }
      if (site + 1 < n) {
        add_normal(trips, site, site + 1, bond);
        add_normal(trips, site + 1, site, bond.adjoint());
      }
    }
  }

  const auto dim = static_cast<Eigen::Index>(kNambuComponents * n);
  SparseMatrix h(dim, dim);
  h.setFromTriplets(trips.begin(), trips.end());
  return h;
}

ComplexMatrix build_hamiltonian(const LatticeConfig& cfg) {
  return ComplexMatrix(build_hamiltonian_sparse(cfg));
}

ComplexVector rotate_spin(const ComplexVector& v, double angle) {
  const Complex up = std::exp(kI * (0.5 * angle));
  const Complex down = std::conj(up);
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); i += kNambuComponents) {
    out(i + 0) = up * v(i + 0);
    out(i + 1) = down * v(i + 1);
    out(i + 2) = up * v(i + 2);
    out(i + 3) = down * v(i + 3);
  }
  return out;
}

ComplexVector particle_hole_conjugate(const ComplexVector& v) {
  // sigma_y tau_y swaps (0 <-> 3) with sign -1 and (1 <-> 2) with sign +1.
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); i += kNambuComponents) {
    out(i + 0) = -std::conj(v(i + 3));
    out(i + 1) = std::conj(v(i + 2));
    out(i + 2) = std::conj(v(i + 1));
    out(i + 3) = -std::conj(v(i + 0));
  }
  return out;
}

BdGSpectrum diagonalize(const ComplexMatrix& h,
                        std::vector<std::size_t> segment_sites) {
  if (h.rows() != h.cols()) {
    throw std::domain_error("diagonalize: matrix is not square");
  }
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    std::ostringstream msg;
    msg << "diagonalize: matrix is not Hermitian (max |H - H^+| = " << asym
        << ")";
    throw std::domain_error(msg.str());
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("diagonalize: eigensolver did not converge");
  }

  BdGSpectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  s.segment_sites = std::move(segment_sites);

  const Eigen::Index n = s.eigenvalues.size();
  const double scale =
      std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff());
  s.partner.assign(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = n - 1 - i;
    if (std::abs(s.eigenvalues(i) + s.eigenvalues(j)) <= 1e-9 * scale) {
      s.partner[static_cast<std::size_t>(i)] = j;
    }
  }
  return s;
}

MajoranaModes extract_majoranas(const BdGSpectrum& s) {
  const Eigen::Index n = s.eigenvalues.size();
  if (n % kNambuComponents != 0) {
    throw std::invalid_argument(
        "extract_majoranas: spectrum is not a Nambu-spinor lattice");
  }
  // First index with non-negative energy. For a particle-hole symmetric
  // spectrum this is n/2.
  const Eigen::Index first = n / 2;
  if (first + 2 >= n) {
    throw NotTopologicalError("extract_majoranas: spectrum too small");
  }
  const double e1 = s.eigenvalues(first);
  const double e2 = s.eigenvalues(first + 1);
  const double edge = s.eigenvalues(first + 2);
  if (!(e2 < kInGapRatio * edge)) {
    std::ostringstream msg;
    msg << "not in topological regime: lowest positive levels " << e1 << ", "
        << e2 << ", " << edge << " meV show no in-gap pair";
    throw NotTopologicalError(msg.str());
  }

  const std::size_t split = split_site(s);
  auto [g1, g4] = majorana_pair(s.eigenvectors.col(first), split);
  auto [g2, g3] = majorana_pair(s.eigenvectors.col(first + 1), split);

  MajoranaModes m;
  m.epsilon1 = e1;
  m.epsilon2 = e2;
  m.bulk_edge = edge;
  m.vectors = {std::move(g1), std::move(g2), std::move(g3), std::move(g4)};
  for (std::size_t k = 0; k < 4; ++k) m.densities[k] = site_density(m.vectors[k]);
  return m;
}

bool is_topological(const SegmentConfig& seg) {
  const double d2 = seg.delta * seg.delta;
  const double b2 = seg.b_parallel * seg.b_parallel;
  if (!(d2 > b2)) {
    throw std::domain_error(
        "is_topological: criterion only defined for Delta^2 > b^2");
  }
  return d2 - b2 <
         seg.B_transverse * seg.B_transverse - seg.mu * seg.mu;
}

MagnetoJosephson::MagnetoJosephson(const LatticeConfig& cfg) : cfg_(cfg) {
  validate(cfg_);
  for (std::size_t k : {std::size_t{0}, std::size_t{2}}) {
    if (!is_topological(cfg_.segments[k])) {
      throw NotTopologicalError(
          std::string("not in topological regime: ") +
          (k == 0 ? "left" : "right") +
          " segment fails Delta^2 - b^2 < B^2 - mu^2");
    }
  }
  spectrum_ = diagonalize(build_hamiltonian(with_angles(cfg_, 0.0, 0.0)),
                          cfg_.segment_sites());
  modes_ = extract_majoranas(spectrum_);
  const double ref = matrix_element(0.0, 0.0).imag();
  orientation_ = ref < 0.0 ? -1.0 : 1.0;
}

Complex MagnetoJosephson::matrix_element(double theta_l,
                                         double theta_r) const {
  const ComplexVector& g2 = modes_.vectors[1];
  const ComplexVector& g3 = modes_.vectors[2];
  const SparseMatrix h =
      build_hamiltonian_sparse(with_angles(cfg_, theta_l, theta_r));
  const ComplexVector bra = rotate_spin(g2, theta_l);
  const ComplexVector ket = rotate_spin(g3, theta_r);
  const ComplexVector h_ket = h * ket;
  return bra.dot(h_ket) / std::sqrt(g2.squaredNorm() * g3.squaredNorm());
}

double MagnetoJosephson::energy(double theta) const {
  const double theta_l = cfg_.segments[0].theta;
  // Majorana states with a particle-hole odd H give a purely imaginary
  // element; its imaginary part carries the sign.
  return orientation_ * matrix_element(theta_l, theta_l + theta).imag();
}

double MagnetoJosephson::slope(double theta, double h) const {
  return central_difference([this](double x) { return energy(x); }, theta, h);
}

double hybridization_energy(const LatticeConfig& cfg, double theta) {
  return MagnetoJosephson(cfg).energy(theta);
}

const double kSpinCurrentNanoampPerUnit =
    constants::kElementaryCharge * constants::kMeVToJoule / constants::kHbar *
    1e9;

double spin_current(const LatticeConfig& cfg, double theta) {
  return MagnetoJosephson(cfg).slope(theta);
}

double coupling_from_slope(double slope_mev_per_rad, double theta_zpf) {
  return slope_mev_per_rad * constants::kMeVToJoule / constants::kHbar *
         theta_zpf;
}

double coupling_constant_g(const LatticeConfig& cfg, double theta0,
                           double theta_zpf) {
  if (theta_zpf == 0.0) return 0.0;
  return coupling_from_slope(MagnetoJosephson(cfg).slope(theta0), theta_zpf);
}

double central_difference(const std::function<double(double)>& f, double x,
                          double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

std::vector<ThetaSample> sweep_theta(const MagnetoJosephson& mj,
                                     double theta_begin, double theta_end,
                                     std::size_t points) {
  std::vector<ThetaSample> out;
  if (points == 0) return out;
  out.reserve(points);
  const double step =
      points > 1 ? (theta_end - theta_begin) / static_cast<double>(points - 1)
                 : 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double theta = theta_begin + step * static_cast<double>(k);
    out.push_back({theta, mj.energy(theta), mj.slope(theta)});
  }
  return out;
}

}  // namespace mtnv::lattice
