#pragma once

// Tight-binding Bogoliubov-de Gennes model of a three-segment (T-N-T)
// nanowire, its Majorana edge modes, and the field-angle dependence of the
// inner Majorana hybridization energy (magneto-Josephson effect).
//
// Energies are in meV, fields enter as Zeeman energies in meV, angles in rad.
// Every site carries a 4-component Nambu spinor ordered
//   (psi_up, psi_down, psi_down^dagger, -psi_up^dagger),
// so a 4N x 4N matrix acts on N sites and index 4*i + c addresses component
// c of site i.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace mtnv::lattice {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr int kNambuComponents = 4;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when fewer than two in-gap quasiparticle pairs exist, or when a
/// topological segment is required but the criterion fails.
class NotTopologicalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SegmentConfig {
  std::size_t n_sites = 1;
  double mu = 0.0;            // chemical potential
  double b_parallel = 0.0;    // longitudinal Zeeman energy (sigma_z)
  double B_transverse = 0.0;  // in-plane Zeeman energy
  double theta = 0.0;         // in-plane field angle
  double delta = 0.0;         // pairing amplitude
  double phi = 0.0;           // superconducting phase
};

/// How the Rashba term is discretized on a bond.
///   kAxial:    -i alpha sigma_z hopping, the lattice form of alpha k sigma_z.
///   kSpinFlip: alpha (c_up^+ c_{i+1,dn} - c_dn^+ c_{i+1,up}) + h.c.
enum class SpinOrbitForm { kAxial, kSpinFlip };

struct LatticeConfig {
  std::vector<SegmentConfig> segments;  // left T, middle N, right T
  double hopping_t = 0.0;               // meV
  double spin_orbit_alpha = 0.0;        // per-bond lattice energy alpha/(2a), meV
  double lattice_spacing_a = 10.0;      // nm
  double effective_mass_ratio = 0.015;  // m*/m_e
  SpinOrbitForm spin_orbit_form = SpinOrbitForm::kAxial;

  std::size_t total_sites() const;
  std::vector<std::size_t> segment_sites() const;
};

double millitesla_to_mev(double millitesla);
/// t = hbar^2 / (2 m* a^2) in meV.
double hopping_from_mass(double effective_mass_ratio, double spacing_nm);
/// alpha/(2a) in meV for a Rashba constant in eV*Angstrom.
double lattice_spin_orbit(double alpha_ev_angstrom, double spacing_nm);

/// InSb parameter set with 300/20/180 sites: m* = 0.015 m_e,
/// alpha = 0.2 eV A, a = 10 nm, Delta = 0.5 meV; T segments B = b = 200 mT,
/// mu = 0; N segment B = 0, b = 200 mT, mu = -0.6 meV.
LatticeConfig paper_lattice_config();

/// Throws ConfigError unless the config has three valid segments.
void validate(const LatticeConfig& cfg);

SparseMatrix build_hamiltonian_sparse(const LatticeConfig& cfg);
ComplexMatrix build_hamiltonian(const LatticeConfig& cfg);

/// Spin rotation exp(i angle sigma_z / 2) applied site-wise to a Nambu vector.
ComplexVector rotate_spin(const ComplexVector& v, double angle);

/// Particle-hole conjugation C = sigma_y tau_y K in the Nambu basis above.
ComplexVector particle_hole_conjugate(const ComplexVector& v);

struct BdGSpectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  ComplexMatrix eigenvectors;    // columns
  /// partner[i] = index j with eigenvalue -eigenvalue[i], or -1.
  std::vector<Eigen::Index> partner;
  /// Site counts per segment when the matrix came from a LatticeConfig.
  std::vector<std::size_t> segment_sites;

  std::size_t n_sites() const {
    return static_cast<std::size_t>(eigenvalues.size()) / kNambuComponents;
  }
};

/// Dense Hermitian eigendecomposition. Throws std::domain_error when
/// max|H - H^dagger| > 1e-9.
BdGSpectrum diagonalize(const ComplexMatrix& h,
                        std::vector<std::size_t> segment_sites = {});

struct MajoranaModes {
  std::array<Eigen::VectorXd, 4> densities;  // |phi_gamma_k|^2 per site
  std::array<ComplexVector, 4> vectors;      // gamma_1 .. gamma_4
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
  double bulk_edge = 0.0;  // lowest positive energy above the in-gap pairs
};

/// The lowest two positive levels count as in-gap when
/// epsilon2 < kInGapRatio * (next level).
inline constexpr double kInGapRatio = 0.25;

/// Symmetric/antisymmetric combinations of each in-gap pair with its particle-
/// hole partner. The gauge phase of each pair is fixed so the first
/// combination sits left of the split point (centre of the middle segment, or
/// the lattice centre when no segment data is present).
MajoranaModes extract_majoranas(const BdGSpectrum& s);

/// Delta^2 - b^2 < B^2 - mu^2 (strict). Throws std::domain_error unless
/// Delta^2 > b^2.
bool is_topological(const SegmentConfig& seg);

/// Inner-pair hybridization E_m as a function of the field angles. The
/// unperturbed gamma_2, gamma_3 come from one diagonalization at zero field
/// angles; each evaluation is then a sparse matrix element.
class MagnetoJosephson {
 public:
  explicit MagnetoJosephson(const LatticeConfig& cfg);

  /// <R(theta_l) gamma_2 | H(theta_l, theta_r) | R(theta_r) gamma_3>,
  /// normalized by the state norms.
  Complex matrix_element(double theta_l, double theta_r) const;

  /// Signed E_m at relative angle theta = theta_r - theta_l (meV), with
  /// theta_l taken from the left segment. E_m(0) > 0.
  double energy(double theta) const;

  /// dE_m/dtheta by central difference with step h (meV / rad).
  double slope(double theta, double h = kDefaultStep) const;

  const BdGSpectrum& spectrum() const { return spectrum_; }
  const MajoranaModes& modes() const { return modes_; }
  const LatticeConfig& config() const { return cfg_; }

  static constexpr double kDefaultStep = 1e-3;

 private:
  LatticeConfig cfg_;
  BdGSpectrum spectrum_;
  MajoranaModes modes_;
  double orientation_ = 1.0;
};

double hybridization_energy(const LatticeConfig& cfg, double theta);

/// J_m = (e/hbar) dE_m/dtheta, reported in units of e*meV/hbar (so the value
/// is numerically dE_m/dtheta in meV). Multiply by kSpinCurrentNanoampPerUnit
/// for nA.
double spin_current(const LatticeConfig& cfg, double theta);
extern const double kSpinCurrentNanoampPerUnit;

/// g = (1/hbar) dE_m/dtheta * theta_zpf in rad/s.
double coupling_constant_g(const LatticeConfig& cfg, double theta0,
                           double theta_zpf);
/// Same, from a precomputed slope in meV/rad.
double coupling_from_slope(double slope_mev_per_rad, double theta_zpf);

double central_difference(const std::function<double(double)>& f, double x,
                          double h);

struct ThetaSample {
  double theta = 0.0;
  double energy = 0.0;        // meV
  double spin_current = 0.0;  // e meV / hbar
};

/// Uniform sweep of E_m and J_m over [theta_begin, theta_end], inclusive.
std::vector<ThetaSample> sweep_theta(const MagnetoJosephson& mj,
                                     double theta_begin, double theta_end,
                                     std::size_t points);

}  // namespace mtnv::lattice
