#pragma once

// Hamiltonians of the topological-qubit / torsional-mode / NV-spin device and
// the polariton analysis of the resonant three-mode problem.
//
// All frequencies are in simulation units (hbar = 1, g0 = 1). Coupling
// signs follow the full tripartite Hamiltonian:
//   H = free - g(t) (b^+ s_TP^- + h.c.) + lambda_e(t) (b^+ s_NV^- + h.c.).

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mtnv/hilbert.hpp"
#include "mtnv/pulse.hpp"

namespace mtnv::models {

using hilbert::OperatorMatrix;
using hilbert::SpaceLayout;

/// H(t) = constant + sum_k envelope_k(t) * operator_k.
struct DrivenHamiltonian {
  struct Term {
    std::function<double(double)> envelope;
    OperatorMatrix op;
  };

  OperatorMatrix constant;
  std::vector<Term> terms;
  std::vector<double> jump_times;  // envelope discontinuities
  bool piecewise_constant = true;

  Eigen::Index dim() const { return constant.rows(); }
  OperatorMatrix operator()(double t) const;
  /// jump_times restricted to (t0, t1), sorted.
  std::vector<double> breakpoints(double t0, double t1) const;
};

enum class Frame {
  /// Frame rotating at omega_m on every mode: only detunings
  /// (omega_X - omega_m)/2 sigma_z survive, zero on resonance.
  kResonantRotating,
  /// Full free terms omega_m b^+ b + omega_TP/2 sigma_z + omega_NV/2 sigma_z.
  kLab,
};

struct HybridModel {
  SpaceLayout layout{10};
  double omega_m = 0.0;
  double omega_TP = 0.0;
  double omega_NV = 0.0;
  PulseSchedule g_envelope = PulseSchedule::constant(0.0);
  PulseSchedule lambda_envelope = PulseSchedule::constant(0.0);
  /// false keeps the counter-rotating topology-torsion terms; needs kLab.
  bool rwa = true;
  Frame frame = Frame::kResonantRotating;
};

/// Operators shared by all model Hamiltonians on one layout.
struct ModeOperators {
  explicit ModeOperators(const SpaceLayout& layout);

  SpaceLayout layout;
  OperatorMatrix b;            // torsional annihilation
  OperatorMatrix sigma_tp;     // s_TP^-
  OperatorMatrix sigma_nv;     // s_NV^-
  OperatorMatrix sigma_z_tp;
  OperatorMatrix sigma_z_nv;
  OperatorMatrix phonon_number;
  OperatorMatrix tp_number;    // s_TP^+ s_TP^-
  OperatorMatrix nv_number;    // s_NV^+ s_NV^-
  OperatorMatrix tp_exchange;  // b^+ s_TP^- + b s_TP^+
  OperatorMatrix tp_dipole;    // (b^+ + b) sigma_x,TP
  OperatorMatrix nv_exchange;  // b^+ s_NV^- + b s_NV^+
};

/// Lab-frame topology-torsion Hamiltonian on the tripartite space:
///   omega_m b^+ b + omega_TP/2 sigma_z - g (b^+ + b) sigma_x   (rwa = false)
///   omega_m b^+ b + omega_TP/2 sigma_z - g (b^+ s^- + b s^+)   (rwa = true)
OperatorMatrix topology_torsion_hamiltonian(const SpaceLayout& layout,
                                            double omega_m, double omega_tp,
                                            double g, bool rwa);

/// omega_m b^+ b + omega_NV/2 sigma_z + lambda_e (b^+ s^- + b s^+).
OperatorMatrix spin_torsion_hamiltonian(const SpaceLayout& layout,
                                        double omega_m, double omega_nv,
                                        double lambda_e);

/// The model as a constant part plus envelope-weighted couplings.
/// Throws std::invalid_argument for rwa = false outside the lab frame.
DrivenHamiltonian driven_hamiltonian(const HybridModel& model);

OperatorMatrix full_hamiltonian(const HybridModel& model, double t);

/// N = b^+ b + s_TP^+ s_TP^- + s_NV^+ s_NV^-.
OperatorMatrix excitation_number(const SpaceLayout& layout);

/// Basis indices of |1,0,d>, |0,1,d>, |0,0,e> (mode order TP, Tor, NV).
std::array<std::size_t, 3> single_excitation_indices(const SpaceLayout& layout);
Eigen::Matrix3cd single_excitation_block(const OperatorMatrix& h,
                                         const SpaceLayout& layout);

struct PolaritonDecomposition {
  double beta = 0.0;  // tan(beta) = -g / lambda_e
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double omega_dark = 0.0;
  /// Coefficients over (s_TP^-, b, s_NV^-).
  Eigen::Vector3d dark_mode;
  Eigen::Vector3d bright_polariton;
  Eigen::Vector3d plus_mode;
  Eigen::Vector3d minus_mode;
};

/// beta is taken in (-pi/2, pi/2], with beta = pi/2 when lambda_e = 0.
/// Throws std::domain_error when g = lambda_e = 0.
PolaritonDecomposition polariton_decomposition(double g, double lambda_e,
                                               double omega_m);

/// Abstract qubit encoded in the odd-parity sector of four Majoranas.
/// Fermions f_l = (g1 + i g2)/2, f_r = (g3 + i g4)/2 on the Fock basis
/// |n_l n_r> with index 2 n_l + n_r (Jordan-Wigner, f_l first).
struct TopologicalQubitMap {
  double E_l = 0.0;  // meV
  double E_m = 0.0;
  double E_r = 0.0;

  /// (E_r - E_l) / hbar in rad/s.
  double omega_tp() const;

  /// gamma_1 .. gamma_4 as 4x4 matrices on the two-fermion Fock space.
  static std::array<Eigen::Matrix4cd, 4> majorana_operators();
  /// Columns |0>_TP, |1>_TP inside the odd sector, phased so that
  /// i g1 g2 -> -sigma_z and i g2 g3 -> -sigma_x.
  static Eigen::Matrix<std::complex<double>, 4, 2> odd_parity_basis();
  /// P^dagger op P on the odd sector.
  static Eigen::Matrix2cd project(const Eigen::Matrix4cd& op);
};

/// Mixing angle along a schedule, atan2(-g, lambda_e); continuous for
/// lambda_e >= 0.
double mixing_angle(double g, double lambda_e);

}  // namespace mtnv::models
