#pragma once

// Dense operator algebra on the tripartite space
//   topological qubit (2) x torsional oscillator (fock_dim) x NV dressed
//   two-level system {|d>, |e>} (2),
// and the driven NV three-level dressed-state construction.
//
// Two-level conventions: index 0 is the lower state (|0>_TP, |d>_NV), index 1
// the upper one. sigma_minus = |0><1| and sigma_z = |1><1| - |0><0|.

#include <array>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

namespace mtnv::hilbert {

using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Slot { kTopological = 0, kTorsion = 1, kSpin = 2 };

struct SpaceLayout {
  static constexpr std::size_t kQubitDim = 2;
  static constexpr std::size_t kNvDim = 2;
  std::size_t fock_dim = 10;

  explicit SpaceLayout(std::size_t fock = 10);

  std::size_t total_dim() const { return kQubitDim * fock_dim * kNvDim; }
  std::size_t slot_dim(Slot s) const;
  /// Index of the product basis state |q, n, s>.
  std::size_t index(std::size_t qubit, std::size_t phonons,
                    std::size_t spin) const;
};

struct PauliOps {
  OperatorMatrix sigma_minus;
  OperatorMatrix sigma_plus;
  OperatorMatrix sigma_x;
  OperatorMatrix sigma_y;
  OperatorMatrix sigma_z;
  OperatorMatrix identity;
};

PauliOps pauli_ops();
/// Truncated annihilation operator, <n-1|b|n> = sqrt(n). Needs fock_dim >= 2.
OperatorMatrix ladder_ops(std::size_t fock_dim);
OperatorMatrix identity(std::size_t dim);

/// op placed in `slot` with identities elsewhere, order (TP, Tor, NV).
OperatorMatrix embed(const OperatorMatrix& op, Slot slot,
                     const SpaceLayout& layout);

/// Product state |qubit> x |n> x |spin> from local amplitudes.
StateVector product_state(const StateVector& qubit, const StateVector& phonon,
                          const StateVector& spin);
StateVector fock_state(std::size_t n, std::size_t fock_dim);

bool is_hermitian(const OperatorMatrix& m, double tol);
double hermiticity_error(const OperatorMatrix& m);

/// Eigenbasis of the symmetric-detuning NV Hamiltonian
///   Delta (|+1><+1| + |-1><-1|) + Omega (|+1><0| + |-1><0| + h.c.)
/// over {|0>, |+1>, |-1>}.
struct DressedBasis {
  double mixing_angle_alpha = 0.0;  // tan(2 alpha) = 2 sqrt2 Omega / Delta
  double delta = 0.0;
  double omega_drive = 0.0;
  double omega_g = 0.0;
  double omega_d = 0.0;
  double omega_e = 0.0;
  /// |g>, |d>, |e> as columns over {|0>, |+1>, |-1>}.
  std::array<Eigen::Vector3cd, 3> basis_vectors;
  /// Omega == 0: |e> and |d> are degenerate and undriven.
  bool undriven = false;
};

/// Throws std::domain_error when Delta and Omega are both zero.
DressedBasis dress_nv(double delta, double omega_drive);

/// Bright and dark spin states over {|0>, |+1>, |-1>}.
Eigen::Vector3cd bright_state();
Eigen::Vector3cd dark_state();

/// Rotating-frame NV Hamiltonian over {|0>, |+1>, |-1>} (rad/s, hbar = 1):
///   Delta_pm = D_gs +- g_e mu_B (B_z +- B_mg sin theta) - omega0,
///   Omega = (sqrt2/4) g_e mu_B B0.
/// Fields in mT, D_gs and omega0 in rad/s.
Eigen::Matrix3cd nv_hamiltonian_lab(double d_gs, double b_z, double b_mg,
                                    double theta, double b0, double omega0);

/// g_e mu_B in rad/s per mT.
double nv_zeeman_per_millitesla();

}  // namespace mtnv::hilbert
