#include "mtnv/hilbert.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "mtnv/constants.hpp"

namespace mtnv::hilbert {

SpaceLayout::SpaceLayout(std::size_t fock) : fock_dim(fock) {
  if (fock_dim < 2) throw DimensionError("fock_dim must be >= 2");
}

std::size_t SpaceLayout::slot_dim(Slot s) const {
  switch (s) {
    case Slot::kTopological: return kQubitDim;
    case Slot::kTorsion: return fock_dim;
    case Slot::kSpin: return kNvDim;
  }
  return 0;
}

std::size_t SpaceLayout::index(std::size_t qubit, std::size_t phonons,
                               std::size_t spin) const {
  return (qubit * fock_dim + phonons) * kNvDim + spin;
}

PauliOps pauli_ops() {
  using C = std::complex<double>;
  PauliOps p;
  p.sigma_minus = OperatorMatrix::Zero(2, 2);
  p.sigma_minus(0, 1) = 1.0;
  p.sigma_plus = p.sigma_minus.adjoint();
  p.sigma_x = p.sigma_minus + p.sigma_plus;
  p.sigma_y = OperatorMatrix::Zero(2, 2);
  p.sigma_y(0, 1) = C(0.0, 1.0);
  p.sigma_y(1, 0) = C(0.0, -1.0);
  p.sigma_z = p.sigma_plus * p.sigma_minus - p.sigma_minus * p.sigma_plus;
  p.identity = OperatorMatrix::Identity(2, 2);
  return p;
}

OperatorMatrix ladder_ops(std::size_t fock_dim) {
  if (fock_dim < 2) throw DimensionError("ladder_ops: fock_dim must be >= 2");
  const auto n = static_cast<Eigen::Index>(fock_dim);
  OperatorMatrix b = OperatorMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    b(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  return b;
}

OperatorMatrix identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return OperatorMatrix::Identity(n, n);
}

OperatorMatrix embed(const OperatorMatrix& op, Slot slot,
                     const SpaceLayout& layout) {
  const std::size_t want = layout.slot_dim(slot);
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != want) {
    throw DimensionError("embed: operator is " + std::to_string(op.rows()) +
                         "x" + std::to_string(op.cols()) +
                         ", slot needs dimension " + std::to_string(want));
  }
  const OperatorMatrix tp = slot == Slot::kTopological
                                ? op
                                : identity(SpaceLayout::kQubitDim);
  const OperatorMatrix tor =
      slot == Slot::kTorsion ? op : identity(layout.fock_dim);
  const OperatorMatrix nv =
      slot == Slot::kSpin ? op : identity(SpaceLayout::kNvDim);
  const OperatorMatrix left = Eigen::kroneckerProduct(tp, tor);
  return Eigen::kroneckerProduct(left, nv);
}

StateVector product_state(const StateVector& qubit, const StateVector& phonon,
                          const StateVector& spin) {
  const StateVector left = Eigen::kroneckerProduct(qubit, phonon);
  return Eigen::kroneckerProduct(left, spin);
}

StateVector fock_state(std::size_t n, std::size_t fock_dim) {
  if (n >= fock_dim) throw DimensionError("fock_state: n >= fock_dim");
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(fock_dim));
  v(static_cast<Eigen::Index>(n)) = 1.0;
  return v;
}

double hermiticity_error(const OperatorMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const OperatorMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_error(m) <= tol;
}

Eigen::Vector3cd bright_state() {
  return Eigen::Vector3cd(0.0, 1.0, 1.0) / std::sqrt(2.0);
}

Eigen::Vector3cd dark_state() {
  return Eigen::Vector3cd(0.0, 1.0, -1.0) / std::sqrt(2.0);
}

DressedBasis dress_nv(double delta, double omega_drive) {
  if (delta == 0.0 && omega_drive == 0.0) {
    throw std::domain_error("dress_nv: Delta and Omega are both zero");
  }
  DressedBasis d;
  d.delta = delta;
  d.omega_drive = omega_drive;
  // atan2 keeps 2 alpha in (0, pi) for Omega > 0, so |g> is always the lower
  // dressed state whatever the sign of Delta.
  d.mixing_angle_alpha =
      0.5 * std::atan2(2.0 * std::sqrt(2.0) * omega_drive, delta);
  const double root =
      std::sqrt(delta * delta + 8.0 * omega_drive * omega_drive);
  d.omega_d = delta;
  d.omega_e = 0.5 * (delta + root);
  d.omega_g = 0.5 * (delta - root);
  d.undriven = omega_drive == 0.0;

  const double c = std::cos(d.mixing_angle_alpha);
  const double s = std::sin(d.mixing_angle_alpha);
  const Eigen::Vector3cd zero(1.0, 0.0, 0.0);
  d.basis_vectors[0] = c * zero - s * bright_state();
  d.basis_vectors[1] = dark_state();
  d.basis_vectors[2] = s * zero + c * bright_state();
  return d;
}

double nv_zeeman_per_millitesla() {
  return constants::kTwoPi * constants::kNvLandeFactor *
         constants::kBohrMagnetonHzPerMilliTesla;
}

Eigen::Matrix3cd nv_hamiltonian_lab(double d_gs, double b_z, double b_mg,
                                    double theta, double b0, double omega0) {
  const double zeeman = nv_zeeman_per_millitesla();
  const double longitudinal = b_mg * std::sin(theta);
  const double delta_plus = d_gs + zeeman * (b_z + longitudinal) - omega0;
  const double delta_minus = d_gs - zeeman * (b_z - longitudinal) - omega0;
  const double omega = std::sqrt(2.0) / 4.0 * zeeman * b0;

  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(1, 1) = delta_plus;
  h(2, 2) = delta_minus;
  h(1, 0) = h(0, 1) = omega;
  h(2, 0) = h(0, 2) = omega;
  return h;
}

}  // namespace mtnv::hilbert
