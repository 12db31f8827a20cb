#include "mtnv/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "mtnv/constants.hpp"

namespace mtnv::models {

using hilbert::Slot;
using hilbert::embed;

OperatorMatrix DrivenHamiltonian::operator()(double t) const {
  OperatorMatrix h = constant;
  for (const auto& term : terms) {
    const double a = term.envelope(t);
    if (a != 0.0) h += a * term.op;
  }
  return h;
}

std::vector<double> DrivenHamiltonian::breakpoints(double t0, double t1) const {
  std::vector<double> out;
  for (double t : jump_times) {
    if (t > t0 && t < t1) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ModeOperators::ModeOperators(const SpaceLayout& l) : layout(l) {
  const auto pauli = hilbert::pauli_ops();
  b = embed(hilbert::ladder_ops(layout.fock_dim), Slot::kTorsion, layout);
  sigma_tp = embed(pauli.sigma_minus, Slot::kTopological, layout);
  sigma_nv = embed(pauli.sigma_minus, Slot::kSpin, layout);
  sigma_z_tp = embed(pauli.sigma_z, Slot::kTopological, layout);
  sigma_z_nv = embed(pauli.sigma_z, Slot::kSpin, layout);
  phonon_number = b.adjoint() * b;
  tp_number = sigma_tp.adjoint() * sigma_tp;
  nv_number = sigma_nv.adjoint() * sigma_nv;
  const OperatorMatrix bd = b.adjoint();
  tp_exchange = bd * sigma_tp + b * sigma_tp.adjoint();
  tp_dipole = (bd + b) * (sigma_tp + sigma_tp.adjoint());
  nv_exchange = bd * sigma_nv + b * sigma_nv.adjoint();
}

OperatorMatrix topology_torsion_hamiltonian(const SpaceLayout& layout,
                                            double omega_m, double omega_tp,
                                            double g, bool rwa) {
  const ModeOperators ops(layout);
  const OperatorMatrix& coupling = rwa ? ops.tp_exchange : ops.tp_dipole;
  return omega_m * ops.phonon_number + 0.5 * omega_tp * ops.sigma_z_tp -
         g * coupling;
}

OperatorMatrix spin_torsion_hamiltonian(const SpaceLayout& layout,
                                        double omega_m, double omega_nv,
                                        double lambda_e) {
  const ModeOperators ops(layout);
  return omega_m * ops.phonon_number + 0.5 * omega_nv * ops.sigma_z_nv +
         lambda_e * ops.nv_exchange;
}

DrivenHamiltonian driven_hamiltonian(const HybridModel& model) {
  if (!model.rwa && model.frame != Frame::kLab) {
    throw std::invalid_argument(
        "counter-rotating couplings need the lab frame");
  }
  model.g_envelope.validate();
  model.lambda_envelope.validate();

  const ModeOperators ops(model.layout);
  DrivenHamiltonian h;
  switch (model.frame) {
    case Frame::kResonantRotating:
      h.constant = 0.5 * (model.omega_TP - model.omega_m) * ops.sigma_z_tp +
                   0.5 * (model.omega_NV - model.omega_m) * ops.sigma_z_nv;
      break;
    case Frame::kLab:
      h.constant = model.omega_m * ops.phonon_number +
                   0.5 * model.omega_TP * ops.sigma_z_tp +
                   0.5 * model.omega_NV * ops.sigma_z_nv;
      break;
  }

  const PulseSchedule g = model.g_envelope;
  const PulseSchedule lambda = model.lambda_envelope;
  h.terms.push_back({[g](double t) { return g(t); },
                     -(model.rwa ? ops.tp_exchange : ops.tp_dipole)});
  h.terms.push_back({[lambda](double t) { return lambda(t); },
                     ops.nv_exchange});

  constexpr double kFar = 1e300;
  for (const auto& s : {g, lambda}) {
    const auto pts = s.breakpoints(-kFar, kFar);
    h.jump_times.insert(h.jump_times.end(), pts.begin(), pts.end());
  }
  std::sort(h.jump_times.begin(), h.jump_times.end());
  h.piecewise_constant =
      g.is_piecewise_constant() && lambda.is_piecewise_constant();
  return h;
}

OperatorMatrix full_hamiltonian(const HybridModel& model, double t) {
  return driven_hamiltonian(model)(t);
}

OperatorMatrix excitation_number(const SpaceLayout& layout) {
  const ModeOperators ops(layout);
  return ops.phonon_number + ops.tp_number + ops.nv_number;
}

std::array<std::size_t, 3> single_excitation_indices(
    const SpaceLayout& layout) {
  return {layout.index(1, 0, 0), layout.index(0, 1, 0), layout.index(0, 0, 1)};
}

Eigen::Matrix3cd single_excitation_block(const OperatorMatrix& h,
                                         const SpaceLayout& layout) {
  const auto idx = single_excitation_indices(layout);
  Eigen::Matrix3cd block;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      block(r, c) = h(static_cast<Eigen::Index>(idx[r]),
                      static_cast<Eigen::Index>(idx[c]));
    }
  }
  return block;
}

PolaritonDecomposition polariton_decomposition(double g, double lambda_e,
                                               double omega_m) {
  if (g == 0.0 && lambda_e == 0.0) {
    throw std::domain_error(
        "polariton_decomposition: undefined for g = lambda_e = 0");
  }
  PolaritonDecomposition p;
  p.beta = lambda_e == 0.0 ? std::numbers::pi / 2.0 : std::atan(-g / lambda_e);
  const double c = std::cos(p.beta);
  const double s = std::sin(p.beta);
  const double split = std::hypot(g, lambda_e);
  p.omega_dark = omega_m;
  p.omega_plus = omega_m + split;
  p.omega_minus = omega_m - split;
  p.dark_mode = Eigen::Vector3d(-c, 0.0, s);
  p.bright_polariton = Eigen::Vector3d(s, 0.0, c);
  const Eigen::Vector3d phonon(0.0, 1.0, 0.0);
  p.plus_mode = (p.bright_polariton + phonon) / std::sqrt(2.0);
  p.minus_mode = (p.bright_polariton - phonon) / std::sqrt(2.0);
  return p;
}

double TopologicalQubitMap::omega_tp() const {
  return (E_r - E_l) * constants::kMeVToJoule / constants::kHbar;
}

std::array<Eigen::Matrix4cd, 4> TopologicalQubitMap::majorana_operators() {
  using C = std::complex<double>;
  Eigen::Matrix2cd a;  // single-mode annihilation
  a << 0, 1, 0, 0;
  Eigen::Matrix2cd parity;
  parity << 1, 0, 0, -1;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix4cd fl = Eigen::kroneckerProduct(a, id);
  const Eigen::Matrix4cd fr = Eigen::kroneckerProduct(parity, a);
  const C i(0.0, 1.0);
  return {Eigen::Matrix4cd(fl + fl.adjoint()),
          Eigen::Matrix4cd(-i * (fl - fl.adjoint())),
          Eigen::Matrix4cd(fr + fr.adjoint()),
          Eigen::Matrix4cd(-i * (fr - fr.adjoint()))};
}

Eigen::Matrix<std::complex<double>, 4, 2>
TopologicalQubitMap::odd_parity_basis() {
  using C = std::complex<double>;
  const auto g = majorana_operators();
  const C i(0.0, 1.0);
  // i g1 g2 = 2 n_l - 1, so -sigma_z puts |0>_TP at n_l = 1.
  Eigen::Matrix<C, 4, 2> p = Eigen::Matrix<C, 4, 2>::Zero();
  p(2, 0) = 1.0;  // |1_l 0_r>
  p(1, 1) = 1.0;  // |0_l 1_r>
  const Eigen::Matrix4cd x = i * g[1] * g[2];
  const C m = p.col(0).dot(x * p.col(1));
  p.col(1) *= -std::conj(m) / std::abs(m);
  return p;
}

Eigen::Matrix2cd TopologicalQubitMap::project(const Eigen::Matrix4cd& op) {
  const auto p = odd_parity_basis();
  return p.adjoint() * op * p;
}

double mixing_angle(double g, double lambda_e) {
  return std::atan2(-g, lambda_e);
}

}  // namespace mtnv::models
