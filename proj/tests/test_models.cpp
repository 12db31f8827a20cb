#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "mtnv/constants.hpp"
#include "mtnv/models.hpp"
#include "support/generators.hpp"

using namespace mtnv;
using namespace mtnv::models;
using hilbert::Slot;
using std::numbers::pi;

namespace {

double max_abs(const OperatorMatrix& m) { return m.cwiseAbs().maxCoeff(); }

hilbert::StateVector evolve_unitary(const OperatorMatrix& h,
                                    const hilbert::StateVector& psi, double t) {
  const std::complex<double> i(0.0, 1.0);
  const OperatorMatrix u = (-i * t * h).exp();
  return u * psi;
}

// Permutation exchanging the TP and NV slots (both two-dimensional).
OperatorMatrix slot_swap(const SpaceLayout& l) {
  const auto n = static_cast<Eigen::Index>(l.total_dim());
  OperatorMatrix s = OperatorMatrix::Zero(n, n);
  for (std::size_t q = 0; q < 2; ++q) {
    for (std::size_t k = 0; k < l.fock_dim; ++k) {
      for (std::size_t v = 0; v < 2; ++v) {
        s(static_cast<Eigen::Index>(l.index(v, k, q)),
          static_cast<Eigen::Index>(l.index(q, k, v))) = 1.0;
      }
    }
  }
  return s;
}

HybridModel gaussian_model(testgen::Gen& gen, std::size_t fock) {
  HybridModel m;
  m.layout = SpaceLayout(fock);
  m.g_envelope = PulseSchedule::gaussian(gen.uniform(0.1, 2.0),
                                         gen.uniform(-2.0, 6.0),
                                         gen.uniform(1.0, 30.0));
  m.lambda_envelope = PulseSchedule::boxcar(gen.uniform(0.1, 2.0),
                                            gen.uniform(-2.0, 1.0),
                                            gen.uniform(2.0, 6.0));
  return m;
}

}  // namespace

TEST_CASE("mode operators") {
  const SpaceLayout l(4);
  const ModeOperators ops(l);
  CHECK(ops.b.rows() == 16);
  CHECK(max_abs(ops.phonon_number - ops.b.adjoint() * ops.b) < 1e-15);
  CHECK(max_abs(ops.tp_number - ops.sigma_tp.adjoint() * ops.sigma_tp) < 1e-15);
  CHECK(max_abs(ops.tp_exchange - (ops.b.adjoint() * ops.sigma_tp +
                                   ops.b * ops.sigma_tp.adjoint())) < 1e-15);
  const auto e = excitation_number(l);
  CHECK(std::abs(e(static_cast<Eigen::Index>(l.index(1, 3, 1)),
                   static_cast<Eigen::Index>(l.index(1, 3, 1))) - 5.0) < 1e-15);
}

TEST_CASE("property: excitation number conserved and H Hermitian at random t") {
  testgen::Gen gen(31);
  for (int model = 0; model < 5; ++model) {
    auto m = gaussian_model(gen, 5);
    if (model % 2) {
      m.frame = Frame::kLab;
      m.omega_m = gen.uniform(0.5, 3.0);
      m.omega_TP = gen.uniform(0.5, 3.0);
      m.omega_NV = gen.uniform(0.5, 3.0);
    }
    const auto n = excitation_number(m.layout);
    const auto dh = driven_hamiltonian(m);
    for (int k = 0; k < 200; ++k) {
      const double t = gen.uniform(-5.0, 10.0);
      const auto h = dh(t);
      CHECK(hilbert::hermiticity_error(h) < 1e-14);
      CHECK(max_abs(h * n - n * h) < 1e-12);
    }
  }
}

TEST_CASE("counter-rotating terms break excitation conservation") {
  HybridModel m;
  m.layout = SpaceLayout(4);
  m.frame = Frame::kLab;
  m.rwa = false;
  m.omega_m = m.omega_TP = 1.0;
  m.g_envelope = PulseSchedule::constant(0.1);
  const auto h = full_hamiltonian(m, 0.0);
  const auto n = excitation_number(m.layout);
  CHECK(max_abs(h * n - n * h) > 0.05);
  CHECK(hilbert::hermiticity_error(h) < 1e-15);

  m.frame = Frame::kResonantRotating;
  CHECK_THROWS_AS(driven_hamiltonian(m), std::invalid_argument);
}

TEST_CASE("property: Hamiltonian is linear in each envelope") {
  testgen::Gen gen(32);
  for (int k = 0; k < 20; ++k) {
    auto m = gaussian_model(gen, 4);
    const double t = gen.uniform(0.0, 4.0);
    auto zero = m;
    zero.g_envelope = PulseSchedule::constant(0.0);
    zero.lambda_envelope = PulseSchedule::constant(0.0);
    auto doubled = m;
    doubled.g_envelope.amplitude *= 2.0;
    doubled.lambda_envelope.amplitude *= 2.0;
    const auto h0 = full_hamiltonian(zero, t);
    const auto h1 = full_hamiltonian(m, t);
    const auto h2 = full_hamiltonian(doubled, t);
    CHECK(max_abs((h2 - h0) - 2.0 * (h1 - h0)) < 1e-12);

    const ModeOperators ops(m.layout);
    const OperatorMatrix expect = -m.g_envelope(t) * ops.tp_exchange +
                                  m.lambda_envelope(t) * ops.nv_exchange;
    CHECK(max_abs(h1 - h0 - expect) < 1e-12);
  }
}

TEST_CASE("resonant rotating frame carries no free terms") {
  HybridModel m;
  m.layout = SpaceLayout(3);
  m.omega_m = m.omega_TP = m.omega_NV = 5.0;
  CHECK(max_abs(full_hamiltonian(m, 0.0)) == 0.0);
  m.omega_NV = 6.0;
  const ModeOperators ops(m.layout);
  CHECK(max_abs(full_hamiltonian(m, 0.0) - 0.5 * ops.sigma_z_nv) < 1e-15);
}

TEST_CASE("slot-exchange symmetry between the two spin couplings") {
  const SpaceLayout l(5);
  const auto s = slot_swap(l);
  CHECK(max_abs(s * s - OperatorMatrix::Identity(20, 20)) == 0.0);
  testgen::Gen gen(33);
  for (int k = 0; k < 10; ++k) {
    const double wm = gen.uniform(0.5, 2.0);
    const double w = gen.uniform(0.5, 2.0);
    const double g = gen.uniform(-1.0, 1.0);
    const auto tt = topology_torsion_hamiltonian(l, wm, w, g, true);
    const auto st = spin_torsion_hamiltonian(l, wm, w, -g);
    CHECK(max_abs(s * tt * s - st) < 1e-14);
  }
}

TEST_CASE("property: polariton spectrum and modes diagonalize the block") {
  testgen::Gen gen(34);
  const SpaceLayout l(4);
  for (int k = 0; k < 200; ++k) {
    HybridModel m;
    m.layout = l;
    const double g = gen.uniform(0.0, 2.0);
    const double lam = gen.uniform(0.01, 2.0);
    m.g_envelope = PulseSchedule::constant(g);
    m.lambda_envelope = PulseSchedule::constant(lam);
    const Eigen::Matrix3cd block = single_excitation_block(full_hamiltonian(m, 0.0), l);
    const auto p = polariton_decomposition(g, lam, 0.0);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(block);
    CHECK(std::abs(es.eigenvalues()(0) - p.omega_minus) < 1e-12);
    CHECK(std::abs(es.eigenvalues()(1) - p.omega_dark) < 1e-12);
    CHECK(std::abs(es.eigenvalues()(2) - p.omega_plus) < 1e-12);

    const Eigen::Matrix3d r = block.real();
    CHECK((r * p.dark_mode - p.omega_dark * p.dark_mode).norm() < 1e-12);
    CHECK((r * p.plus_mode - p.omega_plus * p.plus_mode).norm() < 1e-12);
    CHECK((r * p.minus_mode - p.omega_minus * p.minus_mode).norm() < 1e-12);
    CHECK(p.dark_mode.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p.dark_mode.dot(p.bright_polariton)) < 1e-14);
    CHECK(std::tan(p.beta) == doctest::Approx(-g / lam).epsilon(1e-12));
  }
}

TEST_CASE("polariton limits") {
  // lambda_e = 0: dark mode is the NV spin, beta = pi/2.
  auto p = polariton_decomposition(1.0, 0.0, 2.0);
  CHECK(p.beta == doctest::Approx(pi / 2));
  CHECK((p.dark_mode - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  CHECK(p.omega_plus == doctest::Approx(3.0));
  CHECK(p.omega_minus == doctest::Approx(1.0));
  // g = 0 and g << lambda_e: dark mode is (minus) the topological qubit.
  p = polariton_decomposition(0.0, 1.0, 0.0);
  CHECK(std::abs(p.beta) < 1e-15);
  CHECK((p.dark_mode - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-15);
  p = polariton_decomposition(1e-8, 1.0, 0.0);
  CHECK(std::abs(p.dark_mode(0) + 1.0) < 1e-12);
  CHECK(std::abs(p.omega_plus - 1.0) < 1e-12);
  CHECK_THROWS_AS(polariton_decomposition(0.0, 0.0, 1.0), std::domain_error);

  CHECK(mixing_angle(0.0, 1.0) == 0.0);
  CHECK(mixing_angle(1.0, 0.0) == doctest::Approx(-pi / 2));
  CHECK(mixing_angle(1.0, 1.0) == doctest::Approx(-pi / 4));
}

TEST_CASE("resonant swap between the topological qubit and the oscillator") {
  HybridModel m;
  m.layout = SpaceLayout(4);
  m.g_envelope = PulseSchedule::constant(1.0);
  const auto h = full_hamiltonian(m, 0.0);
  const auto& l = m.layout;
  hilbert::StateVector psi = hilbert::StateVector::Zero(16);
  psi(static_cast<Eigen::Index>(l.index(1, 0, 0))) = 1.0;
  const auto out = evolve_unitary(h, psi, pi / 2);
  // -g coupling: |1,0> -> i |0,1> after a quarter period.
  CHECK(std::abs(out(static_cast<Eigen::Index>(l.index(0, 1, 0))) -
                 std::complex<double>(0.0, 1.0)) < 1e-12);
  const auto back = evolve_unitary(h, psi, pi);
  CHECK(std::abs(back(static_cast<Eigen::Index>(l.index(1, 0, 0))) + 1.0) < 1e-12);
}

TEST_CASE("rotating-wave approximation at weak coupling") {
  const SpaceLayout l(6);
  const double wm = 1.0;
  const double g = 0.05;
  const auto h_rwa = topology_torsion_hamiltonian(l, wm, wm, g, true);
  const auto h_full = topology_torsion_hamiltonian(l, wm, wm, g, false);
  const ModeOperators ops(l);
  hilbert::StateVector psi = hilbert::StateVector::Zero(24);
  psi(static_cast<Eigen::Index>(l.index(1, 0, 0))) = 1.0;
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double t = k * (pi / (2 * g)) / 10.0;
    const auto a = evolve_unitary(h_rwa, psi, t);
    const auto b = evolve_unitary(h_full, psi, t);
    const double pa = a.dot(ops.tp_number * a).real();
    const double pb = b.dot(ops.tp_number * b).real();
    worst = std::max(worst, std::abs(pa - pb));
  }
  CHECK(worst < 1e-2);
}

TEST_CASE("Majorana operators and the odd-parity qubit") {
  const auto g = TopologicalQubitMap::majorana_operators();
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  for (int a = 0; a < 4; ++a) {
    CHECK((g[a] - g[a].adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    for (int b = 0; b < 4; ++b) {
      const Eigen::Matrix4cd ac = g[a] * g[b] + g[b] * g[a];
      CHECK((ac - (a == b ? 2.0 : 0.0) * id).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
  const std::complex<double> i(0.0, 1.0);
  const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << -1, 0, 0, 1).finished();
  const Eigen::Matrix2cd sx = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  const Eigen::Matrix2cd sy = (Eigen::Matrix2cd() << 0, -i, i, 0).finished();
  const Eigen::Matrix2cd pz = TopologicalQubitMap::project(i * g[0] * g[1]);
  const Eigen::Matrix2cd px = TopologicalQubitMap::project(i * g[1] * g[2]);
  const Eigen::Matrix2cd py = TopologicalQubitMap::project(i * g[0] * g[2]);
  CHECK((pz + sz).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((px + sx).cwiseAbs().maxCoeff() < 1e-15);
  const double y_err = std::min((py - sy).cwiseAbs().maxCoeff(),
                                (py + sy).cwiseAbs().maxCoeff());
  CHECK(y_err < 1e-15);
  // Both basis states have odd total parity.
  const Eigen::Matrix4cd parity = -g[0] * g[1] * g[2] * g[3];
  const auto p = TopologicalQubitMap::odd_parity_basis();
  const Eigen::Matrix2cd pp = p.adjoint() * parity * p;
  CHECK((pp + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  TopologicalQubitMap q{0.01, 0.002, 0.03};
  CHECK(q.omega_tp() ==
        doctest::Approx(0.02 * constants::kMeVToJoule / constants::kHbar).epsilon(1e-14));
}
