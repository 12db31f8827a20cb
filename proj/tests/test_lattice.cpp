#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mtnv/lattice.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace mtnv::lattice;
using std::numbers::pi;

namespace {

LatticeConfig uniform_config(std::size_t sites, double t, double alpha) {
  LatticeConfig cfg;
  cfg.hopping_t = t;
  cfg.spin_orbit_alpha = alpha;
  cfg.segments = {SegmentConfig{sites}, SegmentConfig{1}, SegmentConfig{1}};
  return cfg;
}

// Topological T-N-T junction small enough for the unit suite: the paper
// wire with the T-segment transverse field raised to 0.6 meV.
LatticeConfig topological_config() {
  LatticeConfig cfg = paper_lattice_config();
  cfg.segments[0].n_sites = 150;
  cfg.segments[2].n_sites = 150;
  cfg.segments[0].B_transverse = 0.6;
  cfg.segments[2].B_transverse = 0.6;
  return cfg;
}

const MagnetoJosephson& shared_junction() {
  static const MagnetoJosephson mj(topological_config());
  return mj;
}

LatticeConfig random_config(testgen::Gen& gen, std::size_t max_sites,
                            SpinOrbitForm form) {
  LatticeConfig cfg;
  cfg.hopping_t = gen.uniform(0.5, 30.0);
  cfg.spin_orbit_alpha = gen.uniform(-2.0, 2.0);
  cfg.spin_orbit_form = form;
  for (int k = 0; k < 3; ++k) {
    SegmentConfig s;
    s.n_sites = static_cast<std::size_t>(gen.integer(1, static_cast<int>(max_sites)));
    s.mu = gen.uniform(-1.0, 1.0);
    s.b_parallel = gen.uniform(-0.5, 0.5);
    s.B_transverse = gen.uniform(0.0, 1.0);
    s.theta = gen.uniform(-pi, pi);
    s.delta = gen.uniform(0.0, 1.0);
    s.phi = gen.uniform(-pi, pi);
    cfg.segments.push_back(s);
  }
  return cfg;
}

std::vector<oracle::WireSegment> oracle_segments(const LatticeConfig& cfg) {
  std::vector<oracle::WireSegment> out;
  for (const auto& s : cfg.segments) {
    out.push_back({s.n_sites, s.mu, s.b_parallel, s.B_transverse, s.theta,
                   s.delta, s.phi});
  }
  return out;
}

double weight(const Eigen::VectorXd& d, std::size_t begin, std::size_t end) {
  return d.segment(static_cast<Eigen::Index>(begin),
                   static_cast<Eigen::Index>(end - begin)).sum();
}

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(millitesla_to_mev(200.0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(hopping_from_mass(0.015, 10.0) == doctest::Approx(25.4).epsilon(0.002));
  CHECK(lattice_spin_orbit(0.2, 10.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("single site with no couplings is the band offset") {
  const auto cfg = uniform_config(1, 7.0, 0.0);
  const auto h = build_hamiltonian(cfg);
  // First site block; the bond to site 1 sits off the diagonal block.
  const Eigen::Matrix4cd block = h.topLeftCorner(4, 4);
  Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
  expected.diagonal() << -14.0, -14.0, 14.0, 14.0;
  CHECK((block - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("single-site pairing matches the 4x4 closed form") {
  const double t = 3.0;
  const double delta = 0.7;
  LatticeConfig cfg;
  cfg.hopping_t = t;
  SegmentConfig s{1};
  s.delta = delta;
  cfg.segments = {s, s, s};
  const Eigen::Matrix4cd block = build_hamiltonian(cfg).topLeftCorner(4, 4);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(block);
  const double e = std::sqrt(4 * t * t + delta * delta);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-e).epsilon(1e-13));
  CHECK(es.eigenvalues()(1) == doctest::Approx(-e).epsilon(1e-13));
  CHECK(es.eigenvalues()(2) == doctest::Approx(e).epsilon(1e-13));
  CHECK(es.eigenvalues()(3) == doctest::Approx(e).epsilon(1e-13));
}

TEST_CASE("validate rejects malformed configs") {
  LatticeConfig cfg = uniform_config(3, 1.0, 0.0);
  cfg.segments.pop_back();
  CHECK_THROWS_AS(build_hamiltonian(cfg), ConfigError);
  cfg = uniform_config(3, 0.0, 0.0);
  CHECK_THROWS_AS(build_hamiltonian(cfg), ConfigError);
  cfg = uniform_config(3, 1.0, 0.0);
  cfg.segments[1].n_sites = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = uniform_config(3, 1.0, 0.0);
  cfg.segments[2].delta = -0.1;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("property: builder equals the second-quantized oracle") {
  testgen::Gen gen(101);
  for (auto form : {SpinOrbitForm::kAxial, SpinOrbitForm::kSpinFlip}) {
    for (int k = 0; k < 40; ++k) {
      const auto cfg = random_config(gen, 4, form);
      const auto ours = build_hamiltonian(cfg);
      const auto ref = oracle::second_quantized_bdg(
          oracle_segments(cfg), cfg.hopping_t, cfg.spin_orbit_alpha,
          form == SpinOrbitForm::kSpinFlip);
      REQUIRE(ours.rows() == ref.rows());
      CHECK((ours - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("property: Hermiticity and particle-hole symmetry") {
  testgen::Gen gen(202);
  for (int k = 0; k < 25; ++k) {
    const auto cfg = random_config(
        gen, 12, k % 2 ? SpinOrbitForm::kSpinFlip : SpinOrbitForm::kAxial);
    const auto h = build_hamiltonian(cfg);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    const auto s = diagonalize(h, cfg.segment_sites());
    const double norm = h.cwiseAbs().maxCoeff();
    const auto n = s.eigenvalues.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(std::abs(s.eigenvalues(i) + s.eigenvalues(n - 1 - i)) < 1e-9 * norm);
      CHECK(s.partner[static_cast<std::size_t>(i)] == n - 1 - i);
    }
    // C maps an eigenvector at E to one at -E.
    for (Eigen::Index i = 0; i < n; i += 7) {
      const ComplexVector v = s.eigenvectors.col(i);
      const ComplexVector cv = particle_hole_conjugate(v);
      CHECK((h * cv + s.eigenvalues(i) * cv).norm() < 1e-9 * norm);
    }
    const ComplexMatrix gram = s.eigenvectors.adjoint() * s.eigenvectors;
    CHECK((gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("property: eigenvalues match the Jacobi oracle on small lattices") {
  testgen::Gen gen(303);
  for (int k = 0; k < 12; ++k) {
    auto cfg = random_config(gen, 2, SpinOrbitForm::kAxial);  // <= 6 sites
    const auto h = build_hamiltonian(cfg);
    const auto s = diagonalize(h);
    const auto ref = oracle::jacobi_hermitian(h);
    REQUIRE(ref.size() == static_cast<std::size_t>(s.eigenvalues.size()));
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(std::abs(s.eigenvalues(static_cast<Eigen::Index>(i)) - ref[i]) < 1e-9);
    }
  }
}

TEST_CASE("diagonalize a diagonal matrix and reject non-Hermitian input") {
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d.diagonal() << 3.0, -1.0, 2.0, -4.0;
  const auto s = diagonalize(d);
  CHECK(s.eigenvalues(0) == -4.0);
  CHECK(s.eigenvalues(1) == -1.0);
  CHECK(s.eigenvalues(2) == 2.0);
  CHECK(s.eigenvalues(3) == 3.0);
  CHECK(std::abs(s.eigenvectors(3, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(s.eigenvectors(0, 3)) == doctest::Approx(1.0));

  ComplexMatrix bad = d;
  bad(0, 1) = 1e-6;
  CHECK_THROWS_AS(diagonalize(bad), std::domain_error);
}

TEST_CASE("rotate_spin and particle_hole_conjugate") {
  testgen::Gen gen(404);
  const ComplexVector v = gen.state(40);
  CHECK((rotate_spin(v, 4 * pi) - v).norm() < 1e-13);
  CHECK((rotate_spin(v, 2 * pi) + v).norm() < 1e-13);
  CHECK(rotate_spin(v, 0.3).norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((particle_hole_conjugate(particle_hole_conjugate(v)) - v).norm() < 1e-14);
}

TEST_CASE("is_topological") {
  CHECK(is_topological({1, 0.0, 0.0, 1.0, 0.0, 0.5, 0.0}));
  CHECK_FALSE(is_topological({1, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0}));
  // Delta^2 - b^2 = 0.75 = B^2 - mu^2 exactly: strict inequality says no.
  CHECK_FALSE(is_topological({1, 0.5, 0.5, 1.0, 0.0, 1.0, 0.0}));
  CHECK_THROWS_AS(is_topological({1, 0.0, 0.6, 1.0, 0.0, 0.5, 0.0}),
                  std::domain_error);
  const auto paper = paper_lattice_config();
  CHECK_FALSE(is_topological(paper.segments[0]));
  CHECK_FALSE(is_topological(paper.segments[2]));
}

TEST_CASE("Kitaev-limit oracle: Majorana combinations are the end modes") {
  const std::size_t n = 12;
  const double t = 1.0;
  const double d_up = 0.01;
  const double d_dn = 0.025;
  const ComplexMatrix h = oracle::embed_spin_channels(
      oracle::kitaev_chain(n, t, d_up), oracle::kitaev_chain(n, t, d_dn));
  REQUIRE((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  const auto s = diagonalize(h);
  const auto m = extract_majoranas(s);

  CHECK(m.epsilon1 == doctest::Approx(2 * d_up).epsilon(1e-12));
  CHECK(m.epsilon2 == doctest::Approx(2 * d_dn).epsilon(1e-12));
  CHECK(m.bulk_edge == doctest::Approx(2 * t).epsilon(1e-12));

  // Outer pair from the up chain, inner pair from the down chain; each mode
  // lives on a single end site and a single channel.
  const std::array<std::size_t, 4> site{0, 0, n - 1, n - 1};
  const std::array<std::array<int, 2>, 4> comps{
      {{0, 3}, {1, 2}, {1, 2}, {0, 3}}};
  for (std::size_t k = 0; k < 4; ++k) {
    CAPTURE(k);
    CHECK(m.densities[k](static_cast<Eigen::Index>(site[k])) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const ComplexVector& g = m.vectors[k];
    const auto base = static_cast<Eigen::Index>(4 * site[k]);
    const double channel = std::norm(g(base + comps[k][0])) +
                           std::norm(g(base + comps[k][1]));
    CHECK(channel == doctest::Approx(1.0).epsilon(1e-12));
    // Majorana condition: C gamma = gamma.
    CHECK((particle_hole_conjugate(g) - g).norm() < 1e-12);
  }
  // The two Majoranas of one Dirac level are orthogonal.
  CHECK(std::abs(m.vectors[0].dot(m.vectors[3])) < 1e-12);
  CHECK(std::abs(m.vectors[1].dot(m.vectors[2])) < 1e-12);
}

TEST_CASE("non-topological spectra are rejected") {
  LatticeConfig cfg = paper_lattice_config();
  cfg.segments[0].n_sites = 60;
  cfg.segments[2].n_sites = 40;
  for (auto& s : cfg.segments) s.B_transverse = 0.0;  // Delta^2 - b^2 > B^2 - mu^2
  const auto s = diagonalize(build_hamiltonian(cfg), cfg.segment_sites());
  CHECK_THROWS_AS(extract_majoranas(s), NotTopologicalError);
  CHECK_THROWS_AS(MagnetoJosephson{cfg}, NotTopologicalError);
  CHECK_THROWS_AS(MagnetoJosephson{paper_lattice_config()}, NotTopologicalError);
  CHECK_THROWS_AS(hybridization_energy(paper_lattice_config(), 0.0),
                  NotTopologicalError);
}

TEST_CASE("topological junction: Majorana localization and normalization") {
  const auto& mj = shared_junction();
  const auto& m = mj.modes();
  const auto sites = mj.config().segment_sites();
  const std::size_t left_end = sites[0];
  const std::size_t right_begin = sites[0] + sites[1];
  const std::size_t total = right_begin + sites[2];

  CHECK(m.epsilon1 < m.epsilon2);
  CHECK(m.epsilon2 < kInGapRatio * m.bulk_edge);
  for (const auto& d : m.densities) {
    CHECK(d.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.minCoeff() >= 0.0);
  }
  // gamma_1 at the outer left end, gamma_4 at the outer right end.
  CHECK(weight(m.densities[0], 0, left_end / 2) > 0.9);
  CHECK(weight(m.densities[3], right_begin + sites[2] / 2, total) > 0.9);
  // gamma_2 / gamma_3 gather around the inner T/N boundaries.
  CHECK(weight(m.densities[1], left_end / 2, right_begin) > 0.9);
  CHECK(weight(m.densities[2], left_end, right_begin + sites[2] / 2) > 0.9);
  CHECK(m.epsilon1 < 0.1 * m.epsilon2);
}

TEST_CASE("magneto-Josephson periodicity, sign flip and gauge covariance") {
  const auto& mj = shared_junction();
  const double e0 = mj.energy(0.0);
  CHECK(e0 > 0.0);
  CHECK(e0 == doctest::Approx(mj.modes().epsilon2).epsilon(1e-6));

  for (int k = 0; k < 64; ++k) {
    const double theta = 4 * pi * k / 64.0;
    const double e = mj.energy(theta);
    const double scale = std::max(std::abs(e), 1e-6 * e0);
    CHECK(std::abs(mj.energy(theta + 4 * pi) - e) < 1e-6 * scale);
    CHECK(std::abs(mj.energy(theta + 2 * pi) + e) < 1e-6 * scale);
  }

  testgen::Gen gen(505);
  for (int k = 0; k < 10; ++k) {
    const double tl = gen.uniform(-pi, pi);
    const double tr = gen.uniform(-pi, pi);
    const double shift = gen.uniform(-2 * pi, 2 * pi);
    const double a = std::abs(mj.matrix_element(tl, tr));
    const double b = std::abs(mj.matrix_element(tl + shift, tr + shift));
    CHECK(b == doctest::Approx(a).epsilon(1e-9));
  }
}

TEST_CASE("spin current: stencil agreement, periodicity, extremum") {
  const auto& mj = shared_junction();
  for (double theta : {0.4, 1.3, 2.9, 5.0}) {
    const double fd = mj.slope(theta);
    const double ref = oracle::five_point([&](double x) { return mj.energy(x); },
                                          theta, 1e-2);
    CHECK(fd == doctest::Approx(ref).epsilon(0.01));
    CHECK(mj.slope(theta + 4 * pi) == doctest::Approx(fd).epsilon(1e-6));
  }
  // Antiperiodic like E_m itself.
  for (double theta : {0.0, 1.1, 3.7}) {
    CHECK(mj.slope(theta + 2 * pi) ==
          doctest::Approx(-mj.slope(theta)).epsilon(1e-6).scale(mj.energy(0.0)));
  }

  const auto sweep = sweep_theta(mj, 0.0, 4 * pi, 33);
  REQUIRE(sweep.size() == 33);
  CHECK(sweep.front().theta == 0.0);
  CHECK(sweep.back().theta == doctest::Approx(4 * pi));
  CHECK(sweep[16].energy == doctest::Approx(-sweep[0].energy).epsilon(1e-6));
  CHECK(sweep.back().spin_current ==
        doctest::Approx(sweep.front().spin_current).epsilon(1e-6).scale(mj.energy(0.0)));
}

TEST_CASE("central difference against the five-point stencil") {
  auto f = [](double x) { return std::sin(1.3 * x) * std::exp(0.2 * x); };
  for (double x : {-1.0, 0.2, 2.5}) {
    const double cd = central_difference(f, x, 1e-3);
    const double ref = oracle::five_point(f, x, 1e-3);
    CHECK(cd == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("coupling constant") {
  CHECK(coupling_constant_g(paper_lattice_config(), 0.0, 0.0) == 0.0);
  const double slope = 0.01;  // meV / rad
  const double hand = slope * 1.602176634e-22 / 1.054571817e-34 * 3e-5;
  CHECK(coupling_from_slope(slope, 3e-5) == doctest::Approx(hand).epsilon(1e-12));
  const double na = 1.602176634e-19 * 1.602176634e-22 / 1.054571817e-34 * 1e9;
  CHECK(kSpinCurrentNanoampPerUnit == doctest::Approx(na).epsilon(1e-12));
}
