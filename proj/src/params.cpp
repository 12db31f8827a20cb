#include "mtnv/params.hpp"

#include <cmath>
#include <stdexcept>

#include "mtnv/constants.hpp"

namespace mtnv::params {

using namespace mtnv::constants;

DerivedMechanics derive_mechanics(const CantileverParams& p) {
  if (!(p.torsional_spring_constant > 0.0) || !(p.moment_of_inertia > 0.0) ||
      !(p.temperature > 0.0)) {
    throw std::domain_error(
        "derive_mechanics: spring constant, moment of inertia and temperature "
        "must be strictly positive");
  }
  const double k = p.torsional_spring_constant;
  const double inertia = p.moment_of_inertia;

  DerivedMechanics out;
  out.omega_m = std::sqrt(k / inertia);
  out.theta_zpf = std::pow(kHbar * kHbar / (k * inertia), 0.25);
  out.angular_momentum_zpf = kHbar / (2.0 * out.theta_zpf);
  out.n_th = bose_occupation(out.omega_m, p.temperature);
  return out;
}

double bose_occupation(double omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  const double x = kHbar * omega / (kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double spin_torsion_coupling(double b_mg_millitesla, double theta_zpf,
                             double mixing_angle) {
  if (b_mg_millitesla < 0.0) {
    throw std::domain_error("spin_torsion_coupling: B_mg must be >= 0");
  }
  const double lambda = kTwoPi * kNvLandeFactor * kBohrMagnetonHzPerMilliTesla *
                        b_mg_millitesla * theta_zpf;
  return lambda * std::cos(mixing_angle);
}

CouplingParams to_simulation_units(const CouplingParams& c) {
  if (!(c.g0 > 0.0)) {
    throw std::domain_error("to_simulation_units: g0 must be > 0");
  }
  const double s = 1.0 / c.g0;
  return {c.g0 * s,     c.lambda_e * s, c.Gamma1 * s,
          c.Gamma2 * s, c.gamma_m * s,  c.gamma_s * s};
}

CouplingParams to_physical_units(const CouplingParams& c, double g0) {
  return {c.g0 * g0,     c.lambda_e * g0, c.Gamma1 * g0,
          c.Gamma2 * g0, c.gamma_m * g0,  c.gamma_s * g0};
}

CouplingParams paper_realistic_couplings() {
  return {1.0, 1.0, 0.05, 0.05, 2.0e-4, 0.1};
}

CouplingParams paper_ideal_couplings() { return {1.0, 1.0, 0.0, 0.0, 0.0, 0.0}; }

}  // namespace mtnv::params
