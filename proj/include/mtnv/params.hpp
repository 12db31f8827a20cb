#pragma once

// Device parameters and the quantities derived from them.
//
// Physical inputs are SI (or the unit named in the field). The dynamics
// modules work in "simulation units": hbar = 1 and every rate expressed as a
// multiple of the reference coupling g0, so time is measured in 1/g0.

namespace mtnv::params {

struct CantileverParams {
  double torsional_spring_constant = 3.0e-18;  // N m / rad
  double moment_of_inertia = 4.8e-33;          // kg m^2
  double temperature = 20.0e-3;                // K
};

struct DerivedMechanics {
  double omega_m = 0.0;               // rad / s
  double theta_zpf = 0.0;             // rad
  double angular_momentum_zpf = 0.0;  // J s
  double n_th = 0.0;                  // mean thermal phonon number
};

/// Coupling constants and decay rates. Angular frequencies in rad/s, or
/// dimensionless multiples of g0 after to_simulation_units().
struct CouplingParams {
  double g0 = 0.0;
  double lambda_e = 0.0;
  double Gamma1 = 0.0;   // topological qubit relaxation
  double Gamma2 = 0.0;   // topological qubit dephasing
  double gamma_m = 0.0;  // mechanical damping
  double gamma_s = 0.0;  // NV dephasing
};

/// omega_m = sqrt(K/I), theta_zpf = (hbar^2/(K I))^(1/4),
/// L_zpf = hbar / (2 theta_zpf), n_th = Bose occupation at T.
/// Throws std::domain_error for non-positive inputs.
DerivedMechanics derive_mechanics(const CantileverParams& p);

/// Bose-Einstein occupation 1/(exp(hbar w / kT) - 1). Returns 0 at T = 0.
double bose_occupation(double omega, double temperature);

/// lambda_e = g_e mu_B B_mg theta_zpf / hbar * cos(mixing_angle), in rad/s.
/// B_mg in mT; mu_B = 14 MHz/mT taken as a cyclic frequency.
double spin_torsion_coupling(double b_mg_millitesla, double theta_zpf,
                             double mixing_angle);

/// Divide every rate by g0. Throws std::domain_error if g0 <= 0.
CouplingParams to_simulation_units(const CouplingParams& c);

/// Inverse of to_simulation_units for a given physical g0.
CouplingParams to_physical_units(const CouplingParams& c, double g0);

/// Fig. 4 / Fig. 5 "realistic" parameter set in simulation units:
/// g = lambda_e = 1, Gamma1 = Gamma2 = 0.05, gamma_m = 2e-4, gamma_s = 0.1.
CouplingParams paper_realistic_couplings();

/// Same couplings with every decay rate zero.
CouplingParams paper_ideal_couplings();

/// g0 = 2 pi x 200 kHz.
inline constexpr double kPaperG0 = 2.0 * 3.14159265358979323846 * 200.0e3;
inline constexpr double kPaperThermalOccupation = 104.0;

}  // namespace mtnv::params
