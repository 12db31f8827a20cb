#pragma once

// Rabi exchange, two-step direct transfer and dark-polariton transfer of a
// topological-qubit state onto the NV spin. Time in units of 1/g0.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "mtnv/hilbert.hpp"
#include "mtnv/lindblad.hpp"
#include "mtnv/params.hpp"
#include "mtnv/pulse.hpp"

namespace mtnv::protocols {

using Complex = std::complex<double>;

struct ProtocolParams {
  /// Simulation units (g0 = 1).
  params::CouplingParams couplings = params::paper_realistic_couplings();
  double n_th = params::kPaperThermalOccupation;
  std::size_t fock_dim = 10;
  std::size_t samples = lindblad::kDefaultSamples;
  lindblad::IntegratorOptions integrator;
};

/// Ideal couplings with no bath.
ProtocolParams ideal_params();
/// Device decay rates and n_th = 104.
ProtocolParams dissipative_params();

/// Topological-qubit amplitudes c0 |0> + c1 |1>, normalized on use.
struct SourceState {
  Complex c0 = 0.0;
  Complex c1 = 1.0;

  static SourceState fock_one() { return {0.0, 1.0}; }
  static SourceState vacuum() { return {1.0, 0.0}; }
  static SourceState superposition() {
    return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  }
};

/// |source>_TP x |0>_m x |d>_NV.
hilbert::StateVector initial_state(const SourceState& source,
                                   const hilbert::SpaceLayout& layout);
/// |0>_TP x |0>_m x (c0 |d> + phase c1 |e>).
hilbert::StateVector target_state(const SourceState& source, Complex phase,
                                  const hilbert::SpaceLayout& layout);

inline constexpr double kDefaultRabiHorizon = 10.0;

/// Constant g = g0 and lambda_e from the couplings over [0, horizon].
lindblad::TrajectoryResult run_rabi(const ProtocolParams& p,
                                    const hilbert::StateVector& initial,
                                    double horizon = kDefaultRabiHorizon);
/// TP in |1>, mechanics in vacuum, NV in |d>.
lindblad::TrajectoryResult run_rabi(const ProtocolParams& p,
                                    double horizon = kDefaultRabiHorizon);

struct TransferReport {
  double final_fidelity = 0.0;
  double peak_phonon_occupation = 0.0;
  double adiabaticity_margin = 0.0;
  /// Deterministic phase the protocol imprints on the transferred amplitude;
  /// the target state compensates it.
  Complex transfer_phase = 1.0;
  double t_start = 0.0;
  double t_end = 0.0;
  lindblad::TrajectoryResult trajectory;
  std::vector<std::string> warnings;
};

/// g0 boxcar on [0, pi/(2 g0)] then lambda_e boxcar for pi/(2 lambda_e).
/// Throws std::invalid_argument unless g0, lambda_e > 0.
TransferReport run_direct_transfer(const ProtocolParams& p,
                                   const SourceState& source);

/// Paper Gaussian schedules on [0, 4 pi].
TransferReport run_dark_state_transfer(const ProtocolParams& p,
                                       const SourceState& source);
TransferReport run_dark_state_transfer(const ProtocolParams& p,
                                       const SourceState& source,
                                       const PulseSchedule& g,
                                       const PulseSchedule& lambda,
                                       double t_start, double t_end);

inline constexpr double kDarkWindowStart = 0.0;
inline constexpr double kDarkWindowEnd = 4.0 * 3.14159265358979323846;
inline constexpr double kMarginWarning = 10.0;

/// min over `times` of sqrt(g^2 + lambda^2) / |d beta/dt| with
/// beta = atan2(-g, lambda), d beta/dt by central differences. Returns
/// the largest double when beta never moves and 0 (plus a warning) when both
/// envelopes drop below 1e-12.
double adiabaticity_margin(const PulseSchedule& g, const PulseSchedule& lambda,
                           const std::vector<double>& times,
                           std::vector<std::string>* warnings = nullptr);

/// Phase picked up by an excitation following the dark mode from t0 to t1:
/// sign of sin(beta_1) / (-cos(beta_0)).
Complex dark_transfer_phase(const PulseSchedule& g, const PulseSchedule& lambda,
                            double t0, double t1);

}  // namespace mtnv::protocols
