#pragma once

// Lindblad master equation
//   d rho/dt = -i [H(t), rho] + sum_k rate_k D[L_k] rho,
//   D[L] rho = L rho L^+ - 1/2 L^+ L rho - 1/2 rho L^+ L,
// integrated with an adaptive Dormand-Prince 5(4) scheme, plus a
// matrix-exponential reference propagator for small problems.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mtnv/hilbert.hpp"
#include "mtnv/models.hpp"
#include "mtnv/params.hpp"

namespace mtnv::lindblad {

using hilbert::OperatorMatrix;
using hilbert::StateVector;
using DensityMatrix = Eigen::MatrixXcd;

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CollapseOperator {
  OperatorMatrix op;
  double rate = 0.0;
  std::string label;
};

struct DissipatorSpec {
  std::vector<CollapseOperator> collapse_ops;

  /// Throws std::invalid_argument on a negative rate or a size mismatch.
  void validate(Eigen::Index dim) const;
};

/// gamma_s D(s_z,NV), Gamma1 D(s_TP^-), Gamma2 D(s_TP^+ s_TP^-),
/// (n_th + 1) gamma_m D(b), n_th gamma_m D(b^+); rates in simulation units.
DissipatorSpec device_dissipators(const hilbert::SpaceLayout& layout,
                                  const params::CouplingParams& rates,
                                  double n_th);

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 1e-3;
  double max_step = 0.0;  // 0 = unbounded
  std::size_t max_steps = 5'000'000;
  double trace_tolerance = 1e-4;
};

struct IntegratorStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
};

struct InvariantDiagnostics {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

struct EvolveOptions {
  IntegratorOptions integrator;
  /// Fidelity against this pure state is recorded when set.
  std::optional<StateVector> target;
  bool keep_states = false;
  /// Check Hermiticity, trace and spectrum at every sample.
  bool diagnostics = true;
};

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<DensityMatrix> states;  // only with keep_states
  /// <s_TP^+ s_TP^->, <b^+ b>, <s_NV^+ s_NV^-> per sample; empty for
  /// generic (non-tripartite) problems.
  std::vector<std::array<double, 3>> occupations;
  std::vector<double> fidelity;  // empty without a target
  DensityMatrix final_state;
  IntegratorStats stats;
  InvariantDiagnostics invariants;
};

/// Uniform grid with `samples` points on [t0, t1].
std::vector<double> sample_times(double t0, double t1, std::size_t samples);
inline constexpr std::size_t kDefaultSamples = 400;

DensityMatrix lindblad_rhs(const OperatorMatrix& h, const DissipatorSpec& diss,
                           const DensityMatrix& rho);

/// Integrates from times.front() through every grid point. Throws
/// std::invalid_argument for an invalid rho0 or grid, IntegrationError when
/// the trace drifts by more than trace_tolerance or steps run out.
TrajectoryResult evolve(const models::DrivenHamiltonian& h,
                        const DissipatorSpec& diss, const DensityMatrix& rho0,
                        const std::vector<double>& times,
                        const EvolveOptions& options = {});

/// Tripartite overload; also records occupations.
TrajectoryResult evolve(const models::HybridModel& model,
                        const DissipatorSpec& diss, const DensityMatrix& rho0,
                        const std::vector<double>& times,
                        const EvolveOptions& options = {});

/// <psi|rho|psi>. Throws std::domain_error unless |psi| = 1 to 1e-9.
double fidelity(const DensityMatrix& rho, const StateVector& target);

DensityMatrix pure_density(const StateVector& psi);

/// Throws std::invalid_argument unless rho is Hermitian, unit trace and
/// positive semidefinite to tol.
void check_density_matrix(const DensityMatrix& rho, double tol = 1e-9);

/// Column-stacked Liouvillian: vec(d rho/dt) = L vec(rho).
Eigen::MatrixXcd liouvillian(const OperatorMatrix& h,
                             const DissipatorSpec& diss);

inline constexpr Eigen::Index kOracleMaxDim = 16;

/// exp(L dt) on each constant piece of a piecewise-constant generator.
/// Throws hilbert::DimensionError above kOracleMaxDim and
/// std::invalid_argument for smooth envelopes.
DensityMatrix oracle_propagate(const models::DrivenHamiltonian& h,
                               const DissipatorSpec& diss,
                               const DensityMatrix& rho0, double t0, double t1);
DensityMatrix oracle_propagate(const models::HybridModel& model,
                               const DissipatorSpec& diss,
                               const DensityMatrix& rho0, double t0, double t1);

}  // namespace mtnv::lindblad
