#include "mtnv/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mtnv/models.hpp"

namespace mtnv::protocols {

namespace {

using hilbert::StateVector;

StateVector normalized_qubit(const SourceState& s) {
  StateVector q(2);
  q << s.c0, s.c1;
  const double n = q.norm();
  if (n == 0.0) throw std::invalid_argument("source state has zero norm");
  return q / n;
}

StateVector basis2(int k) {
  StateVector v = StateVector::Zero(2);
  v(k) = 1.0;
  return v;
}

double peak_phonon(const lindblad::TrajectoryResult& r) {
  double peak = 0.0;
  for (const auto& o : r.occupations) peak = std::max(peak, o[1]);
  return peak;
}

TransferReport run_transfer(const ProtocolParams& p, const SourceState& source,
                            const PulseSchedule& g, const PulseSchedule& lambda,
                            double t0, double t1, Complex phase) {
  models::HybridModel model;
  model.layout = hilbert::SpaceLayout(p.fock_dim);
  model.g_envelope = g;
  model.lambda_envelope = lambda;

  lindblad::EvolveOptions opts;
  opts.integrator = p.integrator;
  opts.target = target_state(source, phase, model.layout);

  TransferReport report;
  report.transfer_phase = phase;
  report.t_start = t0;
  report.t_end = t1;
  const auto rho0 =
      lindblad::pure_density(initial_state(source, model.layout));
  report.trajectory = lindblad::evolve(
      model, lindblad::device_dissipators(model.layout, p.couplings, p.n_th),
      rho0, lindblad::sample_times(t0, t1, p.samples), opts);
  report.final_fidelity = report.trajectory.fidelity.back();
  report.peak_phonon_occupation = peak_phonon(report.trajectory);
  return report;
}

}  // namespace

ProtocolParams ideal_params() {
  ProtocolParams p;
  p.couplings = params::paper_ideal_couplings();
  p.n_th = 0.0;
  return p;
}

ProtocolParams dissipative_params() { return ProtocolParams{}; }

StateVector initial_state(const SourceState& source,
                          const hilbert::SpaceLayout& layout) {
  return hilbert::product_state(normalized_qubit(source),
                                hilbert::fock_state(0, layout.fock_dim),
                                basis2(0));
}

StateVector target_state(const SourceState& source, Complex phase,
                         const hilbert::SpaceLayout& layout) {
  const StateVector q = normalized_qubit(source);
  StateVector nv(2);
  nv << q(0), phase * q(1);
  return hilbert::product_state(basis2(0),
                                hilbert::fock_state(0, layout.fock_dim), nv);
}

lindblad::TrajectoryResult run_rabi(const ProtocolParams& p,
                                    const StateVector& initial,
                                    double horizon) {
  models::HybridModel model;
  model.layout = hilbert::SpaceLayout(p.fock_dim);
  model.g_envelope = PulseSchedule::constant(p.couplings.g0);
  model.lambda_envelope = PulseSchedule::constant(p.couplings.lambda_e);
  lindblad::EvolveOptions opts;
  opts.integrator = p.integrator;
  return lindblad::evolve(
      model, lindblad::device_dissipators(model.layout, p.couplings, p.n_th),
      lindblad::pure_density(initial),
      lindblad::sample_times(0.0, horizon, p.samples), opts);
}

lindblad::TrajectoryResult run_rabi(const ProtocolParams& p, double horizon) {
  const hilbert::SpaceLayout layout(p.fock_dim);
  return run_rabi(p, initial_state(SourceState::fock_one(), layout), horizon);
}

TransferReport run_direct_transfer(const ProtocolParams& p,
                                   const SourceState& source) {
  const double g = p.couplings.g0;
  const double lam = p.couplings.lambda_e;
  if (!(g > 0.0) || !(lam > 0.0)) {
    throw std::invalid_argument("direct transfer needs g0 > 0 and lambda_e > 0");
  }
  const double t1 = std::numbers::pi / (2.0 * g);
  const double t2 = t1 + std::numbers::pi / (2.0 * lam);
  // exp(+i g t X) then exp(-i lambda t X) at quarter periods: (i)(-i) = 1.
  const Complex phase = Complex(0.0, 1.0) * Complex(0.0, -1.0);
  auto report = run_transfer(p, source, PulseSchedule::boxcar(g, 0.0, t1),
                             PulseSchedule::boxcar(lam, t1, t2), 0.0, t2, phase);
  report.adiabaticity_margin = 0.0;
  return report;
}

TransferReport run_dark_state_transfer(const ProtocolParams& p,
                                       const SourceState& source) {
  return run_dark_state_transfer(p, source, paper_dark_g_schedule(),
                                 paper_dark_lambda_schedule(),
                                 kDarkWindowStart, kDarkWindowEnd);
}

TransferReport run_dark_state_transfer(const ProtocolParams& p,
                                       const SourceState& source,
                                       const PulseSchedule& g,
                                       const PulseSchedule& lambda,
                                       double t_start, double t_end) {
  if (!(t_end > t_start)) {
    throw std::invalid_argument("dark-state window must have t_end > t_start");
  }
  const double lam0 = lambda(t_start);
  const double g0 = g(t_start);
  if (!(lam0 > g0) || g0 <= 0.0) {
    throw std::invalid_argument(
        "dark-state schedules must start with lambda_e > g > 0");
  }
  std::vector<std::string> warnings;
  const auto times = lindblad::sample_times(t_start, t_end, p.samples);
  const double margin = adiabaticity_margin(g, lambda, times, &warnings);
  if (margin < kMarginWarning) {
    warnings.push_back("adiabaticity margin " + std::to_string(margin) +
                       " is below " + std::to_string(kMarginWarning));
  }
  const Complex phase = dark_transfer_phase(g, lambda, t_start, t_end);
  auto report = run_transfer(p, source, g, lambda, t_start, t_end, phase);
  report.adiabaticity_margin = margin;
  report.warnings = std::move(warnings);
  return report;
}

double adiabaticity_margin(const PulseSchedule& g, const PulseSchedule& lambda,
                           const std::vector<double>& times,
                           std::vector<std::string>* warnings) {
  if (times.size() < 2) {
    throw std::invalid_argument("adiabaticity_margin: need >= 2 times");
  }
  const double span = times.back() - times.front();
  const double h = 1e-4 * span / static_cast<double>(times.size() - 1);
  auto beta = [&](double t) { return models::mixing_angle(g(t), lambda(t)); };

  double margin = std::numeric_limits<double>::max();
  for (double t : times) {
    const double gap = std::hypot(g(t), lambda(t));
    if (gap < 1e-12) {
      if (warnings != nullptr) {
        warnings->push_back("both couplings vanish at t = " +
                            std::to_string(t));
      }
      return 0.0;
    }
    const double rate = std::abs(beta(t + h) - beta(t - h)) / (2.0 * h);
    if (rate > 0.0) margin = std::min(margin, gap / rate);
  }
  return margin;
}

Complex dark_transfer_phase(const PulseSchedule& g, const PulseSchedule& lambda,
                            double t0, double t1) {
  const double b0 = models::mixing_angle(g(t0), lambda(t0));
  const double b1 = models::mixing_angle(g(t1), lambda(t1));
  const double ratio = std::sin(b1) / (-std::cos(b0));
  return ratio < 0.0 ? -1.0 : 1.0;
}

}  // namespace mtnv::protocols
