#include "mtnv/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace mtnv::lindblad {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI(0.0, 1.0);

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Right-hand side with precomputed jump terms.
class Generator {
 public:
  Generator(const models::DrivenHamiltonian& h, const DissipatorSpec& diss)
      : h_(h) {
    const Eigen::Index n = h.dim();
    OperatorMatrix decay = OperatorMatrix::Zero(n, n);
    for (const auto& c : diss.collapse_ops) {
      if (c.rate == 0.0) continue;
      jumps_.push_back(std::sqrt(c.rate) * c.op);
      decay += c.rate * c.op.adjoint() * c.op;
    }
    constant_eff_ = h.constant - 0.5 * kI * decay;
  }

  // Evaluated on the segment [a, b] with envelopes sampled strictly inside
  // it, so a jump at either edge does not leak into the segment.
  void operator()(double t, double a_start, double b_end,
                  const DensityMatrix& rho, DensityMatrix& out) {
    const double te = std::clamp(t, std::nextafter(a_start, INFINITY),
                                 std::nextafter(b_end, -INFINITY));
    heff_ = constant_eff_;
    for (const auto& term : h_.terms) {
      const double a = term.envelope(te);
      if (a != 0.0) heff_ += a * term.op;
    }
    out.noalias() = -kI * (heff_ * rho);
    out.noalias() += kI * (rho * heff_.adjoint());
    for (const auto& l : jumps_) {
      tmp_.noalias() = l * rho;
      out.noalias() += tmp_ * l.adjoint();
    }
    ++evaluations;
  }

  std::size_t evaluations = 0;

 private:
  const models::DrivenHamiltonian& h_;
  OperatorMatrix constant_eff_;
  OperatorMatrix heff_;
  OperatorMatrix tmp_;
  std::vector<OperatorMatrix> jumps_;
};

double error_norm(const DensityMatrix& err, const DensityMatrix& y0,
                  const DensityMatrix& y1, double atol, double rtol) {
  double sum = 0.0;
  const Eigen::Index n = err.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double scale =
        atol + rtol * std::max(std::abs(y0.data()[k]), std::abs(y1.data()[k]));
    const double r = std::abs(err.data()[k]) / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

double expectation(const OperatorMatrix& op, const DensityMatrix& rho) {
  return op.cwiseProduct(rho.transpose()).sum().real();
}

struct Recorder {
  const EvolveOptions& options;
  const models::ModeOperators* modes;
  TrajectoryResult& result;

  void record(double t, const DensityMatrix& rho) {
    result.times.push_back(t);
    if (options.keep_states) result.states.push_back(rho);
    if (modes != nullptr) {
      result.occupations.push_back({expectation(modes->tp_number, rho),
                                    expectation(modes->phonon_number, rho),
                                    expectation(modes->nv_number, rho)});
    }
    if (options.target) result.fidelity.push_back(fidelity(rho, *options.target));
    if (options.diagnostics) {
      auto& inv = result.invariants;
      inv.max_trace_error =
          std::max(inv.max_trace_error, std::abs(rho.trace() - 1.0));
      inv.max_hermiticity_error =
          std::max(inv.max_hermiticity_error, hilbert::hermiticity_error(rho));
      const DensityMatrix herm = 0.5 * (rho + rho.adjoint());
      Eigen::SelfAdjointEigenSolver<DensityMatrix> es(herm,
                                                      Eigen::EigenvaluesOnly);
      inv.min_eigenvalue = std::min(inv.min_eigenvalue, es.eigenvalues()(0));
    }
  }
};

TrajectoryResult integrate(const models::DrivenHamiltonian& h,
                           const DissipatorSpec& diss,
                           const DensityMatrix& rho0,
                           const std::vector<double>& times,
                           const EvolveOptions& options,
                           const models::ModeOperators* modes) {
  if (times.empty()) throw std::invalid_argument("evolve: empty time grid");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw std::invalid_argument("evolve: time grid must increase strictly");
    }
  }
  if (rho0.rows() != h.dim() || rho0.cols() != h.dim()) {
    throw hilbert::DimensionError("evolve: rho0 does not match the Hamiltonian");
  }
  check_density_matrix(rho0);
  diss.validate(h.dim());
  if (options.target && options.target->size() != h.dim()) {
    throw hilbert::DimensionError("evolve: target does not match the Hamiltonian");
  }

  const auto& opt = options.integrator;
  TrajectoryResult result;
  result.invariants.min_eigenvalue = std::numeric_limits<double>::infinity();
  Recorder rec{options, modes, result};
  Generator f(h, diss);

  // Integration nodes: samples and envelope jumps.
  std::vector<double> nodes = times;
  const auto jumps = h.breakpoints(times.front(), times.back());
  nodes.insert(nodes.end(), jumps.begin(), jumps.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto is_jump = [&](double t) {
    return std::binary_search(jumps.begin(), jumps.end(), t);
  };

  const Eigen::Index n = h.dim();
  DensityMatrix y = rho0;
  DensityMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), k5(n, n), k6(n, n),
      k7(n, n), ys(n, n), ynew(n, n), err(n, n);

  rec.record(times.front(), y);
  std::size_t next_sample = 1;
  double step = opt.initial_step;
  bool fsal_valid = false;

  for (std::size_t seg = 1; seg < nodes.size(); ++seg) {
    const double a = nodes[seg - 1];
    const double b = nodes[seg];
    double t = a;
    if (!fsal_valid) f(t, a, b, y, k1);

    while (t < b) {
      if (result.stats.accepted_steps + result.stats.rejected_steps >=
          opt.max_steps) {
        throw IntegrationError("evolve: step budget exhausted at t = " +
                               std::to_string(t));
      }
      double hstep = std::min(step, b - t);
      if (opt.max_step > 0.0) hstep = std::min(hstep, opt.max_step);
      const bool last = (t + hstep >= b) || (b - (t + hstep) < 1e-14 * (1.0 + std::abs(b)));
      if (last) hstep = b - t;

      ys = y + hstep * a21 * k1;
      f(t + c2 * hstep, a, b, ys, k2);
      ys = y + hstep * (a31 * k1 + a32 * k2);
      f(t + c3 * hstep, a, b, ys, k3);
      ys = y + hstep * (a41 * k1 + a42 * k2 + a43 * k3);
      f(t + c4 * hstep, a, b, ys, k4);
      ys = y + hstep * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      f(t + c5 * hstep, a, b, ys, k5);
      ys = y + hstep * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      f(t + hstep, a, b, ys, k6);
      ynew = y + hstep * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double t_new = last ? b : t + hstep;
      f(t_new, a, b, ynew, k7);
      err = hstep * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double en = error_norm(err, y, ynew, opt.atol, opt.rtol);
      if (!std::isfinite(en)) {
        throw IntegrationError("evolve: non-finite state at t = " +
                               std::to_string(t));
      }
      if (en <= 1.0) {
        t = t_new;
        y.swap(ynew);
        k1.swap(k7);
        ++result.stats.accepted_steps;
        const double drift = std::abs(y.trace() - 1.0);
        if (drift > opt.trace_tolerance) {
          std::ostringstream msg;
          msg << "evolve: trace drift " << drift << " at t = " << t
              << " after " << result.stats.accepted_steps << " steps";
          throw IntegrationError(msg.str());
        }
        const double grow =
            en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        // A clipped final step says nothing about the natural step size.
        if (!last || hstep >= step) step = hstep * grow;
      } else {
        ++result.stats.rejected_steps;
        step = hstep * std::max(0.2, 0.9 * std::pow(en, -0.2));
      }
    }

    fsal_valid = !is_jump(b);
    if (next_sample < times.size() && b == times[next_sample]) {
      rec.record(b, y);
      ++next_sample;
    }
  }

  result.final_state = y;
  result.stats.rhs_evaluations = f.evaluations;
  return result;
}

}  // namespace

void DissipatorSpec::validate(Eigen::Index dim) const {
  for (const auto& c : collapse_ops) {
    if (!(c.rate >= 0.0)) {
      throw std::invalid_argument("dissipator '" + c.label +
                                  "' has a negative rate");
    }
    if (c.op.rows() != dim || c.op.cols() != dim) {
      throw hilbert::DimensionError("dissipator '" + c.label +
                                    "' does not match the state dimension");
    }
  }
}

DissipatorSpec device_dissipators(const hilbert::SpaceLayout& layout,
                                  const params::CouplingParams& rates,
                                  double n_th) {
  if (n_th < 0.0) throw std::invalid_argument("n_th must be non-negative");
  const models::ModeOperators ops(layout);
  DissipatorSpec d;
  d.collapse_ops.push_back({ops.sigma_z_nv, rates.gamma_s, "nv_dephasing"});
  d.collapse_ops.push_back({ops.sigma_tp, rates.Gamma1, "tp_relaxation"});
  d.collapse_ops.push_back({ops.tp_number, rates.Gamma2, "tp_dephasing"});
  d.collapse_ops.push_back(
      {ops.b, (n_th + 1.0) * rates.gamma_m, "mechanical_damping"});
  d.collapse_ops.push_back(
      {OperatorMatrix(ops.b.adjoint()), n_th * rates.gamma_m, "mechanical_heating"});
  return d;
}

std::vector<double> sample_times(double t0, double t1, std::size_t samples) {
  if (samples < 2 || !(t1 > t0)) {
    throw std::invalid_argument("sample_times: need t1 > t0 and >= 2 samples");
  }
  std::vector<double> out(samples);
  const double dt = (t1 - t0) / static_cast<double>(samples - 1);
  for (std::size_t k = 0; k < samples; ++k) {
    out[k] = t0 + dt * static_cast<double>(k);
  }
  out.back() = t1;
  return out;
}

DensityMatrix lindblad_rhs(const OperatorMatrix& h, const DissipatorSpec& diss,
                           const DensityMatrix& rho) {
  DensityMatrix out = -kI * (h * rho - rho * h);
  for (const auto& c : diss.collapse_ops) {
    const OperatorMatrix ldl = c.op.adjoint() * c.op;
    out += c.rate * (c.op * rho * c.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

TrajectoryResult evolve(const models::DrivenHamiltonian& h,
                        const DissipatorSpec& diss, const DensityMatrix& rho0,
                        const std::vector<double>& times,
                        const EvolveOptions& options) {
  return integrate(h, diss, rho0, times, options, nullptr);
}

TrajectoryResult evolve(const models::HybridModel& model,
                        const DissipatorSpec& diss, const DensityMatrix& rho0,
                        const std::vector<double>& times,
                        const EvolveOptions& options) {
  const auto h = models::driven_hamiltonian(model);
  const models::ModeOperators modes(model.layout);
  return integrate(h, diss, rho0, times, options, &modes);
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
  if (std::abs(target.norm() - 1.0) > 1e-9) {
    throw std::domain_error("fidelity: target state is not normalized");
  }
  if (rho.rows() != target.size()) {
    throw hilbert::DimensionError("fidelity: dimension mismatch");
  }
  const double f = target.dot(rho * target).real();
  return std::clamp(f, 0.0, 1.0);
}

DensityMatrix pure_density(const StateVector& psi) {
  return psi * psi.adjoint();
}

void check_density_matrix(const DensityMatrix& rho, double tol) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  if (hilbert::hermiticity_error(rho) > tol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > tol) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(
      DensityMatrix(0.5 * (rho + rho.adjoint())), Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -tol) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
}

Eigen::MatrixXcd liouvillian(const OperatorMatrix& h,
                             const DissipatorSpec& diss) {
  const Eigen::Index n = h.rows();
  const OperatorMatrix id = OperatorMatrix::Identity(n, n);
  Eigen::MatrixXcd l = -kI * (Eigen::kroneckerProduct(id, h).eval() -
                              Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& c : diss.collapse_ops) {
    const OperatorMatrix ldl = c.op.adjoint() * c.op;
    l += c.rate * (Eigen::kroneckerProduct(c.op.conjugate(), c.op).eval() -
                   0.5 * Eigen::kroneckerProduct(id, ldl).eval() -
                   0.5 * Eigen::kroneckerProduct(ldl.transpose(), id).eval());
  }
  return l;
}

DensityMatrix oracle_propagate(const models::DrivenHamiltonian& h,
                               const DissipatorSpec& diss,
                               const DensityMatrix& rho0, double t0,
                               double t1) {
  const Eigen::Index n = h.dim();
  if (n > kOracleMaxDim) {
    throw hilbert::DimensionError("oracle_propagate: dimension " +
                                  std::to_string(n) + " exceeds 16");
  }
  if (!h.piecewise_constant) {
    throw std::invalid_argument(
        "oracle_propagate: envelopes must be piecewise constant");
  }
  if (t1 < t0) throw std::invalid_argument("oracle_propagate: t1 < t0");
  diss.validate(n);

  std::vector<double> edges{t0};
  const auto jumps = h.breakpoints(t0, t1);
  edges.insert(edges.end(), jumps.begin(), jumps.end());
  edges.push_back(t1);

  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), n * n);
  for (std::size_t k = 1; k < edges.size(); ++k) {
    const double dt = edges[k] - edges[k - 1];
    if (dt <= 0.0) continue;
    // Midpoint sample: envelopes may be closed or half-open at the edges.
    const double mid = 0.5 * (edges[k - 1] + edges[k]);
    const Eigen::MatrixXcd gen = liouvillian(h(mid), diss) * dt;
    v = gen.exp() * v;
  }
  return Eigen::Map<const DensityMatrix>(v.data(), n, n);
}

DensityMatrix oracle_propagate(const models::HybridModel& model,
                               const DissipatorSpec& diss,
                               const DensityMatrix& rho0, double t0,
                               double t1) {
  if (static_cast<Eigen::Index>(model.layout.total_dim()) > kOracleMaxDim) {
    throw hilbert::DimensionError("oracle_propagate: dimension exceeds 16");
  }
  return oracle_propagate(models::driven_hamiltonian(model), diss, rho0, t0,
                          t1);
}

}  // namespace mtnv::lindblad
