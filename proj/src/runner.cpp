#include "mtnv/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "mtnv/constants.hpp"
#include "mtnv/lattice.hpp"
#include "mtnv/lindblad.hpp"
#include "mtnv/params.hpp"
#include "mtnv/protocols.hpp"

namespace mtnv::runner {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunError : std::runtime_error {
  RunError(int c, const std::string& kind, const std::string& msg)
      : std::runtime_error(msg), code(c), kind(kind) {}
  int code;
  std::string kind;
};

json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Map: {
      json j = json::object();
      for (const auto& kv : n) j[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return j;
    }
    case YAML::NodeType::Sequence: {
      json j = json::array();
      for (const auto& e : n) j.push_back(yaml_to_json(e));
      return j;
    }
    case YAML::NodeType::Scalar: {
      const std::string& s = n.Scalar();
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
      } catch (const std::exception&) {
      }
      if (s == "true") return true;
      if (s == "false") return false;
      return s;
    }
    default:
      return nullptr;
  }
}

class Writer {
 public:
  Writer(const config::RunConfig& cfg, RunOutcome& out)
      : dir_(cfg.output_dir), out_(out) {}

  fs::path path(const std::string& name) const { return dir_ / name; }

  void text(const std::string& name, const std::string& body) {
    const fs::path p = path(name);
    std::ofstream f(p, std::ios::binary);
    f << body;
    if (!f) throw RunError(kConfigError, "io", "cannot write " + p.string());
    out_.files.push_back(p);
  }

  void csv(const std::string& name, const std::vector<std::string>& comments,
           const std::vector<std::string>& columns,
           const std::vector<std::vector<double>>& rows) {
    std::string body;
    for (const auto& c : comments) body += "# " + c + "\n";
    body += "# ";
    for (std::size_t k = 0; k < columns.size(); ++k) {
      body += (k ? "," : "") + columns[k];
    }
    body += "\n";
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < row.size(); ++k) {
        body += (k ? "," : "") + format_number(row[k]);
      }
      body += "\n";
    }
    text(name, body);
  }

 private:
  fs::path dir_;
  RunOutcome& out_;
};

json mechanics_json(const params::CantileverParams& p) {
  const auto m = params::derive_mechanics(p);
  return {{"omega_m_rad_s", m.omega_m},
          {"theta_zpf_rad", m.theta_zpf},
          {"angular_momentum_zpf_Js", m.angular_momentum_zpf},
          {"n_th", m.n_th}};
}

json integrator_json(const lindblad::TrajectoryResult& r,
                     const lindblad::IntegratorOptions& o) {
  return {{"method", "dormand_prince_5_4"},
          {"rtol", o.rtol},
          {"atol", o.atol},
          {"accepted_steps", r.stats.accepted_steps},
          {"rejected_steps", r.stats.rejected_steps},
          {"rhs_evaluations", r.stats.rhs_evaluations},
          {"max_trace_error", r.invariants.max_trace_error},
          {"max_hermiticity_error", r.invariants.max_hermiticity_error},
          {"min_eigenvalue", r.invariants.min_eigenvalue}};
}

std::vector<std::vector<double>> trajectory_rows(
    const lindblad::TrajectoryResult& r) {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const auto& o = r.occupations[k];
    rows.push_back({r.times[k], o[0], o[1], o[2],
                    r.fidelity.empty() ? std::nan("") : r.fidelity[k]});
  }
  return rows;
}

const std::vector<std::string> kTrajectoryColumns{
    "t_in_units_of_inv_g0", "occ_TP", "occ_Tor", "occ_NV", "fidelity"};

protocols::ProtocolParams protocol_params(const config::RunConfig& cfg) {
  protocols::ProtocolParams p;
  p.couplings = cfg.couplings;
  p.n_th = cfg.n_th;
  p.fock_dim = cfg.fock_dim;
  p.samples = cfg.samples;
  p.integrator = cfg.integrator;
  return p;
}

void run_lattice(const config::RunConfig& cfg, Writer& w, json& results) {
  const auto& study = cfg.lattice;
  const auto& lc = study.config;

  std::optional<lattice::MagnetoJosephson> mj;
  std::string not_topological;
  try {
    mj.emplace(lc);
  } catch (const lattice::NotTopologicalError& e) {
    not_topological = e.what();
  } catch (const std::domain_error& e) {
    not_topological = e.what();
  }

  const lattice::BdGSpectrum spectrum =
      mj ? mj->spectrum() : lattice::diagonalize(lattice::build_hamiltonian(lc),
                                                 lc.segment_sites());
  std::vector<std::vector<double>> rows;
  for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
    rows.push_back({static_cast<double>(k), spectrum.eigenvalues(k)});
  }
  w.csv(cfg.run_name + "_spectrum.csv", {"BdG eigenvalues, ascending"},
        {"index", "energy_meV"}, rows);

  const Eigen::Index mid = spectrum.eigenvalues.size() / 2;
  json low = json::array();
  for (Eigen::Index k = mid; k < std::min(mid + 6, spectrum.eigenvalues.size()); ++k) {
    low.push_back(spectrum.eigenvalues(k));
  }
  results["lowest_positive_levels_meV"] = low;
  results["total_sites"] = lc.total_sites();
  json topo = json::array();
  for (const auto& s : lc.segments) {
    try {
      topo.push_back(lattice::is_topological(s));
    } catch (const std::domain_error&) {
      topo.push_back(nullptr);
    }
  }
  results["segment_topological"] = topo;

  if (!mj) {
    results["topological"] = false;
    throw RunError(kNotTopological, "not_topological", not_topological);
  }
  results["topological"] = true;

  const auto& modes = mj->modes();
  results["epsilon1_meV"] = modes.epsilon1;
  results["epsilon2_meV"] = modes.epsilon2;
  results["bulk_edge_meV"] = modes.bulk_edge;

  rows.clear();
  for (std::size_t i = 0; i < spectrum.n_sites(); ++i) {
    rows.push_back({static_cast<double>(i), modes.densities[0](i),
                    modes.densities[1](i), modes.densities[2](i),
                    modes.densities[3](i)});
  }
  w.csv(cfg.run_name + "_majoranas.csv", {"Majorana probability densities"},
        {"site", "gamma1", "gamma2", "gamma3", "gamma4"}, rows);

  const auto samples = lattice::sweep_theta(*mj, study.theta_min,
                                            study.theta_max, study.theta_points);
  rows.clear();
  for (const auto& s : samples) rows.push_back({s.theta, s.energy, s.spin_current});
  w.csv(cfg.run_name + "_theta.csv",
        {"E_m in meV; J_m in e*meV/hbar (x " +
         format_number(lattice::kSpinCurrentNanoampPerUnit) + " for nA)"},
        {"theta_rad", "E_m_meV", "J_m"}, rows);

  const auto mech = params::derive_mechanics(cfg.device);
  const double slope = mj->slope(study.theta0);
  results["E_m_at_theta0_meV"] = mj->energy(study.theta0);
  results["dE_m_dtheta_meV_per_rad"] = slope;
  results["g_rad_s"] = lattice::coupling_from_slope(slope, mech.theta_zpf);
  results["g_over_2pi_Hz"] =
      lattice::coupling_from_slope(slope, mech.theta_zpf) / constants::kTwoPi;
}

json summary_json(const protocols::TransferReport& r, const std::string& source) {
  return {{"source", source},
          {"final_fidelity", r.final_fidelity},
          {"peak_phonon", r.peak_phonon_occupation},
          {"margin", r.adiabaticity_margin},
          {"transfer_phase", {r.transfer_phase.real(), r.transfer_phase.imag()}}};
}

json run_dynamics(const config::RunConfig& cfg, Writer& w) {
  const auto p = protocol_params(cfg);
  json results;
  if (cfg.study == config::Study::kRabi) {
    const hilbert::SpaceLayout layout(cfg.fock_dim);
    const auto init =
        protocols::initial_state(protocols::SourceState::fock_one(), layout);
    models::HybridModel model;
    model.layout = layout;
    model.g_envelope = PulseSchedule::constant(p.couplings.g0);
    model.lambda_envelope = PulseSchedule::constant(p.couplings.lambda_e);
    lindblad::EvolveOptions opts;
    opts.integrator = p.integrator;
    opts.target = init;
    const auto traj = lindblad::evolve(
        model, lindblad::device_dissipators(layout, p.couplings, p.n_th),
        lindblad::pure_density(init),
        lindblad::sample_times(0.0, cfg.rabi_horizon, cfg.samples), opts);
    w.csv(cfg.run_name + ".csv",
          {"Rabi exchange from |1>_TP |0>_m |d>_NV; fidelity = return probability"},
          kTrajectoryColumns, trajectory_rows(traj));
    results["integrator"] = integrator_json(traj, p.integrator);
    return results;
  }

  json summaries = json::array();
  for (const auto& src : cfg.sources) {
    protocols::TransferReport r;
    std::string label;
    if (cfg.study == config::Study::kDirect) {
      r = protocols::run_direct_transfer(p, src.state);
      label = "direct transfer";
    } else {
      r = protocols::run_dark_state_transfer(p, src.state, cfg.g_schedule,
                                             cfg.lambda_schedule,
                                             cfg.window_start, cfg.window_end);
      label = "dark-state transfer";
    }
    const std::string stem = cfg.run_name + "_" + src.name;
    w.csv(stem + ".csv", {label + ", source '" + src.name + "'"},
          kTrajectoryColumns, trajectory_rows(r.trajectory));
    json s = summary_json(r, src.name);
    w.text(stem + ".summary.json", s.dump() + "\n");
    s["warnings"] = r.warnings;
    s["window"] = {r.t_start, r.t_end};
    s["integrator"] = integrator_json(r.trajectory, p.integrator);
    summaries.push_back(s);
  }
  results["transfers"] = summaries;
  return results;
}

void write_error(const config::RunConfig& cfg, RunOutcome& out,
                 const std::string& kind) {
  const json rec = {{"status", "error"},
                    {"run", cfg.run_name},
                    {"exit_code", out.exit_code},
                    {"kind", kind},
                    {"message", out.error}};
  std::cerr << rec.dump() << "\n";
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  std::ofstream f(cfg.output_dir / (cfg.run_name + ".error.json"));
  if (f) {
    f << rec.dump(2) << "\n";
    out.files.push_back(cfg.output_dir / (cfg.run_name + ".error.json"));
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

RunOutcome run_single(const config::RunConfig& cfg) {
  RunOutcome out;
  out.run_name = cfg.run_name;
  std::string kind;
  json meta = {{"run", cfg.run_name},
               {"study", config::to_string(cfg.study)},
               {"config", yaml_to_json(YAML::Load(cfg.resolved_yaml))}};
  try {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir)) {
      throw RunError(kConfigError, "io",
                     "output_dir " + cfg.output_dir.string() + " is not writable");
    }
    fs::remove(cfg.output_dir / (cfg.run_name + ".error.json"), ec);
    Writer w(cfg, out);
    meta["mechanics"] = mechanics_json(cfg.device);
    meta["units"] = {{"time", "1/g0"},
                     {"g0_rad_s", constants::kTwoPi * cfg.g0_hz},
                     {"energy", "meV"}};
    if (cfg.study == config::Study::kLattice) {
      try {
        meta["results"] = json::object();
        run_lattice(cfg, w, meta["results"]);
      } catch (const RunError&) {
        meta["status"] = "not_topological";
        w.text(cfg.run_name + ".meta.json", meta.dump(2) + "\n");
        throw;
      }
    } else {
      meta["results"] = run_dynamics(cfg, w);
    }
    meta["status"] = "ok";
    w.text(cfg.run_name + ".meta.json", meta.dump(2) + "\n");
  } catch (const RunError& e) {
    out.exit_code = e.code;
    out.error = e.what();
    kind = e.kind;
  } catch (const config::ConfigError& e) {
    out.exit_code = kConfigError;
    out.error = e.what();
    kind = "config";
  } catch (const lattice::ConfigError& e) {
    out.exit_code = kConfigError;
    out.error = e.what();
    kind = "config";
  } catch (const lattice::NotTopologicalError& e) {
    out.exit_code = kNotTopological;
    out.error = e.what();
    kind = "not_topological";
  } catch (const lindblad::IntegrationError& e) {
    out.exit_code = kIntegrationFailure;
    out.error = e.what();
    kind = "integration";
  } catch (const std::invalid_argument& e) {
    out.exit_code = kConfigError;
    out.error = e.what();
    kind = "config";
  } catch (const std::exception& e) {
    out.exit_code = kInternalError;
    out.error = e.what();
    kind = "internal";
  }
  if (out.exit_code != kOk) write_error(cfg, out, kind);
  return out;
}

int run(const config::RunConfig& cfg, std::size_t parallel,
        std::vector<RunOutcome>* outcomes) {
  std::vector<config::RunConfig> points;
  try {
    points = config::expand_sweep(cfg);
  } catch (const config::ConfigError& e) {
    RunOutcome out;
    out.run_name = cfg.run_name;
    out.exit_code = kConfigError;
    out.error = e.what();
    write_error(cfg, out, "config");
    if (outcomes) outcomes->push_back(out);
    return kConfigError;
  }

  std::vector<RunOutcome> results(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      results[k] = run_single(points[k]);
    }
  };
  const std::size_t n = std::clamp<std::size_t>(parallel, 1, points.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kOk;
  for (const auto& r : results) code = std::max(code, r.exit_code);
  if (outcomes) *outcomes = std::move(results);
  return code;
}

}  // namespace mtnv::runner
