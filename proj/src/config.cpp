#include "mtnv/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace mtnv::config {

namespace {

constexpr const char* kDefaults = R"(study: dark
run_name: ""
output_dir: out
device:
  spring_constant: 3.0e-18
  moment_of_inertia: 4.8e-33
  temperature: 0.02
couplings:
  g0_hz: 200000
  g0: 1.0
  lambda_e: 1.0
  Gamma1: 0.05
  Gamma2: 0.05
  gamma_m: 0.0002
  gamma_s: 0.1
bath:
  n_th: 104
dynamics:
  fock_dim: 10
  samples: 400
  rabi_horizon: 10
  rtol: 1.0e-8
  atol: 1.0e-10
schedules:
  g: {kind: gaussian, amplitude: 1.0, center: pi, width: 30}
  lambda: {kind: gaussian, amplitude: 1.5, center: 0, width: 6}
  window_start: 0
  window_end: 4*pi
sources: [fock, superposition]
lattice:
  effective_mass_ratio: 0.015
  spacing_nm: 10
  hopping_meV: auto
  spin_orbit_eV_A: 0.2
  spin_orbit_form: axial
  theta_points: 64
  theta_min: 0
  theta_max: 4*pi
  theta0: 0
  segments:
    - {sites: 300, mu_meV: 0, b_parallel_mT: 200, B_transverse_mT: 200, theta_rad: 0, delta_meV: 0.5, phi_rad: 0}
    - {sites: 20, mu_meV: -0.6, b_parallel_mT: 200, B_transverse_mT: 0, theta_rad: 0, delta_meV: 0.5, phi_rad: 0}
    - {sites: 180, mu_meV: 0, b_parallel_mT: 200, B_transverse_mT: 200, theta_rad: 0, delta_meV: 0.5, phi_rad: 0}
sweep: ~
)";

const YAML::Node& segment_template() {
  static const YAML::Node t = YAML::Load(
      "{sites: 1, mu_meV: 0, b_parallel_mT: 0, B_transverse_mT: 0, "
      "theta_rad: 0, delta_meV: 0, phi_rad: 0}");
  return t;
}

std::string line_of(const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.line < 0) return "";
  return " (line " + std::to_string(m.line + 1) + ")";
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const YAML::Node& schedule_keys() {
  static const YAML::Node k =
      YAML::Load("{kind: 0, amplitude: 0, center: 0, width: 0, start: 0, end: 0}");
  return k;
}

bool is_schedule_path(const std::string& path) {
  return path == "schedules.g" || path == "schedules.lambda";
}

// Overlays `src` on `dst`, rejecting keys the defaults do not know. A
// schedule that names its kind replaces the default schedule outright.
void merge(YAML::Node dst, const YAML::Node& src, const std::string& path) {
  if (!src.IsMap()) {
    throw ConfigError("expected a mapping for '" +
                      (path.empty() ? std::string("<root>") : path) + "'" +
                      line_of(src));
  }
  for (const auto& kv : src) {
    const std::string key = kv.first.as<std::string>();
    const std::string full = join(path, key);
    const YAML::Node slot = dst[key];
    const bool schedule_key =
        is_schedule_path(path) && schedule_keys()[key].IsDefined();
    if (!slot.IsDefined() && !schedule_key) {
      throw ConfigError("unknown key '" + full + "'" + line_of(kv.first));
    }
    if (is_schedule_path(full) && kv.second.IsMap() && kv.second["kind"]) {
      dst[key] = kv.second;
    } else if (slot.IsMap() && full != "sweep") {
      merge(slot, kv.second, full);
    } else {
      dst[key] = kv.second;
    }
  }
}

double parse_number(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) {
    throw ConfigError("expected a number for '" + path + "'" + line_of(n));
  }
  std::string s = n.Scalar();
  std::string compact;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  double factor = 1.0;
  if (compact.size() >= 2 && compact.compare(compact.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    compact.resize(compact.size() - 2);
    if (!compact.empty() && compact.back() == '*') compact.pop_back();
    if (compact.empty() || compact == "+") return factor;
    if (compact == "-") return -factor;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(compact, &used);
    if (used == compact.size() && std::isfinite(v)) return v * factor;
  } catch (const std::exception&) {
  }
  throw ConfigError("malformed number '" + s + "' for '" + path + "'" +
                    line_of(n));
}

std::size_t parse_count(const YAML::Node& n, const std::string& path) {
  const double v = parse_number(n, path);
  if (v < 0.0 || v != std::floor(v) || v > 1e9) {
    throw ConfigError("expected a non-negative integer for '" + path + "'" +
                      line_of(n));
  }
  return static_cast<std::size_t>(v);
}

std::string parse_string(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) {
    throw ConfigError("expected a string for '" + path + "'" + line_of(n));
  }
  return n.Scalar();
}

void check_keys(const YAML::Node& n, const YAML::Node& allowed,
                const std::string& path) {
  if (!n.IsMap()) {
    throw ConfigError("expected a mapping for '" + path + "'" + line_of(n));
  }
  for (const auto& kv : n) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed[key].IsDefined()) {
      throw ConfigError("unknown key '" + join(path, key) + "'" +
                        line_of(kv.first));
    }
  }
}

PulseSchedule parse_schedule(const YAML::Node& n, const std::string& path) {
  check_keys(n, schedule_keys(), path);
  const std::string kind = n["kind"] ? parse_string(n["kind"], path + ".kind")
                                     : std::string("gaussian");
  auto num = [&](const char* key, double fallback) {
    return n[key] ? parse_number(n[key], join(path, key)) : fallback;
  };
  PulseSchedule s;
  if (kind == "gaussian") {
    s = PulseSchedule::gaussian(num("amplitude", 1.0), num("center", 0.0),
                                num("width", 1.0));
  } else if (kind == "constant") {
    s = PulseSchedule::constant(num("amplitude", 1.0));
  } else if (kind == "boxcar") {
    s = PulseSchedule::boxcar(num("amplitude", 1.0), num("start", 0.0),
                              num("end", 0.0));
  } else {
    throw ConfigError("unknown schedule kind '" + kind + "' for '" + path +
                      "'" + line_of(n["kind"]));
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return s;
}

protocols::Complex parse_amplitude(const YAML::Node& n,
                                   const std::string& path) {
  if (n.IsSequence()) {
    if (n.size() != 2) {
      throw ConfigError("amplitude '" + path + "' needs [re, im]" + line_of(n));
    }
    return {parse_number(n[0], path + "[0]"), parse_number(n[1], path + "[1]")};
  }
  return parse_number(n, path);
}

std::vector<NamedSource> parse_sources(const YAML::Node& n) {
  if (!n.IsSequence() || n.size() == 0) {
    throw ConfigError("'sources' must be a non-empty list" + line_of(n));
  }
  static const YAML::Node allowed = YAML::Load("{name: 0, c0: 0, c1: 0}");
  std::vector<NamedSource> out;
  for (std::size_t k = 0; k < n.size(); ++k) {
    const std::string path = "sources." + std::to_string(k);
    const YAML::Node e = n[k];
    if (e.IsScalar()) {
      const std::string name = e.Scalar();
      if (name == "fock") {
        out.push_back({name, protocols::SourceState::fock_one()});
      } else if (name == "superposition") {
        out.push_back({name, protocols::SourceState::superposition()});
      } else if (name == "vacuum") {
        out.push_back({name, protocols::SourceState::vacuum()});
      } else {
        throw ConfigError("unknown source '" + name + "'" + line_of(e));
      }
      continue;
    }
    check_keys(e, allowed, path);
    if (!e["name"] || !e["c0"] || !e["c1"]) {
      throw ConfigError("'" + path + "' needs name, c0 and c1" + line_of(e));
    }
    NamedSource s{parse_string(e["name"], path + ".name"),
                  {parse_amplitude(e["c0"], path + ".c0"),
                   parse_amplitude(e["c1"], path + ".c1")}};
    if (std::norm(s.state.c0) + std::norm(s.state.c1) == 0.0) {
      throw ConfigError("'" + path + "' has zero amplitude" + line_of(e));
    }
    out.push_back(s);
  }
  return out;
}

lattice::LatticeConfig parse_lattice(const YAML::Node& n, LatticeStudy& study) {
  lattice::LatticeConfig cfg;
  cfg.effective_mass_ratio =
      parse_number(n["effective_mass_ratio"], "lattice.effective_mass_ratio");
  cfg.lattice_spacing_a = parse_number(n["spacing_nm"], "lattice.spacing_nm");
  if (!(cfg.effective_mass_ratio > 0.0) || !(cfg.lattice_spacing_a > 0.0)) {
    throw ConfigError("lattice: effective_mass_ratio and spacing_nm must be > 0");
  }
  const YAML::Node hop = n["hopping_meV"];
  cfg.hopping_t = (hop.IsScalar() && hop.Scalar() == "auto")
                      ? lattice::hopping_from_mass(cfg.effective_mass_ratio,
                                                   cfg.lattice_spacing_a)
                      : parse_number(hop, "lattice.hopping_meV");
  cfg.spin_orbit_alpha = lattice::lattice_spin_orbit(
      parse_number(n["spin_orbit_eV_A"], "lattice.spin_orbit_eV_A"),
      cfg.lattice_spacing_a);
  const std::string form =
      parse_string(n["spin_orbit_form"], "lattice.spin_orbit_form");
  if (form == "axial") {
    cfg.spin_orbit_form = lattice::SpinOrbitForm::kAxial;
  } else if (form == "spin_flip") {
    cfg.spin_orbit_form = lattice::SpinOrbitForm::kSpinFlip;
  } else {
    throw ConfigError("unknown spin_orbit_form '" + form + "'" +
                      line_of(n["spin_orbit_form"]));
  }

  const YAML::Node segs = n["segments"];
  if (!segs.IsSequence()) {
    throw ConfigError("'lattice.segments' must be a list" + line_of(segs));
  }
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const std::string path = "lattice.segments." + std::to_string(k);
    const YAML::Node s = segs[k];
    check_keys(s, segment_template(), path);
    auto num = [&](const char* key) {
      const YAML::Node v = s[key];
      return v ? parse_number(v, join(path, key))
               : parse_number(segment_template()[key], join(path, key));
    };
    lattice::SegmentConfig seg;
    seg.n_sites = s["sites"] ? parse_count(s["sites"], path + ".sites") : 1;
    seg.mu = num("mu_meV");
    seg.b_parallel = lattice::millitesla_to_mev(num("b_parallel_mT"));
    seg.B_transverse = lattice::millitesla_to_mev(num("B_transverse_mT"));
    seg.theta = num("theta_rad");
    seg.delta = num("delta_meV");
    seg.phi = num("phi_rad");
    cfg.segments.push_back(seg);
  }
  try {
    lattice::validate(cfg);
  } catch (const lattice::ConfigError& e) {
    throw ConfigError(std::string("lattice: ") + e.what());
  }

  study.config = cfg;
  study.theta_points = parse_count(n["theta_points"], "lattice.theta_points");
  if (study.theta_points < 2) {
    throw ConfigError("lattice.theta_points must be >= 2");
  }
  study.theta_min = parse_number(n["theta_min"], "lattice.theta_min");
  study.theta_max = parse_number(n["theta_max"], "lattice.theta_max");
  study.theta0 = parse_number(n["theta0"], "lattice.theta0");
  if (!(study.theta_max > study.theta_min)) {
    throw ConfigError("lattice.theta_max must exceed lattice.theta_min");
  }
  return cfg;
}

void apply_override(YAML::Node root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string p; std::getline(ss, p, '.');) parts.push_back(p);

  YAML::Node node = root;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const std::string& key = parts[k];
    const bool last = k + 1 == parts.size();
    YAML::Node next;
    if (node.IsSequence()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ConfigError("override '" + path + "': '" + key +
                          "' is not a list index");
      }
      if (idx >= node.size()) {
        throw ConfigError("override '" + path + "': index " + key +
                          " out of range");
      }
      next = node[idx];
    } else if (node.IsMap()) {
      next = node[key];
      const bool schedule_key =
          last && k == 2 && is_schedule_path(parts[0] + "." + parts[1]) &&
          schedule_keys()[key].IsDefined();
      if (!next.IsDefined() && !schedule_key &&
          !(parts.front() == "sweep" && k == 1)) {
        throw ConfigError("unknown key '" + path + "'");
      }
    } else if (parts.front() == "sweep" && k == 1 && node.IsNull()) {
      next = node[key];
    } else {
      throw ConfigError("unknown key '" + path + "'");
    }
    if (last) {
      YAML::Node parsed;
      try {
        parsed = YAML::Load(value);
      } catch (const YAML::Exception& e) {
        throw ConfigError("override '" + path + "': " + e.msg);
      }
      if (node.IsSequence()) {
        node[std::stoul(key)] = parsed;
      } else {
        node[key] = parsed;
      }
      return;
    }
    node.reset(next);
  }
}

RunConfig build(const YAML::Node& root) {
  static const YAML::Node defaults = YAML::Load(kDefaults);
  check_keys(root, defaults, "");
  RunConfig cfg;
  cfg.study = study_from_string(parse_string(root["study"], "study"));
  cfg.run_name = parse_string(root["run_name"], "run_name");
  if (cfg.run_name.empty()) cfg.run_name = to_string(cfg.study);
  for (char c : cfg.run_name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == '.')) {
      throw ConfigError("run_name may only contain [A-Za-z0-9_.-]");
    }
  }
  cfg.output_dir = parse_string(root["output_dir"], "output_dir");

  const YAML::Node dev = root["device"];
  cfg.device.torsional_spring_constant =
      parse_number(dev["spring_constant"], "device.spring_constant");
  cfg.device.moment_of_inertia =
      parse_number(dev["moment_of_inertia"], "device.moment_of_inertia");
  cfg.device.temperature = parse_number(dev["temperature"], "device.temperature");

  const YAML::Node c = root["couplings"];
  cfg.g0_hz = parse_number(c["g0_hz"], "couplings.g0_hz");
  cfg.couplings.g0 = parse_number(c["g0"], "couplings.g0");
  cfg.couplings.lambda_e = parse_number(c["lambda_e"], "couplings.lambda_e");
  cfg.couplings.Gamma1 = parse_number(c["Gamma1"], "couplings.Gamma1");
  cfg.couplings.Gamma2 = parse_number(c["Gamma2"], "couplings.Gamma2");
  cfg.couplings.gamma_m = parse_number(c["gamma_m"], "couplings.gamma_m");
  cfg.couplings.gamma_s = parse_number(c["gamma_s"], "couplings.gamma_s");
  for (double r : {cfg.couplings.Gamma1, cfg.couplings.Gamma2,
                   cfg.couplings.gamma_m, cfg.couplings.gamma_s}) {
    if (r < 0.0) throw ConfigError("couplings: decay rates must be >= 0");
  }
  cfg.n_th = parse_number(root["bath"]["n_th"], "bath.n_th");
  if (cfg.n_th < 0.0) throw ConfigError("bath.n_th must be >= 0");

  const YAML::Node d = root["dynamics"];
  cfg.fock_dim = parse_count(d["fock_dim"], "dynamics.fock_dim");
  if (cfg.fock_dim < 2) throw ConfigError("dynamics.fock_dim must be >= 2");
  cfg.samples = parse_count(d["samples"], "dynamics.samples");
  if (cfg.samples < 2) throw ConfigError("dynamics.samples must be >= 2");
  cfg.rabi_horizon = parse_number(d["rabi_horizon"], "dynamics.rabi_horizon");
  if (!(cfg.rabi_horizon > 0.0)) {
    throw ConfigError("dynamics.rabi_horizon must be > 0");
  }
  cfg.integrator.rtol = parse_number(d["rtol"], "dynamics.rtol");
  cfg.integrator.atol = parse_number(d["atol"], "dynamics.atol");
  if (!(cfg.integrator.rtol > 0.0) || !(cfg.integrator.atol > 0.0)) {
    throw ConfigError("dynamics: rtol and atol must be > 0");
  }

  const YAML::Node s = root["schedules"];
  static const YAML::Node sched_keys =
      YAML::Load("{g: 0, lambda: 0, window_start: 0, window_end: 0}");
  check_keys(s, sched_keys, "schedules");
  cfg.g_schedule = parse_schedule(s["g"], "schedules.g");
  cfg.lambda_schedule = parse_schedule(s["lambda"], "schedules.lambda");
  cfg.window_start = parse_number(s["window_start"], "schedules.window_start");
  cfg.window_end = parse_number(s["window_end"], "schedules.window_end");
  if (!(cfg.window_end > cfg.window_start)) {
    throw ConfigError("schedules.window_end must exceed window_start");
  }

  cfg.sources = parse_sources(root["sources"]);
  parse_lattice(root["lattice"], cfg.lattice);

  const YAML::Node sw = root["sweep"];
  if (sw && !sw.IsNull()) {
    static const YAML::Node sweep_keys = YAML::Load("{parameter: 0, values: 0}");
    check_keys(sw, sweep_keys, "sweep");
    if (!sw["parameter"] || !sw["values"] || !sw["values"].IsSequence() ||
        sw["values"].size() == 0) {
      throw ConfigError("sweep needs 'parameter' and a non-empty 'values' list" +
                        line_of(sw));
    }
    Sweep sweep;
    sweep.parameter = parse_string(sw["parameter"], "sweep.parameter");
    for (const auto& v : sw["values"]) {
      YAML::Emitter e;
      e << v;
      sweep.values.push_back(e.c_str());
    }
    // Every value must produce a valid config.
    for (const auto& v : sweep.values) {
      YAML::Node probe = YAML::Clone(root);
      probe["sweep"] = YAML::Node(YAML::NodeType::Null);
      apply_override(probe, sweep.parameter + "=" + v);
      build(probe);
    }
    cfg.sweep = sweep;
  }

  YAML::Emitter out;
  out << root;
  cfg.resolved_yaml = std::string(out.c_str()) + "\n";
  return cfg;
}

}  // namespace

std::string to_string(Study s) {
  switch (s) {
    case Study::kLattice: return "lattice";
    case Study::kRabi: return "rabi";
    case Study::kDirect: return "direct";
    case Study::kDark: return "dark";
  }
  return "unknown";
}

Study study_from_string(const std::string& name) {
  if (name == "lattice") return Study::kLattice;
  if (name == "rabi") return Study::kRabi;
  if (name == "direct") return Study::kDirect;
  if (name == "dark") return Study::kDark;
  throw ConfigError("unknown study '" + name +
                    "' (expected lattice, rabi, direct or dark)");
}

RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides,
                       const std::optional<std::string>& study) {
  YAML::Node root = YAML::Load(kDefaults);
  YAML::Node user;
  try {
    user = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("malformed config (line " + std::to_string(e.mark.line + 1) +
                      "): " + e.msg);
  }
  if (user.IsDefined() && !user.IsNull()) merge(root, user, "");
  for (const auto& o : overrides) apply_override(root, o);
  if (study) root["study"] = *study;
  try {
    return build(root);
  } catch (const YAML::Exception& e) {
    throw ConfigError("config: " + e.msg + line_of(root));
  }
}

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides,
                      const std::optional<std::string>& study) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides, study);
}

std::vector<RunConfig> expand_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) return {cfg};
  std::vector<RunConfig> out;
  const auto& values = cfg.sweep->values;
  const int width = values.size() > 1000 ? 4 : 3;
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::string idx = std::to_string(k);
    idx.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(idx.size()))), '0');
    RunConfig point = parse_config(
        cfg.resolved_yaml,
        {"sweep=~", cfg.sweep->parameter + "=" + values[k],
         "run_name=" + cfg.run_name + "_" + idx});
    out.push_back(std::move(point));
  }
  return out;
}

std::string default_config_yaml() { return kDefaults; }

}  // namespace mtnv::config
