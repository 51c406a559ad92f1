#include "precess/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace precess {

const char* to_string(InitType type) {
  switch (type) {
    case InitType::rest: return "rest";
    case InitType::solid_rotation: return "solid_rotation";
    case InitType::poincare: return "poincare";
    case InitType::poincare_plus_rotation: return "poincare_plus_rotation";
    case InitType::coefficients: return "coefficients";
  }
  return "?";
}

ConfigError::ConfigError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(x)) throw ConfigError("expected a number, got '" + v + "'", line);
  return x;
}

int to_int(const std::string& v, int line) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || x < -1000000000L || x > 1000000000L) {
    throw ConfigError("expected an integer, got '" + v + "'", line);
  }
  return static_cast<int>(x);
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected true or false, got '" + v + "'", line);
}

InitType to_init(const std::string& v, int line) {
  for (InitType t : {InitType::rest, InitType::solid_rotation, InitType::poincare,
                     InitType::poincare_plus_rotation, InitType::coefficients}) {
    if (v == to_string(t)) return t;
  }
  throw ConfigError("unknown init.type '" + v + "'", line);
}

}  // namespace

Domain ScenarioConfig::domain() const {
  return beta ? Domain::spheroid(*beta) : Domain::ellipsoid(a, b, c);
}

std::optional<Field> ScenarioConfig::poincare() const {
  const Domain d = domain();
  const auto bt = d.beta();
  if (!bt || *bt == 0.0) return std::nullopt;
  return poincare_field(*bt, eps_p);
}

void ScenarioConfig::validate() const {
  if (beta) {
    if (!(*beta > -1.0)) throw ConfigError("domain.beta must exceed -1");
  } else if (!(a > 0.0 && b > 0.0 && c > 0.0)) {
    throw ConfigError("semi-axes must be positive");
  }
  if (degree < 1) throw ConfigError("basis.degree must be >= 1");
  if (!(nu_inverse > 0.0)) throw ConfigError("physics.nu_inverse must be positive");
  if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (!(t_end > 0.0)) throw ConfigError("time.t_end must be positive");
  if (record_every < 1) throw ConfigError("time.record_every must be >= 1");
  if (restart_time && !(*restart_time >= 0.0 && *restart_time <= t_end)) {
    throw ConfigError("restart.time must lie in [0, time.t_end]");
  }
  if (!(blowup_factor > 1.0)) throw ConfigError("time.blowup_factor must exceed 1");
  const bool needs_up = is_poincare(bc) || init == InitType::poincare ||
                        init == InitType::poincare_plus_rotation;
  if (needs_up) {
    const auto bt = domain().beta();
    if (!bt || *bt == 0.0) {
      throw ConfigError("the Poincare flow needs a z-spheroid with beta != 0");
    }
  }
  if (init == InitType::coefficients && init_file.empty()) {
    throw ConfigError("init.type = coefficients needs init.file");
  }
}

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig cfg;
  using Setter = std::function<void(const std::string&, int)>;
  const std::map<std::string, Setter> keys = {
      {"domain.a", [&](const std::string& v, int l) { cfg.a = to_double(v, l); }},
      {"domain.b", [&](const std::string& v, int l) { cfg.b = to_double(v, l); }},
      {"domain.c", [&](const std::string& v, int l) { cfg.c = to_double(v, l); }},
      {"domain.beta", [&](const std::string& v, int l) { cfg.beta = to_double(v, l); }},
      {"basis.degree", [&](const std::string& v, int l) { cfg.degree = to_int(v, l); }},
      {"bc.form",
       [&](const std::string& v, int l) {
         try {
           cfg.bc = parse_bc_form(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what(), l);
         }
       }},
      {"physics.nu_inverse", [&](const std::string& v, int l) { cfg.nu_inverse = to_double(v, l); }},
      {"physics.eps_p", [&](const std::string& v, int l) { cfg.eps_p = to_double(v, l); }},
      {"physics.advection", [&](const std::string& v, int l) { cfg.advection = to_bool(v, l); }},
      {"init.type", [&](const std::string& v, int l) { cfg.init = to_init(v, l); }},
      {"init.amplitude", [&](const std::string& v, int l) { cfg.init_amplitude = to_double(v, l); }},
      {"init.omega", [&](const std::string& v, int l) { cfg.init_omega = to_double(v, l); }},
      {"init.eps_p", [&](const std::string& v, int l) { cfg.init_eps_p = to_double(v, l); }},
      {"init.perturbation", [&](const std::string& v, int l) { cfg.init_perturbation = to_double(v, l); }},
      {"init.file", [&](const std::string& v, int) { cfg.init_file = v; }},
      {"time.dt", [&](const std::string& v, int l) { cfg.dt = to_double(v, l); }},
      {"time.t_end", [&](const std::string& v, int l) { cfg.t_end = to_double(v, l); }},
      {"time.record_every", [&](const std::string& v, int l) { cfg.record_every = to_int(v, l); }},
      {"time.blowup_factor", [&](const std::string& v, int l) { cfg.blowup_factor = to_double(v, l); }},
      {"restart.time", [&](const std::string& v, int l) { cfg.restart_time = to_double(v, l); }},
      {"restart.omega", [&](const std::string& v, int l) { cfg.restart_omega = to_double(v, l); }},
      {"constraint.mode",
       [&](const std::string& v, int l) {
         if (v == "none") {
           cfg.constraint.reset();
           return;
         }
         try {
           cfg.constraint = parse_constraint_mode(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what(), l);
         }
       }},
      {"output.path", [&](const std::string& v, int) { cfg.output_path = v; }},
  };

  std::set<std::string> seen;
  int axes_line = 0, beta_line = 0;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError("unknown key '" + key + "'", line);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line);
    if (key == "domain.beta") beta_line = line;
    if (key == "domain.a" || key == "domain.b" || key == "domain.c") axes_line = axes_line ? axes_line : line;
    if (beta_line && axes_line) {
      throw ConfigError("domain.beta and explicit domain axes are mutually exclusive", line);
    }
    it->second(value, line);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

Scenario prepare(const ScenarioConfig& cfg) {
  cfg.validate();
  const Domain d = cfg.domain();
  const auto up = cfg.poincare();
  const BCSpec bc = is_poincare(cfg.bc) ? BCSpec::with_data(cfg.bc, *up) : BCSpec::homogeneous(cfg.bc);
  Scenario s{cfg, build_basis(d, cfg.degree), {}, {}, {}, {}};
  s.ops = assemble(s.basis, bc, cfg.nu(), cfg.eps_p);
  s.ctx = DiagnosticsContext::make(s.basis, up);
  s.rotation = s.ctx.rotation;

  const int n = s.basis.dim();
  auto initial_poincare = [&] {
    const double eps = cfg.init_eps_p.value_or(cfg.eps_p);
    return project(poincare_field(*d.beta(), eps), s.basis).coeffs;
  };
  auto require_rotation = [&] {
    if (s.ctx.rotation_defect2 > 1e-20) {
      throw ConfigError("e_z x x is not in the velocity space of this domain");
    }
  };
  switch (cfg.init) {
    case InitType::rest:
      s.initial = Eigen::VectorXd::Zero(n);
      break;
    case InitType::solid_rotation:
      require_rotation();
      s.initial = cfg.init_amplitude * s.rotation;
      break;
    case InitType::poincare:
      s.initial = initial_poincare();
      break;
    case InitType::poincare_plus_rotation:
      s.initial = initial_poincare() + cfg.init_omega * s.rotation;
      break;
    case InitType::coefficients: {
      std::ifstream in(cfg.init_file);
      if (!in) throw ConfigError("cannot open init.file '" + cfg.init_file + "'");
      std::vector<double> values;
      std::string tok;
      while (in >> tok) {
        if (tok[0] == '#') {
          std::getline(in, tok);
          continue;
        }
        values.push_back(to_double(tok, 0));
      }
      if (static_cast<int>(values.size()) != n) {
        throw ConfigError("init.file holds " + std::to_string(values.size()) + " coefficients, basis has " +
                          std::to_string(n));
      }
      s.initial = Eigen::Map<Eigen::VectorXd>(values.data(), n);
      break;
    }
  }
  if (cfg.init_perturbation != 0.0) {
    // Tilt of the rotation axis: diag(a^2,b^2,c^2)(e_x x x), the second raw field.
    const Field tilt = s.basis.raw_fields[1].map<double>([](const Rational& q) { return q.get_d(); });
    s.initial += cfg.init_perturbation * project(tilt, s.basis).coeffs;
  }
  if (cfg.restart_time && cfg.restart_omega != 0.0) require_rotation();
  return s;
}

namespace {

void write_output(const std::string& path, TimeSeries& series) {
  fill_time_derivatives(series);
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
  write_csv(out, series);
}

}  // namespace

RunResult run(const Scenario& sc) {
  const ScenarioConfig& cfg = sc.cfg;
  Stepper stepper(sc.ops, cfg.dt, StepperOptions{cfg.advection, cfg.blowup_factor});
  const double n0 = sc.initial.norm();
  stepper.set_reference_norm(n0 > 0.0 ? n0 : 1.0);

  RunResult result;
  State& st = result.final_state;
  st = stepper.start(0.0, sc.initial);
  const long total = std::lround(cfg.t_end / cfg.dt);
  const long restart_step = cfg.restart_time ? std::lround(*cfg.restart_time / cfg.dt) : -1;

  auto apply_events = [&] {
    if (st.steps == restart_step && cfg.restart_omega != 0.0) {
      st.coeffs += cfg.restart_omega * sc.rotation;
      st.prev_coeffs += cfg.restart_omega * sc.rotation;
    }
    if (cfg.constraint) {
      st.coeffs = constraint_projection(st.coeffs, sc.ctx, *cfg.constraint);
      st.prev_coeffs = constraint_projection(st.prev_coeffs, sc.ctx, *cfg.constraint);
    }
  };

  apply_events();
  result.series.push_back(record(st.t, st.coeffs, sc.ops, sc.ctx));
  try {
    while (st.steps < total) {
      stepper.step(st);
      apply_events();
      if (st.steps % cfg.record_every == 0) result.series.push_back(record(st.t, st.coeffs, sc.ops, sc.ctx));
    }
  } catch (const BlowUpError&) {
    write_output(cfg.output_path, result.series);
    throw;
  }
  write_output(cfg.output_path, result.series);
  return result;
}

RunResult run(const ScenarioConfig& cfg) { return run(prepare(cfg)); }

}  // namespace precess
