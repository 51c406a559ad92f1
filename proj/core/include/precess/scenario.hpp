#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "precess/basis.hpp"
#include "precess/diagnostics.hpp"
#include "precess/operators.hpp"
#include "precess/timestepper.hpp"

namespace precess {

enum class InitType { rest, solid_rotation, poincare, poincare_plus_rotation, coefficients };
const char* to_string(InitType type);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

struct ScenarioConfig {
  // Either beta (z-spheroid x^2 + y^2 + (1+beta) z^2 = 1) or explicit axes.
  std::optional<double> beta;
  double a = 1.0, b = 1.0, c = 1.0;
  int degree = 4;
  BCForm bc = BCForm::stress_free;
  double nu_inverse = 1.0;
  double eps_p = 0.0;

  InitType init = InitType::solid_rotation;
  double init_amplitude = 0.1;   // solid_rotation: amplitude * e_z x x
  double init_omega = 0.0;       // poincare_plus_rotation: u_P + omega e_z x x
  std::optional<double> init_eps_p;  // eps inside u_P for the initial field
  double init_perturbation = 0.0;    // adds this multiple of the x-tilt field
  std::string init_file;             // coefficients, whitespace separated

  double dt = 0.01;
  double t_end = 1.0;
  int record_every = 1;  // steps between records
  std::optional<double> restart_time;
  double restart_omega = 0.0;
  std::optional<ConstraintMode> constraint;
  bool advection = true;
  double blowup_factor = 1e6;
  std::string output_path;

  double nu() const { return 1.0 / nu_inverse; }
  Domain domain() const;
  /// u_P for the configured beta and eps_p, when the domain is a z-spheroid
  /// with beta != 0.
  std::optional<Field> poincare() const;
  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// Line-oriented `key = value`; '#' starts a comment. Unknown keys,
/// duplicates, malformed values and the combination of domain.beta with
/// explicit axes raise ConfigError carrying the line number.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

struct Scenario {
  ScenarioConfig cfg;
  Basis basis;
  OperatorSet ops;
  DiagnosticsContext ctx;
  Eigen::VectorXd initial;
  Eigen::VectorXd rotation;  // e_z x x coefficients (projected)
};

/// Builds basis, operators, diagnostics context and initial coefficients.
Scenario prepare(const ScenarioConfig& cfg);

struct RunResult {
  TimeSeries series;
  State final_state;
};

/// Time integration with records every cfg.record_every steps, restart
/// perturbation and constraint projection. The CSV (if output_path is set)
/// is written even when a BlowUpError propagates.
RunResult run(const Scenario& scenario);
RunResult run(const ScenarioConfig& cfg);

}  // namespace precess
