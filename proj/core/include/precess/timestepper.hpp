#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

#include "precess/operators.hpp"

namespace precess {

struct State {
  double t = 0.0;
  double t0 = 0.0;
  Eigen::VectorXd coeffs;
  Eigen::VectorXd prev_coeffs;  // meaningful once steps > 0
  long steps = 0;
  bool bootstrap = true;  // next step is backward Euler
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double t, double norm, double limit);
  double time() const { return t_; }
  double norm() const { return norm_; }

 private:
  double t_, norm_;
};

struct StepperOptions {
  bool advection = true;
  /// Abort once |coeffs| exceeds this multiple of the reference norm.
  double blowup_factor = 1e6;
};

/// BDF2 with implicit V + 2 eps_p C and extrapolated explicit advection,
/// written for the increment delta = u^{n+1} - u^n so that exact steady
/// states produce delta at round-off level:
///   (3/(2dt) M + L) delta = F - L u^n - N(2u^n - u^{n-1}) + M (u^n - u^{n-1})/(2dt)
/// First step (and the step after any reset) is backward Euler:
///   (M/dt + L) delta = F - L u^0 - N(u^0).
class Stepper {
 public:
  /// Throws std::invalid_argument if dt <= 0.
  Stepper(const OperatorSet& ops, double dt, StepperOptions options = {});

  State start(double t0, const Eigen::VectorXd& c0) const;
  void step(State& s) const;
  /// Forget the history after an external change of the state.
  static void reset_history(State& s) { s.bootstrap = true; }

  double dt() const { return dt_; }
  double reference_norm() const { return ref_; }
  void set_reference_norm(double r) { ref_ = r; }

 private:
  Eigen::VectorXd nonlinear(const Eigen::VectorXd& u) const;

  const OperatorSet& ops_;
  double dt_;
  StepperOptions opt_;
  Eigen::MatrixXd L_;
  Eigen::PartialPivLU<Eigen::MatrixXd> be_;
  Eigen::PartialPivLU<Eigen::MatrixXd> bdf2_;
  double ref_ = 1.0;
};

}  // namespace precess
