#include "precess/timestepper.hpp"

#include <cmath>
#include <cstdio>

namespace precess {

namespace {

std::string blowup_message(double t, double norm, double limit) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "blow-up at t = %.6g: |coeffs| = %.6g exceeds %.6g", t, norm, limit);
  return buf;
}

}  // namespace

BlowUpError::BlowUpError(double t, double norm, double limit)
    : std::runtime_error(blowup_message(t, norm, limit)), t_(t), norm_(norm) {}

Stepper::Stepper(const OperatorSet& ops, double dt, StepperOptions options)
    : ops_(ops), dt_(dt), opt_(options) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  L_ = ops.linear();
  be_.compute(ops.M / dt + L_);
  bdf2_.compute(1.5 / dt * ops.M + L_);
}

State Stepper::start(double t0, const Eigen::VectorXd& c0) const {
  if (c0.size() != ops_.dim) throw std::invalid_argument("initial state dimension mismatch");
  State s;
  s.t = t0;
  s.t0 = t0;
  s.coeffs = c0;
  s.prev_coeffs = c0;
  return s;
}

Eigen::VectorXd Stepper::nonlinear(const Eigen::VectorXd& u) const {
  if (!opt_.advection) return Eigen::VectorXd::Zero(ops_.dim);
  return ops_.advect(u);
}

void Stepper::step(State& s) const {
  const Eigen::VectorXd& u = s.coeffs;
  Eigen::VectorXd delta;
  if (s.bootstrap) {
    delta = be_.solve(ops_.F - L_ * u - nonlinear(u));
  } else {
    const Eigen::VectorXd diff = u - s.prev_coeffs;
    const Eigen::VectorXd rhs =
        ops_.F - L_ * u - nonlinear(u + diff) + ops_.M * diff / (2.0 * dt_);
    delta = bdf2_.solve(rhs);
  }
  s.prev_coeffs = s.coeffs;
  s.coeffs += delta;
  ++s.steps;
  s.t = s.t0 + static_cast<double>(s.steps) * dt_;
  s.bootstrap = false;

  const double norm = s.coeffs.norm();
  const double limit = opt_.blowup_factor * ref_;
  if (!std::isfinite(norm) || norm > limit) throw BlowUpError(s.t, norm, limit);
}

}  // namespace precess
