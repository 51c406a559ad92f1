#include <doctest.h>

#include <cmath>
#include <random>

#include "precess/spectral.hpp"
#include "precess/timestepper.hpp"

using namespace precess;

namespace {

const Domain kSpheroid = Domain::spheroid(0.5625);
const Domain kTriaxial = Domain::ellipsoid(1, 0.9, 0.8);
const double kBeta = 0.5625, kEps = 0.25;

Eigen::VectorXd random_unit(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd c(n);
  for (auto& v : c) v = g(rng);
  return c.normalized();
}

Eigen::VectorXd integrate(const OperatorSet& ops, const Eigen::VectorXd& c0, double dt, double t_end) {
  const Stepper st(ops, dt);
  State s = st.start(0.0, c0);
  const long n = std::lround(t_end / dt);
  for (long i = 0; i < n; ++i) st.step(s);
  return s.coeffs;
}

}  // namespace

TEST_CASE("rest stays at rest") {
  const OperatorSet ops = assemble(build_basis(kTriaxial, 3), BCSpec::homogeneous(BCForm::stress_free),
                                   1 / 0.024, kEps);
  const Stepper st(ops, 0.01);
  State s = st.start(0.0, Eigen::VectorXd::Zero(ops.dim));
  for (int i = 0; i < 100; ++i) st.step(s);
  CHECK(s.coeffs.isZero(0.0));
  CHECK(s.t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.steps == 100);
}

TEST_CASE("a solid rotation about the symmetry axis persists") {
  const Basis b = build_basis(kSpheroid, 4);
  const OperatorSet ops = assemble(b, BCSpec::homogeneous(BCForm::stress_free), 1 / 0.024, 0.0);
  const Eigen::VectorXd c0 = 0.3 * project(solid_rotation({0, 0, 1}), b).coeffs;
  const Stepper st(ops, 0.01);
  State s = st.start(0.0, c0);
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const Eigen::VectorXd before = s.coeffs;
    st.step(s);
    worst = std::max(worst, (s.coeffs - before).lpNorm<Eigen::Infinity>());
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("u_P plus a rotation is stationary under the Poincare stress condition") {
  const Basis b = build_basis(kSpheroid, 4);
  const OperatorSet ops = assemble(b, BCSpec::with_data(BCForm::poincare_stress, poincare_field(kBeta, kEps)),
                                   1 / 0.024, kEps);
  const Eigen::VectorXd c0 = project(poincare_field(kBeta, kEps), b).coeffs +
                             0.025 * project(solid_rotation({0, 0, 1}), b).coeffs;
  const Eigen::VectorXd c = integrate(ops, c0, 0.01, 1.0);
  CHECK((c - c0).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("Stokes decay from the slowest damped mode") {
  const Basis b = build_basis(kSpheroid, 4);
  const double nu = 1.0;
  const OperatorSet ops = assemble(b, BCSpec::homogeneous(BCForm::stress_free), nu, 0.0);
  const KernelReport ks = viscous_kernel(ops);
  const CoercivityResult k = coercivity_constant(ops, ks.kernel_fields, 4);
  const Stepper st(ops, 1e-3, {.advection = false});
  State s = st.start(0.0, k.minimizer);
  const double e0 = 0.5 * k.minimizer.squaredNorm();
  double prev = e0;
  for (int i = 0; i < 2000; ++i) {
    st.step(s);
    const double e = 0.5 * s.coeffs.squaredNorm();
    CHECK(e < prev);
    CHECK(e <= e0 * std::exp(-4 * nu * k.K * s.t) * 1.05);
    prev = e;
  }
  const double rate = -std::log(prev / e0) / s.t;
  CHECK(rate == doctest::Approx(4 * nu * k.K).epsilon(0.05));
  CHECK(rate == doctest::Approx(4 * nu * k.K).epsilon(1e-4));
}

TEST_CASE("BDF2 converges at second order") {
  const Basis b = build_basis(kTriaxial, 2);
  const OperatorSet ops = assemble(b, BCSpec::homogeneous(BCForm::stress_free), 0.2, kEps);
  const Eigen::VectorXd c0 = random_unit(ops.dim, 5);
  const Eigen::VectorXd ref = integrate(ops, c0, 1.0 / 6400, 1.0);
  double prev_err = 0;
  for (double dt : {0.02, 0.01, 0.005}) {
    const double err = (integrate(ops, c0, dt, 1.0) - ref).norm();
    if (prev_err > 0) {
      CAPTURE(dt);
      CHECK(prev_err / err > 3.5);
      CHECK(prev_err / err < 4.5);
    }
    prev_err = err;
  }
}

TEST_CASE("homogeneous stress-free energy never grows") {
  const Basis b = build_basis(kSpheroid, 3);
  const OperatorSet ops = assemble(b, BCSpec::homogeneous(BCForm::stress_free), 1 / 0.024, kEps);
  const Eigen::VectorXd c0 = 0.1 * project(solid_rotation({0, 0, 1}), b).coeffs + 0.05 * random_unit(ops.dim, 8);
  const Stepper st(ops, 0.01);
  State s = st.start(0.0, c0);
  const double e0 = 0.5 * c0.squaredNorm();
  double prev = e0;
  for (int i = 0; i < 2000; ++i) {
    st.step(s);
    const double e = 0.5 * s.coeffs.squaredNorm();
    CHECK(e - prev <= 1e-12 * e0);
    prev = e;
  }
  CHECK(prev < e0);
}

TEST_CASE("blow-up detection") {
  const Basis b = build_basis(kSpheroid, 1);
  const OperatorSet ops = assemble(b, BCSpec::with_data(BCForm::poincare_stress, poincare_field(kBeta, kEps)),
                                   1.0, kEps);
  Stepper st(ops, 0.01, {.advection = true, .blowup_factor = 10.0});
  st.set_reference_norm(1e-3);
  State s = st.start(0.0, Eigen::VectorXd::Zero(ops.dim));
  bool thrown = false;
  try {
    for (int i = 0; i < 1000; ++i) st.step(s);
  } catch (const BlowUpError& e) {
    thrown = true;
    CHECK(e.norm() > 1e-2);
    CHECK(e.time() == doctest::Approx(s.t));
    CHECK(std::string(e.what()).find("blow-up") != std::string::npos);
  }
  CHECK(thrown);

  // Non-finite states always abort.
  Stepper loose(ops, 0.01, {.advection = true, .blowup_factor = INFINITY});
  State nan = loose.start(0.0, Eigen::VectorXd::Constant(ops.dim, NAN));
  CHECK_THROWS_AS(loose.step(nan), BlowUpError);
}

TEST_CASE("stepper preconditions and bookkeeping") {
  const OperatorSet ops = assemble(build_basis(kSpheroid, 1), BCSpec::homogeneous(BCForm::stress_free), 1.0, 0.0);
  CHECK_THROWS_AS(Stepper(ops, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Stepper(ops, -0.1), std::invalid_argument);
  const Stepper st(ops, 0.1);
  CHECK_THROWS_AS(st.start(0.0, Eigen::VectorXd::Zero(2)), std::invalid_argument);
  State s = st.start(5.0, random_unit(ops.dim, 1));
  CHECK(s.bootstrap);
  st.step(s);
  CHECK(!s.bootstrap);
  CHECK(s.t == doctest::Approx(5.1));
  Stepper::reset_history(s);
  CHECK(s.bootstrap);
  for (int i = 0; i < 9; ++i) st.step(s);
  CHECK(s.t == 6.0);
}

TEST_CASE("restarting the history after a kick is backward Euler") {
  const OperatorSet ops = assemble(build_basis(kTriaxial, 2), BCSpec::homogeneous(BCForm::stress_free), 0.5, kEps);
  const Stepper st(ops, 0.05, {.advection = false});
  const Eigen::VectorXd c0 = random_unit(ops.dim, 2);
  State s = st.start(0.0, c0);
  st.step(s);
  // Backward Euler for a linear system: (M/dt + L) c1 = M c0 / dt.
  const Eigen::MatrixXd lhs = ops.M / 0.05 + ops.linear();
  const Eigen::VectorXd expect = lhs.partialPivLu().solve(ops.M * c0 / 0.05);
  CHECK((s.coeffs - expect).norm() < 1e-13);
}
