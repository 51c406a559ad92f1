// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "precess/scenario.hpp"
#include "precess/spectral.hpp"

using namespace precess;

namespace {

const double kBeta = 0.5625, kEps = 0.25;
const Domain kSphere = Domain::ellipsoid(1, 1, 1);
const Domain kSpheroid = Domain::spheroid(kBeta);
const Domain kTriaxial = Domain::ellipsoid(1, 0.9, 0.8);
const std::string kConfigDir = PRECESS_CONFIG_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

OperatorSet poincare_ops(const Basis& b, double nu) {
  return assemble(b, BCSpec::with_data(BCForm::poincare_stress, poincare_field(kBeta, kEps)), nu, kEps);
}

Eigen::VectorXd coeffs_of(const Field& f, const Basis& b) { return project(f, b).coeffs; }

ScenarioConfig poincare_config(int N, double nu_inverse, double dt, double t_end) {
  ScenarioConfig c;
  c.beta = kBeta;
  c.degree = N;
  c.bc = BCForm::poincare_stress;
  c.nu_inverse = nu_inverse;
  c.eps_p = kEps;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

Outcome trichotomy() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::pair<Domain, int> cases[] = {{kSphere, 3}, {kSpheroid, 1}, {kTriaxial, 0}};
  bool good = true;
  std::string dims;
  for (int N : {1, 2, 4}) {
    for (const auto& [d, expect] : cases) {
      const OperatorSet ops = assemble(build_basis(d, N), BCSpec::homogeneous(BCForm::stress_free), 1.0, 0.0);
      const int ks = viscous_kernel(ops, Stiffness::strain).kernel_dim;
      const int kg = viscous_kernel(ops, Stiffness::gradient).kernel_dim;
      good = good && ks == expect && kg == 0;
      if (N == 4) dims += std::to_string(ks) + "/";
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  dims.pop_back();
  return {good && secs < 60.0, "A_sym kernels at N=4 " + dims + ", A_grad 0, " + fmt(secs) + " s"};
}

Outcome poincare_steady() {
  double worst = 0.0;
  for (int N : {1, 2, 4}) {
    const Basis b = build_basis(kSpheroid, N);
    const Eigen::VectorXd up = coeffs_of(poincare_field(kBeta, kEps), b);
    for (double inv : {0.024, 0.00375})
      worst = std::max(worst, residual(up, poincare_ops(b, 1.0 / inv)).lpNorm<Eigen::Infinity>());
  }
  return {worst < 1e-10, "max residual " + fmt(worst)};
}

Outcome non_attractive() {
  const Basis b = build_basis(kSpheroid, 4);
  const OperatorSet ops = poincare_ops(b, 1.0 / 0.024);
  const Eigen::VectorXd up = coeffs_of(poincare_field(kBeta, kEps), b);
  const Eigen::VectorXd rot = coeffs_of(solid_rotation({0, 0, 1}), b);
  double worst = 0.0;
  for (double w : {-0.1, -0.025, 0.025, 0.1, 1.0})
    worst = std::max(worst, residual(up + w * rot, ops).lpNorm<Eigen::Infinity>());

  const Eigen::VectorXd c0 = up + 0.025 * rot;
  const Stepper st(ops, 0.01);
  State s = st.start(0.0, c0);
  for (int i = 0; i < 100; ++i) st.step(s);
  const double drift = (s.coeffs - c0).norm() / c0.norm();
  return {worst < 1e-10 && drift < 1e-9, "max residual " + fmt(worst) + ", 100-step drift " + fmt(drift)};
}

Outcome perpetual_rotation() {
  const Basis b = build_basis(kSpheroid, 4);
  const OperatorSet ops = assemble(b, BCSpec::homogeneous(BCForm::stress_free), 1.0 / 0.024, 0.0);
  const DiagnosticsContext ctx = DiagnosticsContext::make(b, std::nullopt);
  const Stepper st(ops, 0.01);
  State s = st.start(0.0, 0.1 * ctx.rotation);
  const DiagnosticsRecord r0 = record(0.0, s.coeffs, ops, ctx);
  double de = 0.0, dl = 0.0;
  for (int i = 0; i < 10000; ++i) {
    st.step(s);
    const DiagnosticsRecord r = record(s.t, s.coeffs, ops, ctx);
    de = std::max(de, std::abs(r.E_K - r0.E_K) / r0.E_K);
    dl = std::max(dl, std::abs(r.lambda - r0.lambda) / std::abs(r0.lambda));
  }
  return {de < 1e-12 && dl < 1e-12, "10000 steps, E_K drift " + fmt(de) + ", lambda drift " + fmt(dl)};
}

Outcome free_decay() {
  const Basis b = build_basis(kSpheroid, 4);
  const double nu = 1.0;
  const OperatorSet ops = assemble(b, BCSpec::homogeneous(BCForm::stress_free), nu, 0.0);
  const KernelReport ks = viscous_kernel(ops);
  const CoercivityResult k = coercivity_constant(ops, ks.kernel_fields, 4);
  const Stepper st(ops, 1e-3, {.advection = false});
  State s = st.start(0.0, k.minimizer);
  const double e0 = 0.5 * k.minimizer.squaredNorm();
  for (int i = 0; i < 2000; ++i) st.step(s);
  const double rate = -std::log(0.5 * s.coeffs.squaredNorm() / e0) / s.t;
  const double rel = std::abs(rate / (4 * nu * k.K) - 1.0);
  return {rel < 0.05, "rate " + fmt(rate) + " vs 4 nu K_4 " + fmt(4 * nu * k.K) + ", rel " + fmt(rel)};
}

Outcome fig1() {
  ScenarioConfig c = load_config(kConfigDir + "/fig1.cfg");
  c.output_path.clear();
  const RunResult r = run(c);
  double worst = -INFINITY;
  for (const auto& rec : r.series) worst = std::max(worst, rec.dEK_dt);
  const double ratio = r.series.back().E_K / r.series.front().E_K;
  return {worst <= 1e-12 && ratio < 1e-6,
          "t_end " + fmt(c.t_end) + ", max dEK_dt " + fmt(worst) + ", E_K ratio " + fmt(ratio)};
}

// The backward-Euler first step leaves an O(dt) error in the first centred
// differences that decays geometrically; the window t >= 0.1 excludes it for
// every dt used here. Both maxima are reported.
struct MomentumMax {
  double all = 0.0, window = 0.0;
};

MomentumMax momentum_residual(double dt) {
  ScenarioConfig c = poincare_config(4, 1.0, dt, 2.0);
  c.init = InitType::poincare;
  c.init_perturbation = 0.1;
  const RunResult r = run(c);
  const std::vector<double> res = momentum_balance_residual(r.series, c.eps_p);
  MomentumMax m;
  for (std::size_t i = 0; i < res.size(); ++i) {
    m.all = std::max(m.all, std::abs(res[i]));
    if (r.series[i + 1].t >= 0.1 - 1e-12) m.window = std::max(m.window, std::abs(res[i]));
  }
  return m;
}

Outcome momentum_balance() {
  const MomentumMax r1 = momentum_residual(0.01), r2 = momentum_residual(0.005), r3 = momentum_residual(0.0025);
  const double q1 = r1.window / r2.window, q2 = r2.window / r3.window;
  const bool good = q1 >= 3.5 && q1 <= 4.5 && q2 >= 3.5 && q2 <= 4.5 && r3.window < 1e-6;
  return {good, "t >= 0.1 max residual " + fmt(r1.window) + ", " + fmt(r2.window) + ", " + fmt(r3.window) +
                    "; ratios " + fmt(q1) + ", " + fmt(q2) + " (all records " + fmt(r1.all) + ", " + fmt(r2.all) +
                    ", " + fmt(r3.all) + ")"};
}

Outcome lemma_My() {
  long double worst = 0.0L;
  for (const Domain& d : {kSphere, kSpheroid, kTriaxial}) {
    for (const auto& f : build_basis(d, 4).fields) {
      const MyCheck m = lemma_My_check(f, d);
      worst = std::max(worst, std::abs(m.lhs - m.rhs));
    }
  }
  return {worst < 1e-12L, "max |lhs - rhs| " + fmt(static_cast<double>(worst))};
}

Outcome energy_neutrality() {
  std::mt19937 rng(20261016);
  std::normal_distribution<double> g;
  double adv = 0.0, cor = 0.0;
  for (const Domain& d : {kSphere, kSpheroid, kTriaxial}) {
    const OperatorSet ops = assemble(build_basis(d, 4), BCSpec::homogeneous(BCForm::stress_free), 1.0, kEps);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd c(ops.dim);
      for (auto& v : c) v = g(rng);
      c.normalize();
      adv = std::max(adv, std::abs(c.dot(ops.advect(c))));
      cor = std::max(cor, std::abs(c.dot(ops.C * c)));
    }
  }
  return {adv < 1e-11 && cor < 1e-13, "advection " + fmt(adv) + ", Coriolis " + fmt(cor)};
}

Outcome family_of_states() {
  auto states = [](double omega) {
    ScenarioConfig c = poincare_config(4, 0.00375, 0.01, 20.0);
    c.init = InitType::poincare_plus_rotation;
    c.init_omega = omega;
    c.init_perturbation = 1e-4;
    const Scenario sc = prepare(c);
    const Stepper st(sc.ops, c.dt);
    State s = st.start(0.0, sc.initial);
    std::vector<Eigen::VectorXd> out{s.coeffs};
    for (long i = 0; i < std::lround(c.t_end / c.dt); ++i) {
      st.step(s);
      out.push_back(s.coeffs);
    }
    return out;
  };
  const auto plus = states(0.025), minus = states(-0.025);
  const double d0 = (plus[0] - minus[0]).norm();
  double lowest = d0;
  for (std::size_t i = 0; i < plus.size(); ++i) lowest = std::min(lowest, (plus[i] - minus[i]).norm());
  return {lowest >= 0.9 * d0, "distance min/initial " + fmt(lowest / d0)};
}

Outcome constraint_remedy() {
  ScenarioConfig c = poincare_config(4, 0.024, 0.01, 1.0);
  c.init = InitType::poincare_plus_rotation;
  c.init_omega = 0.025;
  c.constraint = ConstraintMode::rot_momentum;
  const Scenario sc = prepare(c);
  const double initial = record(0.0, sc.initial, sc.ops, sc.ctx).delta_EK;
  const double final = run(sc).series.back().delta_EK;
  return {final < 1e-6 * initial, "delta_EK " + fmt(initial) + " -> " + fmt(final)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"kernel trichotomy", trichotomy},
      {"Poincare steadiness", poincare_steady},
      {"non-attractivity", non_attractive},
      {"perpetual rotation", perpetual_rotation},
      {"free-decay rate", free_decay},
      {"fig1 decay", fig1},
      {"momentum balance", momentum_balance},
      {"lemma My", lemma_My},
      {"energy neutrality", energy_neutrality},
      {"family of states", family_of_states},
      {"constraint remedy", constraint_remedy},
  };
  int failed = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria pass\n", n - failed, n);
  return failed ? 1 : 0;
}
