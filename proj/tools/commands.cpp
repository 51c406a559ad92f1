#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "precess/basis.hpp"
#include "precess/operators.hpp"
#include "precess/scenario.hpp"
#include "precess/spectral.hpp"

namespace precess::cli {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

int expected_strain_kernel(DomainKind kind) {
  switch (kind) {
    case DomainKind::sphere: return 3;
    case DomainKind::spheroid_z: return 1;
    case DomainKind::triaxial: return 0;
  }
  return -1;
}

Field to_double(const RationalField& f) {
  return f.map<double>([](const Rational& q) { return q.get_d(); });
}

double antisymmetry_defect(const OperatorSet& ops) {
  double worst = 0.0;
  for (int i = 0; i < ops.dim; ++i) {
    for (int j = 0; j < ops.dim; ++j) {
      for (int k = j; k < ops.dim; ++k) worst = std::max(worst, std::abs(ops.t(i, j, k) + ops.t(i, k, j)));
    }
  }
  return worst;
}

std::vector<double> steady_sweep() { return {-0.1, -0.025, 0.025, 0.1, 1.0}; }

}  // namespace

int cmd_basis(const std::string& config, const std::string& export_path, std::ostream& out) {
  const ScenarioConfig cfg = load_config(config);
  const Domain d = cfg.domain();
  const Basis basis = build_basis(d, cfg.degree);
  int failures = 0;
  for (std::size_t i = 0; i < basis.raw_fields.size(); ++i) {
    const SymbolicCheck chk = check_field(basis.raw_fields[i], d);
    if (!chk.ok()) {
      ++failures;
      out << "field " << i << ": solenoidal=" << chk.solenoidal << " tangent=" << chk.tangent << '\n';
    }
  }
  out << "domain: " << to_string(d.kind()) << " a=" << d.a() << " b=" << d.b() << " c=" << d.c() << '\n';
  out << "degree: " << basis.degree << '\n';
  out << "dim: " << basis.dim() << '\n';
  out << "raw_gram_condition: " << fmt(basis.raw_gram_condition) << '\n';
  out << "gram_deviation: " << fmt(basis.gram_deviation()) << '\n';
  out << "symbolic_checks: " << (basis.dim() - failures) << "/" << basis.dim() << " pass\n";
  if (!export_path.empty()) {
    std::ofstream f(export_path);
    if (!f) throw ConfigError("cannot write basis file '" + export_path + "'");
    write_basis(f, basis);
    out << "exported: " << export_path << '\n';
  }
  return failures == 0 ? ok : invariant_failure;
}

int cmd_eig(const std::string& config, std::ostream& out) {
  const ScenarioConfig cfg = load_config(config);
  const Domain d = cfg.domain();
  const Basis basis = build_basis(d, cfg.degree);
  const OperatorSet ops = assemble(basis, BCSpec::homogeneous(BCForm::stress_free), cfg.nu(), 0.0);
  const KernelReport ks = viscous_kernel(ops, Stiffness::strain);
  const KernelReport kg = viscous_kernel(ops, Stiffness::gradient);
  const int expect = expected_strain_kernel(d.kind());
  out << "domain: " << to_string(d.kind()) << '\n';
  out << "dim: " << basis.dim() << '\n';
  out << "kernel_A_sym: " << ks.kernel_dim << " (expected " << expect << ")\n";
  out << "kernel_A_grad: " << kg.kernel_dim << " (expected 0)\n";
  const CoercivityResult k = coercivity_constant(ops, ks.kernel_fields, cfg.degree);
  out << "K_N: " << fmt(k.K) << " (excluding " << k.excluded << " kernel fields)\n";
  out << "lowest_A_grad_eigenvalue: " << fmt(kg.eigenvalues(0)) << '\n';
  return (ks.kernel_dim == expect && kg.kernel_dim == 0) ? ok : invariant_failure;
}

int cmd_steady(const std::string& config, std::ostream& out) {
  const ScenarioConfig cfg = load_config(config);
  const auto up = cfg.poincare();
  if (!up) throw ConfigError("steady needs a z-spheroid with beta != 0");
  const Domain d = cfg.domain();
  const Basis basis = build_basis(d, cfg.degree);
  const BCSpec bc = is_poincare(cfg.bc) ? BCSpec::with_data(cfg.bc, *up) : BCSpec::homogeneous(cfg.bc);
  const OperatorSet ops = assemble(basis, bc, cfg.nu(), cfg.eps_p);
  const Eigen::VectorXd cp = project(*up, basis).coeffs;
  const Eigen::VectorXd cr = project(solid_rotation({0.0, 0.0, 1.0}), basis).coeffs;
  bool pass = true;
  auto report = [&](const std::string& label, const Eigen::VectorXd& c, bool counts) {
    const double r = residual(c, ops).lpNorm<Eigen::Infinity>();
    const bool good = r < 1e-10;
    if (counts) pass = pass && good;
    out << label << ": " << fmt(r) << (counts ? (good ? " PASS" : " FAIL") : " (info)") << '\n';
  };
  out << "bc: " << to_string(cfg.bc) << " nu=" << cfg.nu() << " eps_p=" << cfg.eps_p << " N=" << cfg.degree << '\n';
  report("residual(u_P)", cp, true);
  // Rotations are neutral only for the strain-rate forms; the gradient
  // forms damp them, so the sweep is informational there.
  const bool neutral = uses_strain(cfg.bc);
  for (double w : steady_sweep()) report("residual(u_P + " + fmt(w) + " e_z x x)", cp + w * cr, neutral);
  return pass ? ok : invariant_failure;
}

int cmd_run(const std::string& config, const std::string& output_override, std::ostream& out) {
  ScenarioConfig cfg = load_config(config);
  if (!output_override.empty()) cfg.output_path = output_override;
  const Scenario sc = prepare(cfg);
  out << "dim: " << sc.basis.dim() << " steps: " << std::lround(cfg.t_end / cfg.dt) << '\n';
  try {
    const RunResult r = run(sc);
    const auto& first = r.series.front();
    const auto& last = r.series.back();
    out << "records: " << r.series.size() << '\n';
    out << "E_K: " << fmt(first.E_K) << " -> " << fmt(last.E_K) << '\n';
    out << "lambda: " << fmt(first.lambda) << " -> " << fmt(last.lambda) << '\n';
    out << "delta_EK: " << fmt(first.delta_EK) << " -> " << fmt(last.delta_EK) << '\n';
    if (!cfg.output_path.empty()) out << "csv: " << cfg.output_path << '\n';
  } catch (const BlowUpError& e) {
    out << "aborted: " << e.what() << '\n';
    if (!cfg.output_path.empty()) out << "partial csv: " << cfg.output_path << '\n';
    return blow_up;
  }
  return ok;
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out) {
  int passed = 0, failed = 0;
  auto check = [&](const std::string& name, bool good, const std::string& detail) {
    (good ? passed : failed)++;
    out << (good ? "PASS " : "FAIL ") << name << ' ' << detail << '\n';
  };

  const double beta = 0.5625, eps = 0.25;
  const std::pair<const char*, Domain> domains[] = {
      {"sphere", Domain::ellipsoid(1.0, 1.0, 1.0)},
      {"spheroid", Domain::spheroid(beta)},
      {"triaxial", Domain::ellipsoid(1.0, 0.9, 0.8)},
  };
  const Field up = poincare_field(beta, eps);
  const Field rot = solid_rotation({0.0, 0.0, 1.0});

  for (int N : opt.degrees) {
    for (const auto& [label, d] : domains) {
      const std::string tag = std::string(label) + ".N" + std::to_string(N);
      const Basis basis = build_basis(d, N);

      int bad = 0;
      for (const auto& f : basis.raw_fields) bad += !check_field(f, d).ok();
      check("basis.symbolic." + tag, bad == 0, std::to_string(bad) + " bad of " + std::to_string(basis.dim()));
      check("basis.gram." + tag, basis.gram_deviation() < 1e-12, fmt(basis.gram_deviation()));

      double curl = 0.0;
      for (const auto& f : curl_form_fields(d, N)) curl = std::max(curl, project(to_double(f), basis).residual);
      check("basis.curl_form_span." + tag, curl < 1e-10, fmt(curl));
      if (d.kind() != DomainKind::triaxial) {
        const double r = project(rot, basis).residual;
        check("basis.rotation_in_span." + tag, r < 1e-12, fmt(r));
      }

      const bool spheroid = d.kind() == DomainKind::spheroid_z;
      const BCSpec bc = spheroid ? BCSpec::with_data(BCForm::poincare_stress, up)
                                 : BCSpec::homogeneous(BCForm::stress_free);
      OperatorSet ops = assemble(basis, bc, 1.0 / 0.024, eps);
      if (opt.perturb_advection && ops.dim >= 3) ops.t(0, 1, 2) += 1e-6;

      const double cor = (ops.C + ops.C.transpose()).cwiseAbs().maxCoeff();
      check("operators.coriolis_antisymmetry." + tag, cor < 1e-13, fmt(cor));
      const double adv = antisymmetry_defect(ops);
      check("operators.advection_antisymmetry." + tag, adv < 1e-12, fmt(adv));
      const double hem = (ops.Hn + ops.Hs - ops.M).cwiseAbs().maxCoeff();
      check("operators.hemispheres." + tag, hem < 1e-14, fmt(hem));
      long double my = 0.0L;
      for (const auto& b : basis.fields) {
        const MyCheck m = lemma_My_check(b, d);
        my = std::max(my, std::abs(m.lhs - m.rhs));
      }
      check("operators.lemma_My." + tag, my < 1e-12L, fmt(static_cast<double>(my)));

      const KernelReport ks = viscous_kernel(ops, Stiffness::strain);
      const KernelReport kg = viscous_kernel(ops, Stiffness::gradient);
      const int expect = expected_strain_kernel(d.kind());
      check("spectral.kernel_strain." + tag, ks.kernel_dim == expect,
            std::to_string(ks.kernel_dim) + " expected " + std::to_string(expect));
      check("spectral.kernel_gradient." + tag, kg.kernel_dim == 0, std::to_string(kg.kernel_dim));
      if (ks.kernel_dim == expect && basis.dim() > expect) {
        const CoercivityResult k = coercivity_constant(ops, ks.kernel_fields, N);
        check("spectral.coercivity." + tag, k.K > 0.0, fmt(k.K));
      }

      if (spheroid) {
        const Projection pp = project(up, basis);
        check("basis.poincare_in_span." + tag, pp.residual < 1e-12, fmt(pp.residual));
        const Eigen::VectorXd cr = project(rot, basis).coeffs;
        double worst = residual(pp.coeffs, ops).lpNorm<Eigen::Infinity>();
        for (double w : steady_sweep()) {
          worst = std::max(worst, residual(pp.coeffs + w * cr, ops).lpNorm<Eigen::Infinity>());
        }
        check("operators.poincare_steady." + tag, worst < 1e-10, fmt(worst));
      }
    }
  }

  if (!opt.basis_file.empty()) {
    std::ifstream in(opt.basis_file);
    if (!in) throw ConfigError("cannot open basis file '" + opt.basis_file + "'");
    try {
      const BasisFile file = read_basis(in);
      const Domain d = file.domain();
      int bad_sol = 0, bad_tan = 0;
      for (const auto& f : file.fields) {
        const SymbolicCheck c = check_field(f, d);
        bad_sol += !c.solenoidal;
        bad_tan += !c.tangent;
      }
      const std::string n = std::to_string(file.fields.size());
      check("basis_file.solenoidal", bad_sol == 0, std::to_string(bad_sol) + " bad of " + n);
      check("basis_file.tangency", bad_tan == 0, std::to_string(bad_tan) + " bad of " + n);
    } catch (const std::runtime_error& e) {
      check("basis_file.parse", false, e.what());
    }
  }

  out << "summary: passed=" << passed << " failed=" << failed << '\n';
  return failed == 0 ? ok : invariant_failure;
}

}  // namespace precess::cli
