#include "precess/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "precess/detail/moments.hpp"

namespace precess {

const char* to_string(ConstraintMode mode) {
  switch (mode) {
    case ConstraintMode::rot_momentum: return "rot_momentum";
    case ConstraintMode::orth_poincare: return "orth_poincare";
    case ConstraintMode::total_momentum: return "total_momentum";
  }
  return "?";
}

ConstraintMode parse_constraint_mode(const std::string& name) {
  for (ConstraintMode m :
       {ConstraintMode::rot_momentum, ConstraintMode::orth_poincare, ConstraintMode::total_momentum}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown constraint mode '" + name + "'");
}

DiagnosticsContext DiagnosticsContext::make(const Basis& basis, const std::optional<Field>& reference,
                                            int n_theta, int n_phi) {
  DiagnosticsContext ctx;
  const Field rot = solid_rotation({0.0, 0.0, 1.0});
  const Projection pr = project(rot, basis);
  ctx.rotation = pr.coeffs;
  // |R|^2 = int x^2 + y^2, exactly.
  const Domain& d = basis.domain;
  ctx.rotation_norm2 = monomial_integral(2, 0, 0, d) + monomial_integral(0, 2, 0, d);
  ctx.rotation_defect2 = pr.residual * pr.residual;

  const int n = basis.dim();
  ctx.reference = Eigen::VectorXd::Zero(n);
  if (reference) ctx.reference = project(*reference, basis).coeffs;

  ctx.n_theta = n_theta;
  ctx.n_phi = n_phi;
  const SurfaceRule rule = surface_rule(d, n_theta, n_phi);
  const detail::MonomialSet mono(basis.degree);
  const auto B = detail::coefficient_matrices(basis.fields, mono);
  std::array<detail::LVector, 3> acc_rot, acc_ref;
  for (std::size_t a = 0; a < 3; ++a) {
    acc_rot[a] = detail::LVector::Zero(mono.size());
    acc_ref[a] = detail::LVector::Zero(mono.size());
  }
  detail::LVector phi(mono.size());
  long double ref_rot = 0.0L, ref_ref = 0.0L;
  for (const auto& node : rule.nodes) {
    const auto& p = node.point;
    for (int m = 0; m < mono.size(); ++m) {
      const Exponent& e = mono[m];
      phi(m) = static_cast<long double>(std::pow(p[0], e[0]) * std::pow(p[1], e[1]) * std::pow(p[2], e[2]));
    }
    const auto r = rot.evaluate(p[0], p[1], p[2]);
    for (std::size_t a = 0; a < 3; ++a) acc_rot[a] += static_cast<long double>(node.weight * r[a]) * phi;
    if (reference) {
      const auto u = reference->evaluate(p[0], p[1], p[2]);
      for (std::size_t a = 0; a < 3; ++a) acc_ref[a] += static_cast<long double>(node.weight * u[a]) * phi;
      ref_rot += node.weight * (u[0] * r[0] + u[1] * r[1] + u[2] * r[2]);
      ref_ref += node.weight * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    }
  }
  detail::LVector g_rot = detail::LVector::Zero(n), g_ref = detail::LVector::Zero(n);
  for (std::size_t a = 0; a < 3; ++a) {
    g_rot += B[a] * acc_rot[a];
    g_ref += B[a] * acc_ref[a];
  }
  ctx.g_rot = g_rot.cast<double>();
  ctx.g_ref = g_ref.cast<double>();
  ctx.ref_rot = static_cast<double>(ref_rot);
  ctx.ref_ref = static_cast<double>(ref_ref);
  return ctx;
}

DiagnosticsRecord record(double t, const Eigen::VectorXd& c, const OperatorSet& ops,
                         const DiagnosticsContext& ctx) {
  if (c.size() != ops.dim) throw std::invalid_argument("record: dimension mismatch");
  DiagnosticsRecord r;
  r.t = t;
  const Eigen::VectorXd mc = ops.M * c;
  r.E_K = 0.5 * c.dot(mc);
  r.dissipation = -c.dot(ops.V * c) + c.dot(ops.F);
  const Eigen::VectorXd d = c - ctx.reference;
  r.delta_EK = 0.5 * d.dot(ops.M * d);
  r.dE_Kn = 0.5 * d.dot(ops.Hn * d);
  r.dE_Ks = 0.5 * d.dot(ops.Hs * d);
  const Vec3 m = angular_momentum(c, ops);
  r.M_x = m[0];
  r.M_y = m[1];
  r.M_z = m[2];
  // (u, e_z x x) = M_z exactly, since (x x u)_z = (e_z x x) . u.
  r.lambda = r.M_z / ctx.rotation_norm2;
  // u - lambda R splits M-orthogonally into the in-span part and the part
  // of R outside the span.
  const Eigen::VectorXd e = c - r.lambda * ctx.rotation;
  r.E_perp = 0.5 * e.dot(ops.M * e) + 0.5 * r.lambda * r.lambda * ctx.rotation_defect2;
  r.c_tot = ctx.g_rot.dot(c);
  r.c_rot = r.c_tot - ctx.ref_rot;
  r.c_orth = ctx.g_ref.dot(c) - ctx.ref_ref;
  return r;
}

void fill_time_derivatives(TimeSeries& s) {
  const std::size_t n = s.size();
  if (n < 2) {
    for (auto& r : s) r.dEK_dt = 0.0;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    s[i].dEK_dt = (s[hi].E_K - s[lo].E_K) / (s[hi].t - s[lo].t);
  }
}

std::vector<double> momentum_balance_residual(const TimeSeries& s, double eps_p) {
  if (s.size() < 3) throw std::invalid_argument("momentum balance needs at least 3 records");
  const double h = s[1].t - s[0].t;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (std::abs((s[i].t - s[i - 1].t) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw std::invalid_argument("momentum balance needs uniformly spaced records");
    }
  }
  std::vector<double> out;
  out.reserve(s.size() - 2);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    out.push_back((s[i + 1].M_z - s[i - 1].M_z) / (s[i + 1].t - s[i - 1].t) + eps_p * s[i].M_y);
  }
  return out;
}

double constraint_value(const Eigen::VectorXd& c, const DiagnosticsContext& ctx, ConstraintMode mode) {
  switch (mode) {
    case ConstraintMode::rot_momentum: return ctx.g_rot.dot(c) - ctx.ref_rot;
    case ConstraintMode::orth_poincare: return ctx.g_ref.dot(c) - ctx.ref_ref;
    case ConstraintMode::total_momentum: return ctx.g_rot.dot(c);
  }
  return 0.0;
}

Eigen::VectorXd constraint_projection(const Eigen::VectorXd& c, const DiagnosticsContext& ctx,
                                      ConstraintMode mode) {
  const Eigen::VectorXd& g = mode == ConstraintMode::orth_poincare ? ctx.g_ref : ctx.g_rot;
  const double seen = g.dot(ctx.rotation);
  const double scale = g.norm() * ctx.rotation.norm();
  if (!(std::abs(seen) > 1e-12 * std::max(scale, 1e-300))) {
    throw std::invalid_argument(std::string("constraint ") + to_string(mode) +
                                " is degenerate on the rotation direction");
  }
  const double alpha = constraint_value(c, ctx, mode) / seen;
  return c - alpha * ctx.rotation;
}

const char* csv_header() {
  return "t,E_K,dEK_dt,dissipation,delta_EK,lambda,E_perp,M_x,M_y,M_z,dE_Kn,dE_Ks,c_rot,c_orth,c_tot";
}

void write_csv_row(std::ostream& out, const DiagnosticsRecord& r) {
  const double v[] = {r.t,   r.E_K, r.dEK_dt, r.dissipation, r.delta_EK, r.lambda, r.E_perp, r.M_x,
                      r.M_y, r.M_z, r.dE_Kn,  r.dE_Ks,       r.c_rot,    r.c_orth, r.c_tot};
  char buf[32];
  bool first = true;
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << (first ? "" : ",") << buf;
    first = false;
  }
  out << '\n';
}

void write_csv(std::ostream& out, const TimeSeries& series) {
  out << csv_header() << '\n';
  for (const auto& r : series) write_csv_row(out, r);
}

}  // namespace precess
