#include "precess/operators.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "precess/detail/moments.hpp"

namespace precess {

using detail::IntegralTable;
using detail::LMatrix;
using detail::LVector;
using detail::MonomialSet;

const char* to_string(BCForm form) {
  switch (form) {
    case BCForm::stress_free: return "stress_free";
    case BCForm::poincare_stress: return "poincare_stress";
    case BCForm::normal_gradient: return "normal_gradient";
    case BCForm::poincare_normal_gradient: return "poincare_normal_gradient";
  }
  return "?";
}

BCForm parse_bc_form(const std::string& name) {
  for (BCForm f : {BCForm::stress_free, BCForm::poincare_stress, BCForm::normal_gradient,
                   BCForm::poincare_normal_gradient}) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown boundary condition form '" + name + "'");
}

bool is_poincare(BCForm form) {
  return form == BCForm::poincare_stress || form == BCForm::poincare_normal_gradient;
}

bool uses_strain(BCForm form) {
  return form == BCForm::stress_free || form == BCForm::poincare_stress;
}

BCSpec BCSpec::homogeneous(BCForm form) { return BCSpec{form, std::nullopt}; }
BCSpec BCSpec::with_data(BCForm form, Field data) { return BCSpec{form, std::move(data)}; }

namespace {

constexpr int kLevi[3][3][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}},
};

void validate_data_field(const Field& u, const Domain& d) {
  const auto eps = strain_rate(u);
  for (const auto& row : eps) {
    for (const auto& e : row) {
      if (e.degree() > 0) throw std::invalid_argument("boundary data field must have constant strain rate");
    }
  }
  const SurfaceRule rule = surface_rule(d, 16, 32);
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& node : rule.nodes) {
    const auto& p = node.point;
    const auto v = u.evaluate(p[0], p[1], p[2]);
    const double g[3] = {p[0] / (d.a() * d.a()), p[1] / (d.b() * d.b()), p[2] / (d.c() * d.c())};
    const double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    worst = std::max(worst, std::abs(v[0] * g[0] + v[1] * g[1] + v[2] * g[2]) / gn);
    scale = std::max(scale, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
  }
  if (worst > 1e-10 * std::max(scale, 1.0)) {
    throw std::invalid_argument("boundary data field is not tangent to the domain boundary");
  }
}

LVector constant_moments(const IntegralTable& table, const MonomialSet& mono, const Exponent& shift) {
  LVector h(mono.size());
  for (int m = 0; m < mono.size(); ++m) {
    const Exponent& e = mono[m];
    h(m) = table(e[0] + shift[0], e[1] + shift[1], e[2] + shift[2]);
  }
  return h;
}

}  // namespace

Eigen::VectorXd OperatorSet::advect(const Eigen::VectorXd& c) const {
  if (c.size() != dim) throw std::invalid_argument("advect: dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    if (c(i) == 0.0) continue;
    for (int j = 0; j < dim; ++j) {
      const double cij = c(i) * c(j);
      if (cij == 0.0) continue;
      const double* row = &T[(static_cast<std::size_t>(i) * dim + j) * dim];
      for (int k = 0; k < dim; ++k) out(k) += cij * row[k];
    }
  }
  return out;
}

OperatorSet assemble(const Basis& basis, const BCSpec& bc, double nu, double eps_p,
                     const Vec3& precession_axis) {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  if (is_poincare(bc.form) != bc.data_field.has_value()) {
    throw std::invalid_argument(std::string("boundary form ") + to_string(bc.form) +
                                (is_poincare(bc.form) ? " needs a data field" : " takes no data field"));
  }
  if (bc.data_field) validate_data_field(*bc.data_field, basis.domain);

  const int N = basis.degree;
  const int n = basis.dim();
  const MonomialSet mono(N);
  const IntegralTable table(basis.domain, 3 * N + 1);
  const LMatrix h = detail::moment_matrix(table, mono, mono);
  const auto B = detail::coefficient_matrices(basis.fields, mono);

  std::array<LMatrix, 3> D;
  for (int a = 0; a < 3; ++a) D[static_cast<std::size_t>(a)] = detail::derivative_matrix(mono, a);
  // G[a][b]: coefficients of d b_{i,a} / d x_b.
  std::array<std::array<LMatrix, 3>, 3> G;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) G[a][b] = B[a] * D[b];
  }

  OperatorSet ops;
  ops.dim = n;
  ops.form = bc.form;
  ops.nu = nu;
  ops.eps_p = eps_p;
  ops.precession_axis = precession_axis;

  LMatrix M = LMatrix::Zero(n, n);
  for (const auto& b : B) M += b * h * b.transpose();

  LMatrix a_grad = LMatrix::Zero(n, n);
  LMatrix a_sym = LMatrix::Zero(n, n);
  std::array<std::array<LMatrix, 3>, 3> S;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      a_grad += G[a][b] * h * G[a][b].transpose();
      S[a][b] = 0.5L * (G[a][b] + G[b][a]);
    }
  }
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) a_sym += 2.0L * S[a][b] * h * S[a][b].transpose();
  }

  LMatrix C = LMatrix::Zero(n, n);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t g = 0; g < 3; ++g) {
        const int s = kLevi[a][b][g];
        if (s == 0 || precession_axis[b] == 0.0) continue;
        C += (static_cast<long double>(s) * precession_axis[b]) * B[a] * h * B[g].transpose();
      }
    }
  }

  for (std::size_t a = 0; a < 3; ++a) {
    LVector m = LVector::Zero(n);
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t g = 0; g < 3; ++g) {
        const int s = kLevi[a][b][g];
        if (s == 0) continue;
        Exponent shift{0, 0, 0};
        shift[b] = 1;
        m += static_cast<long double>(s) * B[g] * constant_moments(table, mono, shift);
      }
    }
    ops.mom[a] = m.cast<double>();
  }

  for (Hemisphere half : {Hemisphere::north, Hemisphere::south}) {
    const IntegralTable ht(basis.domain, 2 * N, half);
    const LMatrix hh = detail::moment_matrix(ht, mono, mono);
    LMatrix g = LMatrix::Zero(n, n);
    for (const auto& b : B) g += b * hh * b.transpose();
    (half == Hemisphere::north ? ops.Hn : ops.Hs) = g.cast<double>();
  }

  // Advection: T(i,j,k) = sum_{a,b} int b_{i,b} d_b b_{j,a} b_{k,a}.
  // With P_i[b][a](n, k) = int x^n b_{i,b} b_{k,a}, T_i = sum G[a][b] P_i[b][a].
  {
    const MonomialSet wide(2 * N);
    const LMatrix hw = detail::moment_matrix(table, wide, mono);
    std::array<LMatrix, 3> Q;  // Q[a](w, k) = int x^w b_{k,a}
    for (std::size_t a = 0; a < 3; ++a) Q[a] = hw * B[a].transpose();
    ops.T.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    LMatrix P(mono.size(), n);
    for (int i = 0; i < n; ++i) {
      LMatrix ti = LMatrix::Zero(n, n);
      for (std::size_t b = 0; b < 3; ++b) {
        const auto& bib = basis.fields[static_cast<std::size_t>(i)][static_cast<int>(b)];
        if (bib.is_zero()) continue;
        for (std::size_t a = 0; a < 3; ++a) {
          P.setZero();
          for (const auto& [e, coef] : bib.terms()) {
            for (int r = 0; r < mono.size(); ++r) {
              const Exponent& x = mono[r];
              const int w = wide.index({x[0] + e[0], x[1] + e[1], x[2] + e[2]});
              P.row(r) += coef * Q[a].row(w);
            }
          }
          ti += G[a][b] * P;
        }
      }
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) ops.t(i, j, k) = static_cast<double>(ti(j, k));
      }
    }
  }

  LVector f = LVector::Zero(n);
  if (bc.data_field) {
    const Field& u = *bc.data_field;
    const LVector h0 = constant_moments(table, mono, {0, 0, 0});
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        const long double grad = u[static_cast<int>(a)].derivative(static_cast<int>(b)).coefficient({0, 0, 0});
        const long double grad_t = u[static_cast<int>(b)].derivative(static_cast<int>(a)).coefficient({0, 0, 0});
        if (uses_strain(bc.form)) {
          const long double strain = 0.5L * (grad + grad_t);
          if (strain != 0.0L) f += (2.0L * nu * strain) * (S[a][b] * h0);
        } else if (grad != 0.0L) {
          f += (static_cast<long double>(nu) * grad) * (G[a][b] * h0);
        }
      }
    }
  }

  ops.M = M.cast<double>();
  ops.A_sym = a_sym.cast<double>();
  ops.A_grad = a_grad.cast<double>();
  ops.C = C.cast<double>();
  ops.V = (static_cast<long double>(nu) * (uses_strain(bc.form) ? a_sym : a_grad)).cast<double>();
  ops.F = f.cast<double>();
  return ops;
}

Eigen::VectorXd residual(const Eigen::VectorXd& c, const OperatorSet& ops) {
  if (c.size() != ops.dim) throw std::invalid_argument("residual: dimension mismatch");
  return ops.advect(c) + ops.V * c + 2.0 * ops.eps_p * (ops.C * c) - ops.F;
}

Vec3 angular_momentum(const Eigen::VectorXd& c, const OperatorSet& ops) {
  if (c.size() != ops.dim) throw std::invalid_argument("angular_momentum: dimension mismatch");
  return {ops.mom[0].dot(c), ops.mom[1].dot(c), ops.mom[2].dot(c)};
}

MyCheck lemma_My_check(const RealField& v, const Domain& d) {
  const IntegralTable table(d, std::max(v.degree(), 0) + 1);
  auto moment = [&](const Polynomial<long double>& p, int axis) {
    long double s = 0.0L;
    for (const auto& [e, c] : p.terms()) {
      Exponent f = e;
      ++f[static_cast<std::size_t>(axis)];
      s += c * table(f);
    }
    return s;
  };
  MyCheck out;
  // e_y . (x x v) = z v_x - x v_z;  (e_z x x) . (e_x x v) = -x v_z.
  out.lhs = moment(v[0], 2) - moment(v[2], 0);
  out.rhs = -2.0L * moment(v[2], 0);
  return out;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

void dump_operators(std::ostream& out, const OperatorSet& ops) {
  const std::pair<const char*, const Eigen::MatrixXd*> mats[] = {
      {"M", &ops.M}, {"A_sym", &ops.A_sym}, {"A_grad", &ops.A_grad}, {"C", &ops.C},
      {"V", &ops.V}, {"Hn", &ops.Hn},       {"Hs", &ops.Hs}};
  for (const auto& [name, m] : mats) {
    out << "# " << name << ' ' << m->rows() << ' ' << m->cols() << '\n';
    write_matrix(out, *m);
  }
  out << "# F " << ops.dim << " 1\n";
  write_matrix(out, ops.F);
  for (int a = 0; a < 3; ++a) {
    out << "# mom_" << "xyz"[a] << ' ' << ops.dim << " 1\n";
    write_matrix(out, ops.mom[static_cast<std::size_t>(a)]);
  }
}

}  // namespace precess
