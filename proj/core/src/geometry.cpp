#include "precess/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace precess {

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::sphere: return "sphere";
    case DomainKind::spheroid_z: return "spheroid_z";
    case DomainKind::triaxial: return "triaxial";
  }
  return "unknown";
}

namespace {

constexpr double kAxisTolerance = 1e-12;

bool axes_equal(double u, double v) {
  return std::abs(u - v) <= kAxisTolerance * std::max(std::abs(u), std::abs(v));
}

DomainKind classify(double a, double b, double c) {
  const bool ab = axes_equal(a, b);
  const bool bc = axes_equal(b, c);
  if (ab && bc) return DomainKind::sphere;
  if (ab) return DomainKind::spheroid_z;
  return DomainKind::triaxial;
}

Rational power(const Rational& base, int n) {
  Rational out(1);
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

mpz_class factorial(int n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

// Gamma(n + 1/2) / sqrt(pi) = (2n)! / (4^n n!)
Rational half_gamma(int n) {
  mpz_class four_n;
  mpz_ui_pow_ui(four_n.get_mpz_t(), 4, static_cast<unsigned long>(n));
  Rational out(factorial(2 * n), four_n * factorial(n));
  out.canonicalize();
  return out;
}

}  // namespace

Domain::Domain(double a, double b, double c, Rational a2, Rational b2, Rational c2)
    : a_(a), b_(b), c_(c), a2_(std::move(a2)), b2_(std::move(b2)), c2_(std::move(c2)),
      kind_(classify(a, b, c)) {}

Domain Domain::ellipsoid(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0) || !std::isfinite(a) || !std::isfinite(b) ||
      !std::isfinite(c)) {
    throw std::invalid_argument("ellipsoid semi-axes must be positive and finite");
  }
  const Rational ra = rationalize(a), rb = rationalize(b), rc = rationalize(c);
  return Domain(a, b, c, ra * ra, rb * rb, rc * rc);
}

Domain Domain::spheroid(double beta) {
  if (!(beta > -1.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("spheroid requires beta > -1");
  }
  const Rational c2 = 1 / (1 + rationalize(beta));
  return Domain(1.0, 1.0, 1.0 / std::sqrt(1.0 + beta), Rational(1), Rational(1), c2);
}

Domain Domain::from_squared_axes(const Rational& a2, const Rational& b2, const Rational& c2) {
  if (sgn(a2) <= 0 || sgn(b2) <= 0 || sgn(c2) <= 0) {
    throw std::invalid_argument("squared semi-axes must be positive");
  }
  return Domain(std::sqrt(a2.get_d()), std::sqrt(b2.get_d()), std::sqrt(c2.get_d()), a2, b2, c2);
}

std::optional<double> Domain::beta() const {
  if (kind_ != DomainKind::spheroid_z) return std::nullopt;
  return Rational(a2_ / c2_ - 1).get_d();
}

Polynomial<Rational> Domain::chi() const {
  Polynomial<Rational> out = Polynomial<Rational>::constant(Rational(1));
  out.add_term({2, 0, 0}, Rational(-1 / a2_));
  out.add_term({0, 2, 0}, Rational(-1 / b2_));
  out.add_term({0, 0, 2}, Rational(-1 / c2_));
  return out;
}

double Domain::chi_at(const Vec3& p) const {
  return 1.0 - p[0] * p[0] / (a_ * a_) - p[1] * p[1] / (b_ * b_) - p[2] * p[2] / (c_ * c_);
}

long double Domain::integral_unit() const {
  return static_cast<long double>(a_) * static_cast<long double>(b_) *
         static_cast<long double>(c_) * std::numbers::pi_v<long double>;
}

long double half_integral_unit(int r, const Domain& d) {
  return d.integral_unit() * (r % 2 ? static_cast<long double>(d.c()) : 1.0L);
}

Rational monomial_integral_exact(int p, int q, int r, const Domain& d) {
  if (p < 0 || q < 0 || r < 0) throw std::invalid_argument("negative exponent");
  if (p % 2 || q % 2 || r % 2) return Rational(0);
  const int i = p / 2, j = q / 2, k = r / 2;
  Rational out = power(d.a2(), i) * power(d.b2(), j) * power(d.c2(), k);
  out *= half_gamma(i) * half_gamma(j) * half_gamma(k) / half_gamma(i + j + k + 2);
  return out;
}

double monomial_integral(int p, int q, int r, const Domain& d) {
  return static_cast<double>(to_long_double(monomial_integral_exact(p, q, r, d)) *
                             d.integral_unit());
}

Rational half_monomial_integral_exact(int p, int q, int r, const Domain& d, Hemisphere h) {
  if (p < 0 || q < 0 || r < 0) throw std::invalid_argument("negative exponent");
  if (p % 2 || q % 2) return Rational(0);
  if (r % 2 == 0) return monomial_integral_exact(p, q, r, d) / 2;
  const int i = p / 2, j = q / 2, k = (r - 1) / 2;
  // Unit-ball half integral: pi g(i) g(j) k! / ((p+q+r+3) (i+j+k+1)!).
  Rational out = half_gamma(i) * half_gamma(j) * Rational(factorial(k));
  out /= Rational(mpz_class(p + q + r + 3) * factorial(i + j + k + 1));
  out *= power(d.a2(), i) * power(d.b2(), j) * power(d.c2(), k);
  return h == Hemisphere::north ? out : Rational(-out);
}

double half_monomial_integral(int p, int q, int r, const Domain& d, Hemisphere h) {
  return static_cast<double>(to_long_double(half_monomial_integral_exact(p, q, r, d, h)) *
                             half_integral_unit(r, d));
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0L;
      // P_n(x) = p1, P_{n-1}(x) = p0
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    nodes[lo] = static_cast<double>(-x);
    nodes[hi] = static_cast<double>(x);
    weights[lo] = weights[hi] = static_cast<double>(w);
  }
}

SurfaceRule surface_rule(const Domain& d, int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 4) {
    throw std::invalid_argument("surface_rule requires n_theta >= 2 and n_phi >= 4 (got " +
                                std::to_string(n_theta) + ", " + std::to_string(n_phi) + ")");
  }
  std::vector<double> gl_x, gl_w;
  gauss_legendre(n_theta, gl_x, gl_w);

  const double a = d.a(), b = d.b(), c = d.c();
  const double pi = std::numbers::pi;
  SurfaceRule rule;
  rule.n_theta = n_theta;
  rule.n_phi = n_phi;
  rule.nodes.reserve(static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi));
  const double dphi = 2.0 * pi / n_phi;
  for (int it = 0; it < n_theta; ++it) {
    const double theta = 0.5 * pi * (gl_x[static_cast<std::size_t>(it)] + 1.0);
    const double wt = 0.5 * pi * gl_w[static_cast<std::size_t>(it)];
    const double st = std::sin(theta), ct = std::cos(theta);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = dphi * ip;
      const double sp = std::sin(phi), cp = std::cos(phi);
      // |X_theta x X_phi|
      const double nx = b * c * st * st * cp;
      const double ny = a * c * st * st * sp;
      const double nz = a * b * st * ct;
      const double area = std::sqrt(nx * nx + ny * ny + nz * nz);
      rule.nodes.push_back({{a * st * cp, b * st * sp, c * ct}, wt * dphi * area});
    }
  }
  return rule;
}

double surface_integral(const std::function<double(const Vec3&)>& f, const SurfaceRule& rule) {
  long double sum = 0.0L;
  for (const auto& node : rule.nodes) sum += static_cast<long double>(node.weight) * f(node.point);
  return static_cast<double>(sum);
}

}  // namespace precess
