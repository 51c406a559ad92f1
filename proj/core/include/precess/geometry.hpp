#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "precess/polynomial.hpp"
#include "precess/rational.hpp"
#include "precess/vector_field.hpp"

namespace precess {

enum class DomainKind { sphere, spheroid_z, triaxial };

const char* to_string(DomainKind kind);

/// Ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 < 1 centred at the origin.
///
/// The squared semi-axes are also held as exact rationals; every volume
/// integral is (abc*pi) times a rational function of them, which is what makes
/// exact assembly possible.
class Domain {
 public:
  /// Throws std::invalid_argument unless a, b, c > 0.
  static Domain ellipsoid(double a, double b, double c);
  /// x^2 + y^2 + (1+beta) z^2 = 1, i.e. a = b = 1, c = (1+beta)^(-1/2).
  /// Throws unless beta > -1.
  static Domain spheroid(double beta);
  /// Exact squared semi-axes; used when re-importing a basis file.
  static Domain from_squared_axes(const Rational& a2, const Rational& b2, const Rational& c2);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  const Rational& a2() const { return a2_; }
  const Rational& b2() const { return b2_; }
  const Rational& c2() const { return c2_; }
  DomainKind kind() const { return kind_; }

  /// (1+beta) = a^2/c^2 for a z-spheroid; nullopt otherwise.
  std::optional<double> beta() const;

  /// chi = 1 - x^2/a^2 - y^2/b^2 - z^2/c^2, exact.
  Polynomial<Rational> chi() const;
  double chi_at(const Vec3& p) const;

  /// a*b*c*pi: every exact integral below is returned in these units.
  long double integral_unit() const;

 private:
  Domain(double a, double b, double c, Rational a2, Rational b2, Rational c2);

  double a_, b_, c_;
  Rational a2_, b2_, c2_;
  DomainKind kind_;
};

enum class Hemisphere { north, south };

/// Exact value of the integral of x^p y^q z^r over the domain divided by
/// Domain::integral_unit().
Rational monomial_integral_exact(int p, int q, int r, const Domain& d);
double monomial_integral(int p, int q, int r, const Domain& d);

/// Same for the half z > 0 (north) or z < 0 (south). For odd r the value
/// carries one factor of c that is not rational in c^2, so the exact part is
/// returned in units of half_integral_unit(r, d) = abc*pi*c.
Rational half_monomial_integral_exact(int p, int q, int r, const Domain& d, Hemisphere h);
long double half_integral_unit(int r, const Domain& d);
double half_monomial_integral(int p, int q, int r, const Domain& d, Hemisphere h);

struct SurfaceNode {
  Vec3 point;
  double weight;  // area measure
};

struct SurfaceRule {
  std::vector<SurfaceNode> nodes;
  int n_theta = 0;
  int n_phi = 0;
};

/// Gauss-Legendre in the polar angle times the periodic trapezoid rule in
/// azimuth on (a sin t cos f, b sin t sin f, c cos t), weighted by the exact
/// area element. Requires n_theta >= 2 and n_phi >= 4.
SurfaceRule surface_rule(const Domain& d, int n_theta, int n_phi);

double surface_integral(const std::function<double(const Vec3&)>& f, const SurfaceRule& rule);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace precess
