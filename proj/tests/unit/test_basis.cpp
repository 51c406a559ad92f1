#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

#include "precess/basis.hpp"

using namespace precess;
using P = Polynomial<Rational>;

namespace {

const Domain kSphere = Domain::ellipsoid(1, 1, 1);
const Domain kSpheroid = Domain::spheroid(0.5625);
const Domain kTriaxial = Domain::ellipsoid(1, 0.9, 0.8);

Rational integrate(const P& p, const Domain& d) {
  Rational s = 0;
  for (const auto& [e, c] : p.terms()) s += c * monomial_integral_exact(e[0], e[1], e[2], d);
  return s;
}

Rational inner(const RationalField& u, const RationalField& v, const Domain& d) {
  return integrate(dot(u, v), d);
}

RationalField rational_rotation(int axis) {
  std::array<Rational, 3> e{0, 0, 0};
  e[static_cast<std::size_t>(axis)] = 1;
  return cross(constant_field<Rational>(e), position_field<Rational>());
}

Field to_double(const RationalField& f) {
  return f.map<double>([](const Rational& q) { return q.get_d(); });
}

}  // namespace

TEST_CASE("basis dimensions") {
  // Regression values from the exact nullspace; they follow N(N+1)(2N+7)/6.
  const int expected[] = {3, 11, 26, 50, 85};
  for (const Domain& d : {kSphere, kSpheroid, kTriaxial}) {
    int prev = 0;
    for (int N = 1; N <= 5; ++N) {
      const auto raw = tangent_solenoidal_fields(d, N);
      CAPTURE(N);
      CHECK(static_cast<int>(raw.size()) == expected[N - 1]);
      CHECK(static_cast<int>(raw.size()) >= prev);
      prev = static_cast<int>(raw.size());
    }
  }
  CHECK_THROWS_AS(build_basis(kSpheroid, 0), std::invalid_argument);
}

TEST_CASE("raw fields are nested by degree") {
  const auto r3 = tangent_solenoidal_fields(kTriaxial, 3);
  const auto r2 = tangent_solenoidal_fields(kTriaxial, 2);
  for (std::size_t i = 0; i < r3.size(); ++i) {
    CAPTURE(i);
    CHECK((r3[i].degree() <= 2) == (i < r2.size()));
  }
  for (std::size_t i = 0; i < r2.size(); ++i) CHECK(r3[i] == r2[i]);
}

TEST_CASE("linear fields on the spheroid are S^-1 W x") {
  const Basis b = build_basis(kSpheroid, 1);
  REQUIRE(b.dim() == 3);
  CHECK(b.raw_fields[0] == rational_rotation(2));
  // S^-1 (e x x) with S = diag(1, 1, 1 + beta).
  const Rational inv_s = 1 / (1 + Rational(9, 16));
  for (int axis = 0; axis < 3; ++axis) {
    RationalField f = rational_rotation(axis);
    f[2] *= inv_s;
    CHECK(check_field(f, kSpheroid).ok());
    CHECK(project(to_double(f), b).residual < 1e-12);
  }
  // Plain rotations about x and y are not tangent here.
  CHECK(!check_field(rational_rotation(0), kSpheroid).tangent);
}

TEST_CASE("linear fields on the sphere are the three rotations") {
  const Basis b = build_basis(kSphere, 1);
  REQUIRE(b.dim() == 3);
  for (int axis = 0; axis < 3; ++axis) {
    CHECK(check_field(rational_rotation(axis), kSphere).ok());
    CHECK(project(to_double(rational_rotation(axis)), b).residual < 1e-12);
  }
  CHECK(build_basis(kTriaxial, 1).dim() == 3);
}

TEST_CASE("every basis field is solenoidal and tangent as a polynomial identity") {
  for (const Domain& d : {kSphere, kSpheroid, kTriaxial}) {
    for (const auto& f : tangent_solenoidal_fields(d, 4)) {
      const SymbolicCheck c = check_field(f, d);
      CHECK(c.solenoidal);
      CHECK(c.tangent);
    }
  }
}

TEST_CASE("check_field rejects broken fields") {
  RationalField f = tangent_solenoidal_fields(kTriaxial, 2).back();
  CHECK(check_field(f, kTriaxial).ok());
  RationalField g = f;
  g[0].add_term({0, 0, 0}, Rational(1, 1000));
  CHECK(g.degree() == f.degree());
  CHECK(check_field(g, kTriaxial).solenoidal);
  CHECK(!check_field(g, kTriaxial).tangent);
  RationalField h = f;
  h[0].add_term({1, 0, 0}, Rational(1));
  CHECK(!check_field(h, kTriaxial).solenoidal);
}

TEST_CASE("orthonormalised basis has identity Gram and lower triangular transform") {
  for (const Domain& d : {kSphere, kSpheroid, kTriaxial}) {
    const Basis b = build_basis(d, 4);
    CHECK(b.gram_deviation() < 1e-12);
    CHECK(b.raw_gram_condition >= 1.0);
    for (int i = 0; i < b.dim(); ++i)
      for (int j = i + 1; j < b.dim(); ++j) CHECK(b.transform(i, j) == 0.0L);
  }
}

TEST_CASE("curl-form fields: hand examples") {
  const Rational beta(9, 16), eps(1, 4);
  const P x = P::coordinate(0), y = P::coordinate(1), z = P::coordinate(2);
  CHECK(curl_form_field(kSpheroid, z) == Rational(2) * rational_rotation(2));
  CHECK(curl_form_field(kSpheroid, P::constant(7)).is_zero());

  const RationalField up = curl_form_field(kSpheroid, (eps / beta) * x + Rational(1, 2) * z);
  const Field ref = poincare_field(0.5625, 0.25);
  for (int c = 0; c < 3; ++c) {
    for (const auto& [e, coef] : up[c].terms()) {
      CHECK(coef.get_d() == doctest::Approx(ref[c].coefficient(e)).epsilon(1e-15));
    }
    CHECK(up[c].size() == ref[c].size());
  }
}

TEST_CASE("curl-form fields lie in the span of the basis") {
  for (const Domain& d : {kSphere, kSpheroid, kTriaxial}) {
    for (int N = 1; N <= 4; ++N) {
      const Basis b = build_basis(d, N);
      for (const auto& f : curl_form_fields(d, N)) {
        CHECK(check_field(f, d).ok());
        CHECK(f.degree() <= N);
        CHECK(project(to_double(f), b).residual < 1e-10);
      }
    }
  }
}

TEST_CASE("Poincare field") {
  const Field up = poincare_field(0.5625, 0.25);
  CHECK(up[0].coefficient({0, 1, 0}) == -1.0);
  CHECK(up[1].coefficient({1, 0, 0}) == 1.0);
  CHECK(up[1].coefficient({0, 0, 1}) == doctest::Approx(-1.3888888888888888).epsilon(1e-15));
  CHECK(up[2].coefficient({0, 1, 0}) == doctest::Approx(0.8888888888888888).epsilon(1e-15));
  CHECK(up[0].size() == 1);
  CHECK(up[2].size() == 1);

  const Field r = poincare_field(-0.3, 0.0);
  CHECK(r[2].is_zero());
  CHECK(r[1].size() == 1);
  CHECK_THROWS_AS(poincare_field(0.0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(poincare_field(-1.0, 0.25), std::invalid_argument);

  // Exact tangency on the matching spheroid.
  const RationalField upq = up.map<Rational>([](double v) { return rationalize(v); });
  CHECK(check_field(upq, kSpheroid).ok());
}

TEST_CASE("maximum speed of the Poincare flow") {
  // |u_P|^2 is a quadratic form x.Q x, so its maximum over x.S x <= 1 is the
  // top generalised eigenvalue of (Q, S). The boundary sampling below is an
  // independent check of that value.
  const double beta = 0.5625, eps = 0.25, k = 2 * eps / beta, s = 1 + beta;
  Eigen::Matrix3d B;
  B << 0, -1, 0, 1, 0, -k * s, 0, k, 0;
  const Eigen::Matrix3d Q = B.transpose() * B;
  Eigen::Matrix3d S = Eigen::Vector3d(1, 1, s).asDiagonal();
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> es(Q, S);
  const double top = std::sqrt(es.eigenvalues().maxCoeff());

  const Field up = poincare_field(beta, eps);
  double sampled = 0.0;
  const int nt = 800, np = 1600;
  for (int i = 0; i <= nt; ++i) {
    const double th = M_PI * i / nt;
    for (int j = 0; j < np; ++j) {
      const double ph = 2 * M_PI * j / np;
      const auto u = up.evaluate(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                 std::cos(th) * kSpheroid.c());
      sampled = std::max(sampled, std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]));
    }
  }
  CHECK(top == doctest::Approx(1.4948471163).epsilon(1e-9));
  CHECK(sampled <= top * (1 + 1e-12));
  CHECK(sampled == doctest::Approx(top).epsilon(1e-5));
  // The quoted value 1.25 equals sqrt(1 + beta), not this maximum.
  CHECK(std::sqrt(s) == doctest::Approx(1.25));
  CHECK(top > 1.25 + 0.2);
}

TEST_CASE("solid rotations") {
  const Field r = solid_rotation({0, 0, 1});
  CHECK(r[0].coefficient({0, 1, 0}) == -1.0);
  CHECK(r[1].coefficient({1, 0, 0}) == 1.0);
  CHECK(r[2].is_zero());
  const Field rx = solid_rotation({1, 0, 0});
  CHECK(rx[0].is_zero());
  CHECK(rx[1].coefficient({0, 0, 1}) == -1.0);
  CHECK(rx[2].coefficient({0, 1, 0}) == 1.0);

  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Vec3 a{g(rng), g(rng), g(rng)};
    const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    for (double& v : a) v /= n;
    for (const auto& row : strain_rate(solid_rotation(a)))
      for (const auto& e : row) CHECK(e.is_zero());
  }
  CHECK_THROWS_AS(solid_rotation({1, 1, 0}), std::invalid_argument);
}

TEST_CASE("projection of members of the space is exact") {
  const Field up = poincare_field(0.5625, 0.25);
  const Field rot = solid_rotation({0, 0, 1});
  for (int N = 1; N <= 4; ++N) {
    const Basis b = build_basis(kSpheroid, N);
    CHECK(project(up, b).residual < 1e-12);
    const Projection pr = project(rot, b);
    CHECK(pr.residual < 1e-12);
    // lambda = (c, c_R) / |R|^2 = 1 for R itself.
    CHECK(pr.coeffs.squaredNorm() ==
          doctest::Approx(8 * M_PI * 0.8 / 15).epsilon(1e-12));
    const RealField back = reconstruct(pr.coeffs, b);
    for (int c = 0; c < 3; ++c)
      for (const auto& [e, v] : back[c].terms())
        CHECK(std::abs(static_cast<double>(v) - rot[c].coefficient(e)) < 1e-12);
  }
}

namespace {

// Squared projection residual from the normal equations on the raw fields.
double brute_force_residual2(const RationalField& v, const Domain& d, int N) {
  const auto raw = tangent_solenoidal_fields(d, N);
  const auto n = static_cast<Eigen::Index>(raw.size());
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> G(n, n);
  Eigen::Matrix<long double, Eigen::Dynamic, 1> rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i) = to_long_double(inner(raw[i], v, d));
    for (Eigen::Index j = 0; j < n; ++j) G(i, j) = to_long_double(inner(raw[i], raw[j], d));
  }
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> sol = G.ldlt().solve(rhs);
  return static_cast<double>((to_long_double(inner(v, v, d)) - rhs.dot(sol)) * d.integral_unit());
}

}  // namespace

TEST_CASE("projection residuals match a brute-force Gram solve") {
  const int N = 3;
  const P y = P::coordinate(1), z = P::coordinate(2);
  for (const Domain& d : {kSpheroid, kTriaxial}) {
    const Basis b = build_basis(d, N);
    const RationalField ex = constant_field<Rational>({1, 0, 0});
    const double ex2 = brute_force_residual2(ex, d, N);
    const Projection p = project(to_double(ex), b);
    CHECK(ex2 > 0.0);
    CHECK(p.residual * p.residual == doctest::Approx(ex2).epsilon(1e-10));
    // e_x = grad x, so it is orthogonal to the whole space.
    CHECK(p.coeffs.lpNorm<Eigen::Infinity>() < 1e-13);
    CHECK(ex2 == doctest::Approx(static_cast<double>(to_long_double(inner(ex, ex, d)) *
                                                     d.integral_unit()))
                     .epsilon(1e-14));

    const RationalField w{{y * y, z, P()}};
    const double w2 = brute_force_residual2(w, d, N);
    const Projection pw = project(to_double(w), b);
    CHECK(pw.coeffs.norm() > 0.1);
    CHECK(pw.residual * pw.residual == doctest::Approx(w2).epsilon(1e-9));
  }
}

TEST_CASE("basis text round trip is exact") {
  for (const Domain& d : {kSpheroid, kTriaxial}) {
    const Basis b = build_basis(d, 3);
    std::stringstream ss;
    write_basis(ss, b);
    const BasisFile f = read_basis(ss);
    CHECK(f.degree == 3);
    CHECK(f.a2 == d.a2());
    CHECK(f.b2 == d.b2());
    CHECK(f.c2 == d.c2());
    REQUIRE(f.fields.size() == b.raw_fields.size());
    for (std::size_t i = 0; i < f.fields.size(); ++i) {
      // Fields are stored up to a positive scale.
      const RationalField& g = f.fields[i];
      const RationalField& r = b.raw_fields[i];
      Rational scale = 0;
      for (int k = 0; k < 3 && scale == 0; ++k)
        if (!r[k].is_zero()) scale = g[k].terms().begin()->second / r[k].terms().begin()->second;
      CHECK(scale > 0);
      CHECK(g == r * scale);
    }
  }
}

TEST_CASE("basis reader reports malformed lines with their number") {
  std::stringstream good;
  write_basis(good, build_basis(kSpheroid, 1));
  std::string text = good.str();

  auto expect_line = [](const std::string& bad, const std::string& tag) {
    std::istringstream in(bad);
    try {
      read_basis(in);
      FAIL("accepted malformed input");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(tag) != std::string::npos);
    }
  };
  expect_line("# precess-basis 1\n# a2 = 1\n# b2 = 1\n# c2 = 16/25\n# degree = 1\n# fields = 1\n"
              "x: 0,1,0:-1 | y: 1,0,0:one | z:\n",
              "line 7");
  expect_line("# nonsense\n", "header");
  expect_line("x: 0,0,0:1 | y: | z:\n", "line 1");
  std::istringstream empty("");
  CHECK_THROWS_AS(read_basis(empty), std::runtime_error);

  // A corrupted coefficient parses but breaks tangency.
  const auto pos = text.find("1,0,0:");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 6, "0,0,0:");
  std::istringstream in(text);
  const BasisFile f = read_basis(in);
  bool any_bad = false;
  for (const auto& fld : f.fields) any_bad = any_bad || !check_field(fld, f.domain()).ok();
  CHECK(any_bad);
}
