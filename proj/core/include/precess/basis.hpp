#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

#include "precess/geometry.hpp"
#include "precess/vector_field.hpp"

namespace precess {

using RationalField = VectorField<Rational>;
using RealField = VectorField<long double>;
using Field = VectorField<double>;

/// Discrete velocity space: solenoidal polynomial fields of degree <= N that
/// are tangent to the boundary of the domain.
///
/// `raw_fields` span the space exactly and are nested by degree: the first
/// dim(V_n) of them span the degree-<=n subspace V_n for every n. The first
/// three are always the linear fields diag(a^2,b^2,c^2)(e x x) for e = e_z,
/// e_x, e_y (scaled so that on a z-spheroid the first one is exactly
/// e_z x x). `fields` are the L2-orthonormalised combinations
/// fields[j] = sum_m transform(j, m) raw_fields[m] with transform lower
/// triangular, so the nesting carries over.
struct Basis {
  Domain domain;
  int degree = 0;
  std::vector<RationalField> raw_fields;
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> transform;
  std::vector<RealField> fields;
  /// L2 Gram matrix of `fields`, recomputed from their stored coefficients.
  Eigen::MatrixXd gram;
  /// 2-norm condition number of the raw Gram matrix.
  double raw_gram_condition = 0.0;

  int dim() const { return static_cast<int>(fields.size()); }
  double gram_deviation() const;
};

/// Throws std::invalid_argument if N < 1 and std::runtime_error when the
/// Gram-Schmidt pass hits a non-positive pivot.
Basis build_basis(const Domain& d, int N);

/// Exact nullspace of {div v = 0, v.grad(chi) = chi q} over degree <= N,
/// ordered by degree as described on Basis::raw_fields.
std::vector<RationalField> tangent_solenoidal_fields(const Domain& d, int N);

struct SymbolicCheck {
  bool solenoidal = false;
  bool tangent = false;
  bool ok() const { return solenoidal && tangent; }
};

/// div v == 0 and chi | v.grad(chi), both as exact polynomial identities.
SymbolicCheck check_field(const RationalField& v, const Domain& d);

/// grad(chi) x grad(psi) for every monomial psi with 1 <= deg psi <= N.
std::vector<RationalField> curl_form_fields(const Domain& d, int N);
RationalField curl_form_field(const Domain& d, const Polynomial<Rational>& psi);

/// -y e_x + (x - (2 eps/beta)(1+beta) z) e_y + (2 eps/beta) y e_z.
/// Throws std::invalid_argument for beta == 0 or beta <= -1.
Field poincare_field(double beta, double eps_p);

/// axis x position. Throws unless |axis| = 1 to within 1e-12.
Field solid_rotation(const Vec3& axis);

struct Projection {
  Eigen::VectorXd coeffs;
  double residual = 0.0;  // L2 norm of v - sum c_i b_i
};

/// L2-orthogonal projection of a polynomial field onto the basis.
Projection project(const Field& v, const Basis& basis);

/// Polynomial sum_i c_i fields[i].
RealField reconstruct(const Eigen::VectorXd& coeffs, const Basis& basis);

RealField to_real(const Field& v);
RealField to_real(const RationalField& v);

// Portable text form of the exact raw fields. One header block of '#' lines
// (format tag, squared semi-axes, degree) followed by one line per field:
//   x: i,j,k:coef i,j,k:coef ... | y: ... | z: ...
// Each field is scaled to coprime integer coefficients, which are written in
// full; decimal input such as 0.5 is accepted on read.
void write_basis(std::ostream& out, const Basis& basis);

struct BasisFile {
  Rational a2, b2, c2;
  int degree = 0;
  std::vector<RationalField> fields;
  Domain domain() const { return Domain::from_squared_axes(a2, b2, c2); }
};

/// Throws std::runtime_error with the offending line number on bad input.
BasisFile read_basis(std::istream& in);

}  // namespace precess
