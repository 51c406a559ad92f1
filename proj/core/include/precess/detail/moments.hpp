#pragma once

// Dense coefficient/moment machinery shared by basis construction and
// operator assembly. Polynomials of degree <= D are mapped to coefficient
// vectors over a fixed monomial list; integrals of products then become
// bilinear forms with the moment (Hankel-like) matrix H[m][n] = I(m + n).

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "precess/geometry.hpp"
#include "precess/vector_field.hpp"

namespace precess::detail {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// All exponents of total degree <= max_degree in graded-lex order.
class MonomialSet {
 public:
  explicit MonomialSet(int max_degree);

  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(list_.size()); }
  const Exponent& operator[](int i) const { return list_[static_cast<std::size_t>(i)]; }
  /// -1 when e is outside the set.
  int index(const Exponent& e) const;

 private:
  int max_degree_;
  std::vector<Exponent> list_;
  std::vector<int> lookup_;  // cube (D+1)^3 -> position
};

/// Monomial integrals up to a total degree, cached as extended-precision
/// values converted once from the exact rationals.
class IntegralTable {
 public:
  IntegralTable(const Domain& d, int max_degree, std::optional<Hemisphere> half = std::nullopt);

  int max_degree() const { return max_degree_; }
  long double operator()(const Exponent& e) const { return operator()(e[0], e[1], e[2]); }
  long double operator()(int p, int q, int r) const {
    return values_[static_cast<std::size_t>((p * stride_ + q) * stride_ + r)];
  }

 private:
  int max_degree_;
  int stride_;
  std::vector<long double> values_;
};

/// H[m][n] = integral of x^(rows[m] + cols[n]).
LMatrix moment_matrix(const IntegralTable& table, const MonomialSet& rows, const MonomialSet& cols);

/// Row i of result[a] holds the coefficients of component a of fields[i].
std::array<LMatrix, 3> coefficient_matrices(const std::vector<VectorField<long double>>& fields,
                                            const MonomialSet& monomials);

/// Right-multiplying a coefficient row vector by D gives the coefficients of
/// the derivative along `axis` (in the same monomial set).
LMatrix derivative_matrix(const MonomialSet& monomials, int axis);

/// Integral of u . v for arbitrary long-double fields, using `table`.
long double l2_inner(const VectorField<long double>& u, const VectorField<long double>& v,
                     const IntegralTable& table);

}  // namespace precess::detail
