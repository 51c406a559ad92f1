#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "precess/basis.hpp"

namespace precess {

enum class BCForm { stress_free, poincare_stress, normal_gradient, poincare_normal_gradient };

const char* to_string(BCForm form);
/// Accepts the enumerator spellings above; throws std::invalid_argument.
BCForm parse_bc_form(const std::string& name);
bool is_poincare(BCForm form);
/// True for the forms whose viscous operator is the strain-rate one.
bool uses_strain(BCForm form);

struct BCSpec {
  BCForm form = BCForm::stress_free;
  std::optional<Field> data_field;  // present exactly for the Poincare forms

  static BCSpec homogeneous(BCForm form);
  static BCSpec with_data(BCForm form, Field data);
};

/// Galerkin operators in the orthonormal basis. Index convention for the
/// advection tensor: T(i, j, k) = integral of (b_i . grad b_j) . b_k.
struct OperatorSet {
  int dim = 0;
  BCForm form = BCForm::stress_free;
  double nu = 0.0;
  double eps_p = 0.0;
  Vec3 precession_axis{1.0, 0.0, 0.0};

  Eigen::MatrixXd M;
  Eigen::MatrixXd A_sym;   // 2 int eps(b_i):eps(b_j)
  Eigen::MatrixXd A_grad;  // int grad b_i : grad b_j
  Eigen::MatrixXd C;       // int (axis x b_j) . b_i
  Eigen::MatrixXd V;       // nu * (A_sym or A_grad)
  Eigen::VectorXd F;       // boundary forcing, volume form
  std::array<Eigen::VectorXd, 3> mom;  // int (x x b_i)_alpha
  Eigen::MatrixXd Hn, Hs;  // Gram over z > 0 and z < 0
  std::vector<double> T;   // dim^3, (i*dim + j)*dim + k

  double& t(int i, int j, int k) { return T[(static_cast<std::size_t>(i) * dim + j) * dim + k]; }
  double t(int i, int j, int k) const { return T[(static_cast<std::size_t>(i) * dim + j) * dim + k]; }

  /// n_k = sum_ij c_i c_j T(i, j, k).
  Eigen::VectorXd advect(const Eigen::VectorXd& c) const;
  /// L = V + 2 eps_p C, the implicit linear part.
  Eigen::MatrixXd linear() const { return V + 2.0 * eps_p * C; }
};

/// Throws std::invalid_argument for nu <= 0, a data field whose strain rate
/// is not constant, a data field not tangent to the boundary, or a data
/// field missing/present contrary to bc.form.
OperatorSet assemble(const Basis& basis, const BCSpec& bc, double nu, double eps_p,
                     const Vec3& precession_axis = {1.0, 0.0, 0.0});

/// T-contraction + V c + 2 eps_p C c - F. Throws on dimension mismatch.
Eigen::VectorXd residual(const Eigen::VectorXd& c, const OperatorSet& ops);

Vec3 angular_momentum(const Eigen::VectorXd& c, const OperatorSet& ops);

struct MyCheck {
  long double lhs = 0.0L;  // int e_y . (x x v)
  long double rhs = 0.0L;  // 2 int (e_z x x) . (e_x x v)
};
MyCheck lemma_My_check(const RealField& v, const Domain& d);

/// Row-major text dump, 17 significant digits, one row per line.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void dump_operators(std::ostream& out, const OperatorSet& ops);

}  // namespace precess
