#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "precess/basis.hpp"
#include "precess/operators.hpp"

namespace precess {

struct DiagnosticsRecord {
  double t = 0.0;
  double E_K = 0.0;
  double dEK_dt = 0.0;       // filled by fill_time_derivatives
  double dissipation = 0.0;  // -c.V c + c.F
  double delta_EK = 0.0;
  double lambda = 0.0;
  double E_perp = 0.0;
  double M_x = 0.0, M_y = 0.0, M_z = 0.0;
  double dE_Kn = 0.0, dE_Ks = 0.0;
  double c_rot = 0.0, c_orth = 0.0, c_tot = 0.0;
};

using TimeSeries = std::vector<DiagnosticsRecord>;

enum class ConstraintMode { rot_momentum, orth_poincare, total_momentum };
const char* to_string(ConstraintMode mode);
ConstraintMode parse_constraint_mode(const std::string& name);

/// Everything a record needs besides the state: the reference flow u_P and
/// the rotation e_z x x in basis coordinates, and the boundary functionals
/// reduced to linear forms on the coefficients.
struct DiagnosticsContext {
  Eigen::VectorXd reference;  // u_P coefficients; zero when there is none
  Eigen::VectorXd rotation;   // e_z x x coefficients
  double rotation_norm2 = 0.0;  // |e_z x x|^2
  double rotation_defect2 = 0.0;  // squared distance of e_z x x from the span
  Eigen::VectorXd g_rot;      // int_G b_i . (e_z x x)
  Eigen::VectorXd g_ref;      // int_G b_i . u_P
  double ref_rot = 0.0;       // int_G u_P . (e_z x x)
  double ref_ref = 0.0;       // int_G u_P . u_P
  int n_theta = 0, n_phi = 0;

  /// On domains not symmetric about Oz, e_z x x is replaced by its
  /// projection wherever coefficients are needed.
  static DiagnosticsContext make(const Basis& basis, const std::optional<Field>& reference,
                                 int n_theta = 48, int n_phi = 96);
};

DiagnosticsRecord record(double t, const Eigen::VectorXd& c, const OperatorSet& ops,
                         const DiagnosticsContext& ctx);

/// Centred differences of E_K in the interior, one-sided at the ends.
void fill_time_derivatives(TimeSeries& series);

/// (M_z[i+1] - M_z[i-1]) / (t[i+1] - t[i-1]) + eps_p M_y[i] for interior
/// records. Throws std::invalid_argument for fewer than 3 records or
/// non-uniform spacing.
std::vector<double> momentum_balance_residual(const TimeSeries& series, double eps_p);

/// Removes alpha (e_z x x) so that the chosen boundary functional vanishes.
/// Throws std::invalid_argument when the functional does not see e_z x x.
Eigen::VectorXd constraint_projection(const Eigen::VectorXd& c, const DiagnosticsContext& ctx,
                                      ConstraintMode mode);
double constraint_value(const Eigen::VectorXd& c, const DiagnosticsContext& ctx, ConstraintMode mode);

const char* csv_header();
void write_csv_row(std::ostream& out, const DiagnosticsRecord& r);
void write_csv(std::ostream& out, const TimeSeries& series);

}  // namespace precess
