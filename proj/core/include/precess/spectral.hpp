#pragma once

#include <Eigen/Dense>

#include <vector>

#include "precess/operators.hpp"

namespace precess {

enum class Stiffness { strain, gradient };

struct KernelReport {
  Stiffness stiffness = Stiffness::strain;
  int kernel_dim = 0;
  std::vector<Eigen::VectorXd> kernel_fields;  // M-orthonormal
  Eigen::VectorXd eigenvalues;                 // ascending, of A x = mu M x
  double tolerance = 0.0;                      // absolute threshold used
};

/// Generalised eigenproblem of A_sym or A_grad (never the nu-scaled V)
/// against M. An eigenvalue counts as kernel when below
/// tol_kernel * max(largest eigenvalue, 1). Throws std::runtime_error if the solver fails.
KernelReport viscous_kernel(const OperatorSet& ops, Stiffness which = Stiffness::strain,
                            double tol_kernel = 1e-10);

struct CoercivityResult {
  double K = 0.0;            // min x.A x / (2 x.M x) on the complement
  Eigen::VectorXd minimizer; // M-normalised
  int excluded = 0;          // dimension of the excluded subspace
  int degree = 0;
};

/// Minimises the Rayleigh quotient x.A_sym x / (2 x.M x) over the
/// M-orthogonal complement of span(exclusion). Throws std::invalid_argument
/// if that complement still meets the kernel of A_sym.
CoercivityResult coercivity_constant(const OperatorSet& ops,
                                     const std::vector<Eigen::VectorXd>& exclusion,
                                     int degree = 0, double tol_kernel = 1e-10);

}  // namespace precess
