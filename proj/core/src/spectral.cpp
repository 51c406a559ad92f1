#include "precess/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <stdexcept>

namespace precess {

namespace {

Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solve(const Eigen::MatrixXd& a,
                                                                 const Eigen::MatrixXd& m) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, m);
  if (es.info() != Eigen::Success) throw std::runtime_error("generalised eigensolver failed");
  return es;
}

}  // namespace

KernelReport viscous_kernel(const OperatorSet& ops, Stiffness which, double tol_kernel) {
  const Eigen::MatrixXd& a = which == Stiffness::strain ? ops.A_sym : ops.A_grad;
  const auto es = solve(a, ops.M);
  KernelReport r;
  r.stiffness = which;
  r.eigenvalues = es.eigenvalues();
  const double top = r.eigenvalues.size() ? r.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  // Floor of 1 keeps the all-kernel case (the sphere at N = 1) meaningful.
  r.tolerance = tol_kernel * std::max(top, 1.0);
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    if (r.eigenvalues(i) < r.tolerance) {
      ++r.kernel_dim;
      r.kernel_fields.push_back(es.eigenvectors().col(i));
    }
  }
  return r;
}

CoercivityResult coercivity_constant(const OperatorSet& ops,
                                     const std::vector<Eigen::VectorXd>& exclusion, int degree,
                                     double tol_kernel) {
  const Eigen::Index n = ops.dim;
  const auto k = static_cast<Eigen::Index>(exclusion.size());
  if (k >= n) throw std::invalid_argument("exclusion leaves no complement");

  // Columns of y span {x : (M z_i) . x = 0}.
  Eigen::MatrixXd y;
  if (k == 0) {
    y = Eigen::MatrixXd::Identity(n, n);
  } else {
    Eigen::MatrixXd mz(n, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (exclusion[static_cast<std::size_t>(i)].size() != n) {
        throw std::invalid_argument("exclusion vector dimension mismatch");
      }
      mz.col(i) = ops.M * exclusion[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mz);
    if (qr.rank() != k) throw std::invalid_argument("exclusion vectors are linearly dependent");
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    y = q.rightCols(n - k);
  }

  const Eigen::MatrixXd a = y.transpose() * ops.A_sym * y;
  const Eigen::MatrixXd m = y.transpose() * ops.M * y;
  const auto es = solve(0.5 * (a + a.transpose()), 0.5 * (m + m.transpose()));
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues()(0) < tol_kernel * top) {
    throw std::invalid_argument("exclusion does not cover the kernel of the strain stiffness");
  }
  CoercivityResult r;
  r.K = 0.5 * es.eigenvalues()(0);
  r.minimizer = y * es.eigenvectors().col(0);
  r.minimizer /= std::sqrt(r.minimizer.dot(ops.M * r.minimizer));
  r.excluded = static_cast<int>(k);
  r.degree = degree;
  return r;
}

}  // namespace precess
