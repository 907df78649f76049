#pragma once

#include "coarse/metric_space.hpp"
#include "coarse/partial_translation.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace coarse {

/// On a finite space the algebra of finite-propagation operators is the full
/// matrix algebra, so kernels and operators share one dense representation.
using Kernel = Eigen::MatrixXcd;

constexpr double kDefaultTol = 1e-9;

/// Smallest R such that |T(x,y)| <= tol whenever d(x,y) > R.
Dist propagation(const FiniteMetricSpace& X, const Kernel& T, double tol = kDefaultTol);

bool is_hermitian(const Kernel& u, double tol = kDefaultTol);

struct PsdReport {
  bool positive = false;       // least eigenvalue >= -tol
  double least_eigenvalue = 0;
  double residual = 0;         // ||A v - lambda v|| for the extreme eigenpair
};

/// Least eigenvalue of a hermitian kernel via a self-adjoint eigensolver,
/// with the residual of the extreme eigenpair reported as a certificate.
/// Throws on non-hermitian input.
PsdReport positive_type_check(const Kernel& u, double tol = kDefaultTol);

/// True iff |u(x,y) - 1| < eps for every pair with d(x,y) <= R.
bool variation_check(const FiniteMetricSpace& X, const Kernel& u, Dist R, double eps);

/// Largest |u(x,y) - 1| over pairs with d(x,y) <= R.
double measured_variation(const FiniteMetricSpace& X, const Kernel& u, Dist R);

/// Entrywise (Schur) product; dimensions must agree.
Kernel schur_multiply(const Kernel& u, const Kernel& T);

Eigen::VectorXcd diag_restrict(const Kernel& T);

/// 0/1 matrix with a one at each (x,y) in t; a partial isometry whose adjoint
/// is the isometry of the inverse bijection.
Kernel translation_isometry(int n, const PartialBijection& t);

/// Linear dimension of the *-algebra generated by the given matrices:
/// iterated span closure under products and adjoints, rank decisions by
/// orthogonalization at `tol`. Throws when the common space exceeds `cap`.
int algebra_dimension(const std::vector<Kernel>& generators, int cap = 64,
                      double tol = kDefaultTol);

/// The positive block matrix (t_xy) of a free chart: block (x,y) has entries
/// [exists sigma with sigma x = x' and sigma y = y'] at (x',y'). Assembled
/// as B*B for the 0/1 matrix B(sigma,(x,x')) = [sigma x = x'], hence positive
/// semidefinite. For every pair covered by the chart, block (x,y) equals the
/// translation containing (x,y) and has a one in entry (x,y).
Eigen::MatrixXd claim_matrix(const FiniteMetricSpace& X, const AtlasChart& chart);

/// Operator norm (largest singular value; largest |eigenvalue| for hermitian).
double operator_norm(const Kernel& T);

}  // namespace coarse
