#include "coarse/roe.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace coarse {

Dist propagation(const FiniteMetricSpace& X, const Kernel& T, double tol) {
  if (T.rows() != X.size() || T.cols() != X.size())
    throw std::invalid_argument("kernel shape does not match the space");
  Dist prop = 0;
  for (int x = 0; x < X.size(); ++x)
    for (int y = 0; y < X.size(); ++y)
      if (std::abs(T(x, y)) > tol) prop = std::max(prop, X.distance(x, y));
  return prop;
}

bool is_hermitian(const Kernel& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u - u.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

PsdReport positive_type_check(const Kernel& u, double tol) {
  if (!is_hermitian(u, tol)) throw std::invalid_argument("kernel is not hermitian");
  const Kernel sym = (u + u.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Kernel> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");
  PsdReport rep;
  rep.least_eigenvalue = solver.eigenvalues()(0);
  const Eigen::VectorXcd v = solver.eigenvectors().col(0);
  rep.residual = (sym * v - rep.least_eigenvalue * v).norm();
  // The verdict is only as good as the eigenpair: require the residual to
  // certify it.
  rep.positive = rep.least_eigenvalue >= -tol && rep.residual < tol;
  return rep;
}

double measured_variation(const FiniteMetricSpace& X, const Kernel& u, Dist R) {
  if (u.rows() != X.size() || u.cols() != X.size())
    throw std::invalid_argument("kernel shape does not match the space");
  double worst = 0;
  for (int x = 0; x < X.size(); ++x)
    for (int y = 0; y < X.size(); ++y)
      if (X.distance(x, y) <= R)
        worst = std::max(worst, std::abs(u(x, y) - 1.0));
  return worst;
}

bool variation_check(const FiniteMetricSpace& X, const Kernel& u, Dist R, double eps) {
  return measured_variation(X, u, R) < eps;
}

Kernel schur_multiply(const Kernel& u, const Kernel& T) {
  if (u.rows() != T.rows() || u.cols() != T.cols())
    throw std::invalid_argument("kernel dimensions do not match");
  return u.cwiseProduct(T);
}

Eigen::VectorXcd diag_restrict(const Kernel& T) { return T.diagonal(); }

Kernel translation_isometry(int n, const PartialBijection& t) {
  Kernel M = Kernel::Zero(n, n);
  for (const auto& [x, y] : t.pairs()) {
    if (x < 0 || x >= n || y < 0 || y >= n)
      throw std::invalid_argument("pair outside the space");
    M(x, y) = 1.0;
  }
  return M;
}

namespace {

// Column-major flattening of a matrix as a vector in C^(n*n).
Eigen::VectorXcd flatten(const Kernel& M) {
  return Eigen::Map<const Eigen::VectorXcd>(M.data(), M.size());
}

}  // namespace

int algebra_dimension(const std::vector<Kernel>& generators, int cap, double tol) {
  if (generators.empty()) return 0;
  const int n = static_cast<int>(generators.front().rows());
  if (n > cap) throw std::invalid_argument("space size exceeds cap");
  for (const auto& g : generators)
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("generators are not on a common space");

  std::vector<Kernel> basis_mats;          // matrices spanning the algebra so far
  std::vector<Eigen::VectorXcd> basis;     // orthonormal flattened versions

  auto try_add = [&](const Kernel& M) {
    Eigen::VectorXcd v = flatten(M);
    const double scale = v.norm();
    if (scale <= tol) return false;
    v /= scale;
    // Re-orthogonalize twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b.dot(v) * b;
    if (v.norm() <= tol) return false;
    v.normalize();
    basis.push_back(std::move(v));
    basis_mats.push_back(M);
    return true;
  };

  for (const auto& g : generators) {
    try_add(g);
    try_add(g.adjoint());
  }

  // Span closure under products and adjoints until stable.
  const int max_dim = n * n;
  std::size_t frontier_begin = 0;
  int rounds = 0;
  while (frontier_begin < basis_mats.size()) {
    if (++rounds > max_dim + 2)
      throw std::runtime_error("algebra closure failed to converge; check tol");
    const std::size_t frontier_end = basis_mats.size();
    for (std::size_t i = 0; i < frontier_end; ++i) {
      const bool i_new = i >= frontier_begin;
      for (std::size_t j = 0; j < frontier_end; ++j) {
        if (!i_new && j < frontier_begin) continue;  // both old: already closed
        if (static_cast<int>(basis.size()) >= max_dim) break;
        const Kernel prod = basis_mats[i] * basis_mats[j];
        try_add(prod);
        try_add(prod.adjoint());
      }
    }
    frontier_begin = frontier_end;
    if (static_cast<int>(basis.size()) >= max_dim) break;
  }
  return static_cast<int>(basis.size());
}

Eigen::MatrixXd claim_matrix(const FiniteMetricSpace& X, const AtlasChart& chart) {
  Atlas probe;
  probe.charts.push_back(chart);
  const auto rep = verify_atlas(X, probe);
  if (!rep.pass())
    throw std::invalid_argument("claim matrix requires a valid chart: " +
                                rep.charts.front().witness);
  if (!rep.charts.front().free)
    throw std::invalid_argument("claim matrix requires a free chart");

  const std::set<PartialBijection> sigmas(chart.cotranslations.begin(),
                                          chart.cotranslations.end());
  const int n = X.size();
  const int m = static_cast<int>(sigmas.size());
  // B(sigma, (x,x')) = [sigma x = x'], columns indexed by x*n + x'.
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, n * n);
  int s = 0;
  for (const auto& sigma : sigmas) {
    for (const auto& [x, x2] : sigma.pairs()) B(s, x * n + x2) = 1.0;
    ++s;
  }
  return B.transpose() * B;
}

double operator_norm(const Kernel& T) {
  Eigen::JacobiSVD<Kernel> svd(T);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace coarse
