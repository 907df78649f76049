#include "coarse/property_a.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace coarse {

std::string to_string(CertVariant v) {
  switch (v) {
    case CertVariant::yu_sets: return "yu-sets";
    case CertVariant::l1: return "l1";
    case CertVariant::l2: return "l2";
    case CertVariant::l2_delta: return "l2-delta";
    case CertVariant::l2_delta_weak: return "l2-delta-weak";
    case CertVariant::hilbert: return "hilbert";
    case CertVariant::kernel_real: return "kernel-real";
    case CertVariant::kernel_roe: return "kernel-roe";
  }
  return "unknown";
}

CertVariant cert_variant_from_string(const std::string& s) {
  if (s == "yu-sets") return CertVariant::yu_sets;
  if (s == "l1") return CertVariant::l1;
  if (s == "l2") return CertVariant::l2;
  if (s == "l2-delta") return CertVariant::l2_delta;
  if (s == "l2-delta-weak") return CertVariant::l2_delta_weak;
  if (s == "hilbert") return CertVariant::hilbert;
  if (s == "kernel-real") return CertVariant::kernel_real;
  if (s == "kernel-roe") return CertVariant::kernel_roe;
  throw std::invalid_argument("unknown certificate variant: " + s);
}

bool CertReport::valid() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(),
                     [](const CertCheck& c) { return c.pass; });
}

bool ConversionReport::ok() const {
  return std::all_of(bounds.begin(), bounds.end(),
                     [](const CertCheck& c) { return c.pass; });
}

namespace {

bool is_vector_variant(CertVariant v) {
  switch (v) {
    case CertVariant::l1:
    case CertVariant::l2:
    case CertVariant::l2_delta:
    case CertVariant::l2_delta_weak:
    case CertVariant::hilbert:
      return true;
    default:
      return false;
  }
}

void check_payload_shape(const PropACertificate& cert, const FiniteMetricSpace& X) {
  const int n = X.size();
  if (cert.variant == CertVariant::yu_sets) {
    if (static_cast<int>(cert.sets.size()) != n)
      throw std::invalid_argument("payload must list one set per point");
    return;
  }
  if (is_vector_variant(cert.variant)) {
    if (cert.vectors.cols() != n)
      throw std::invalid_argument("payload must have one vector per point");
    if (cert.variant != CertVariant::hilbert && cert.vectors.rows() != n)
      throw std::invalid_argument("vectors must be indexed by the points of the space");
    if (cert.variant == CertVariant::hilbert && cert.vectors.rows() < 1)
      throw std::invalid_argument("hilbert payload needs at least one coordinate");
    return;
  }
  if (cert.kernel.rows() != n || cert.kernel.cols() != n)
    throw std::invalid_argument("kernel payload shape does not match the space");
}

double l1_norm(const Eigen::VectorXcd& v) { return v.cwiseAbs().sum(); }

// Mask of column entries within distance S of the base point.
Eigen::VectorXcd restrict_to_ball(const FiniteMetricSpace& X, const Eigen::VectorXcd& v,
                                  int x, Dist lo, Dist hi) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (int z = 0; z < X.size(); ++z) {
    const Dist d = X.distance(z, x);
    if (d > lo && d <= hi) out(z) = v(z);
  }
  return out;
}

CertCheck make_check(const std::string& name, bool pass, double measured,
                     std::string witness = {}) {
  CertCheck c;
  c.name = name;
  c.pass = pass;
  c.measured = measured;
  c.witness = std::move(witness);
  return c;
}

void check_normalization(const PropACertificate& cert, const FiniteMetricSpace& X,
                         double tol, CertReport& rep) {
  double worst = 0;
  std::string witness;
  for (int x = 0; x < X.size(); ++x) {
    const double norm = cert.variant == CertVariant::l1
                            ? l1_norm(cert.vectors.col(x))
                            : cert.vectors.col(x).norm();
    const double err = std::abs(norm - 1.0);
    if (err > worst) {
      worst = err;
      witness = X.point(x);
    }
  }
  rep.checks.push_back(make_check("normalization", worst <= tol, worst, witness));
}

void check_vector_variation(const PropACertificate& cert, const FiniteMetricSpace& X,
                            CertReport& rep) {
  double worst = 0;
  std::string witness;
  for (int x = 0; x < X.size(); ++x)
    for (int y = 0; y < X.size(); ++y) {
      if (X.distance(x, y) > cert.params.R) continue;
      const double diff = cert.variant == CertVariant::l1
                              ? l1_norm(cert.vectors.col(x) - cert.vectors.col(y))
                              : (cert.vectors.col(x) - cert.vectors.col(y)).norm();
      if (diff > worst) {
        worst = diff;
        witness = "(" + X.point(x) + "," + X.point(y) + ")";
      }
    }
  rep.checks.push_back(make_check("variation", worst < cert.params.eps, worst, witness));
}

}  // namespace

CertReport verify_certificate(const PropACertificate& cert, const FiniteMetricSpace& X,
                              double tol) {
  check_payload_shape(cert, X);
  CertReport rep;
  const auto& par = cert.params;

  switch (cert.variant) {
    case CertVariant::yu_sets: {
      bool nonempty = true;
      std::string witness;
      for (int x = 0; x < X.size(); ++x) {
        std::set<std::pair<int, int>> uniq(cert.sets[static_cast<std::size_t>(x)].begin(),
                                           cert.sets[static_cast<std::size_t>(x)].end());
        if (uniq.size() != cert.sets[static_cast<std::size_t>(x)].size())
          throw std::invalid_argument("set payload contains duplicate elements");
        for (const auto& [y, lvl] : uniq) {
          if (y < 0 || y >= X.size())
            throw std::invalid_argument("set element is not a point of the space");
          if (lvl < 1) throw std::invalid_argument("set element level must be positive");
        }
        if (uniq.empty() && nonempty) {
          nonempty = false;
          witness = X.point(x);
        }
      }
      rep.checks.push_back(make_check("nonempty", nonempty, 0, witness));

      Dist worst_s = 0;
      std::string sw;
      for (int x = 0; x < X.size(); ++x)
        for (const auto& [y, lvl] : cert.sets[static_cast<std::size_t>(x)])
          if (X.distance(x, y) > worst_s) {
            worst_s = X.distance(x, y);
            sw = "(" + X.point(x) + "," + X.point(y) + ")";
          }
      rep.checks.push_back(
          make_check("support", worst_s <= par.S, static_cast<double>(worst_s), sw));

      double worst = 0;
      std::string vw;
      for (int x = 0; x < X.size(); ++x)
        for (int y = 0; y < X.size(); ++y) {
          if (x == y || X.distance(x, y) >= par.R) continue;  // strict d < R
          std::set<std::pair<int, int>> ax(cert.sets[static_cast<std::size_t>(x)].begin(),
                                           cert.sets[static_cast<std::size_t>(x)].end());
          std::size_t inter = 0;
          for (const auto& e : cert.sets[static_cast<std::size_t>(y)])
            if (ax.count(e)) ++inter;
          const std::size_t sym = cert.sets[static_cast<std::size_t>(x)].size() +
                                  cert.sets[static_cast<std::size_t>(y)].size() - 2 * inter;
          const double ratio = inter == 0
                                   ? std::numeric_limits<double>::infinity()
                                   : static_cast<double>(sym) / static_cast<double>(inter);
          if (ratio > worst) {
            worst = ratio;
            vw = "(" + X.point(x) + "," + X.point(y) + ")";
          }
        }
      rep.checks.push_back(make_check("variation", worst < par.eps, worst, vw));
      break;
    }

    case CertVariant::l1:
    case CertVariant::l2:
    case CertVariant::l2_delta:
    case CertVariant::l2_delta_weak:
    case CertVariant::hilbert: {
      check_normalization(cert, X, tol, rep);
      check_vector_variation(cert, X, rep);

      if (cert.variant == CertVariant::l1 || cert.variant == CertVariant::l2) {
        double worst = 0;
        std::string witness;
        for (int x = 0; x < X.size(); ++x)
          for (int z = 0; z < X.size(); ++z)
            if (X.distance(z, x) > par.S) {
              const double mag = std::abs(cert.vectors(z, x));
              if (mag > worst) {
                worst = mag;
                witness = "(" + X.point(x) + "," + X.point(z) + ")";
              }
            }
        rep.checks.push_back(make_check("support", worst <= tol, worst, witness));
      } else if (cert.variant == CertVariant::l2_delta ||
                 cert.variant == CertVariant::l2_delta_weak) {
        double worst = 1.0;
        std::string witness;
        for (int x = 0; x < X.size(); ++x) {
          const double norm =
              restrict_to_ball(X, cert.vectors.col(x), x, -1, par.S).norm();
          if (norm < worst) {
            worst = norm;
            witness = X.point(x);
          }
        }
        rep.checks.push_back(
            make_check("ball-mass", worst >= 1.0 - par.delta - tol, worst, witness));

        if (cert.variant == CertVariant::l2_delta_weak) {
          double ann = 0;
          std::string aw;
          for (int x = 0; x < X.size(); ++x) {
            const double norm =
                restrict_to_ball(X, cert.vectors.col(x), x, par.S, par.R + par.S).norm();
            if (norm > ann) {
              ann = norm;
              aw = X.point(x);
            }
          }
          rep.checks.push_back(make_check("annulus-mass", ann <= par.eps + tol, ann, aw));
        }
      } else {  // hilbert
        double worst = 0;
        std::string witness;
        for (int x = 0; x < X.size(); ++x)
          for (int y = 0; y < X.size(); ++y)
            if (X.distance(x, y) > par.S) {
              const double ip =
                  std::abs(cert.vectors.col(x).dot(cert.vectors.col(y)));
              if (ip > worst) {
                worst = ip;
                witness = "(" + X.point(x) + "," + X.point(y) + ")";
              }
            }
        rep.checks.push_back(make_check("orthogonality", worst <= tol, worst, witness));
      }
      break;
    }

    case CertVariant::kernel_real:
    case CertVariant::kernel_roe: {
      if (cert.variant == CertVariant::kernel_real) {
        const double im = cert.kernel.imag().cwiseAbs().maxCoeff();
        rep.checks.push_back(make_check("real-entries", im <= tol, im));
      }
      const bool herm = is_hermitian(cert.kernel, tol);
      rep.checks.push_back(make_check("hermitian", herm, 0));
      if (herm) {
        const auto psd = positive_type_check(cert.kernel, tol);
        rep.checks.push_back(
            make_check("positive-type", psd.positive, psd.least_eigenvalue));
      } else {
        rep.checks.push_back(make_check("positive-type", false, 0, "not hermitian"));
      }
      const double var = measured_variation(X, cert.kernel, par.R);
      rep.checks.push_back(make_check("variation", var < par.eps, var));
      const Dist prop = propagation(X, cert.kernel, tol);
      if (par.S > 0)
        rep.checks.push_back(
            make_check("propagation", prop <= par.S, static_cast<double>(prop)));
      break;
    }
  }
  return rep;
}

PropACertificate ball_certificate(const FiniteMetricSpace& X, Dist S, Dist R) {
  if (S < 0) throw std::invalid_argument("ball radius must be nonnegative");
  if (R < 0) throw std::invalid_argument("variation radius must be nonnegative");
  const int n = X.size();
  PropACertificate cert;
  cert.variant = CertVariant::l2;
  cert.vectors = Eigen::MatrixXcd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    const auto members = ball(X, x, S);
    const double w = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (int z : members) cert.vectors(z, x) = w;
  }
  cert.params.S = S;
  cert.params.R = R;
  if (R == 0) {
    cert.params.eps = 1.0;
  } else {
    double worst = 0;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (X.distance(x, y) <= R)
          worst = std::max(worst, (cert.vectors.col(x) - cert.vectors.col(y)).norm());
    cert.params.eps = worst + 1e-12;
  }
  return cert;
}

PropACertificate yusets_to_l1(const PropACertificate& cert, const FiniteMetricSpace& X,
                              ConversionReport* report) {
  if (cert.variant != CertVariant::yu_sets)
    throw std::invalid_argument("conversion expects a yu-sets certificate");
  check_payload_shape(cert, X);
  const int n = X.size();
  for (int x = 0; x < n; ++x)
    if (cert.sets[static_cast<std::size_t>(x)].empty())
      throw std::invalid_argument("empty set for point " + X.point(x));

  PropACertificate out;
  out.variant = CertVariant::l1;
  out.vectors = Eigen::MatrixXcd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    const auto& ax = cert.sets[static_cast<std::size_t>(x)];
    for (const auto& [y, lvl] : ax)
      out.vectors(y, x) += 1.0 / static_cast<double>(ax.size());
  }

  ConversionReport local;
  double worst_ratio = 0;
  bool bound_ok = true;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      const auto& ax = cert.sets[static_cast<std::size_t>(x)];
      const auto& ay = cert.sets[static_cast<std::size_t>(y)];
      std::set<std::pair<int, int>> sx(ax.begin(), ax.end());
      std::size_t inter = 0;
      for (const auto& e : ay)
        if (sx.count(e)) ++inter;
      const std::size_t sym = ax.size() + ay.size() - 2 * inter;
      const double bound = 2.0 * static_cast<double>(sym) /
                           static_cast<double>(std::max(ax.size(), ay.size()));
      const double diff = l1_norm(out.vectors.col(x) - out.vectors.col(y));
      worst_ratio = std::max(worst_ratio, bound > 0 ? diff / bound : 0.0);
      if (diff > bound + kDefaultTol) bound_ok = false;
    }
  local.bounds.push_back(
      make_check("l1-diff <= 2|sym-diff|/max-size", bound_ok, worst_ratio));

  double var = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (X.distance(x, y) <= cert.params.R)
        var = std::max(var, l1_norm(out.vectors.col(x) - out.vectors.col(y)));
  out.params.R = cert.params.R;
  out.params.S = cert.params.S;
  out.params.eps = var + 1e-12;
  local.measurements.emplace_back("l1-variation", var);
  if (report) *report = std::move(local);
  return out;
}

PropACertificate l1_to_l2(const PropACertificate& cert, const FiniteMetricSpace& X,
                          ConversionReport* report) {
  if (cert.variant != CertVariant::l1)
    throw std::invalid_argument("conversion expects an l1 certificate");
  check_payload_shape(cert, X);
  const int n = X.size();
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z) {
      const auto v = cert.vectors(z, x);
      if (v.real() < -kDefaultTol || std::abs(v.imag()) > kDefaultTol)
        throw std::invalid_argument("negative entries: pointwise square root undefined");
    }

  PropACertificate out;
  out.variant = CertVariant::l2;
  out.vectors = Eigen::MatrixXcd::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z)
      out.vectors(z, x) = std::sqrt(std::max(cert.vectors(z, x).real(), 0.0));

  ConversionReport local;
  bool bound_ok = true;
  double worst_ratio = 0;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      const double lhs = (out.vectors.col(x) - out.vectors.col(y)).squaredNorm();
      const double rhs = l1_norm(cert.vectors.col(x) - cert.vectors.col(y));
      if (lhs > rhs + kDefaultTol) bound_ok = false;
      if (rhs > 0) worst_ratio = std::max(worst_ratio, lhs / rhs);
    }
  local.bounds.push_back(
      make_check("l2-diff^2 <= l1-diff", bound_ok, worst_ratio));

  double var = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (X.distance(x, y) <= cert.params.R)
        var = std::max(var, (out.vectors.col(x) - out.vectors.col(y)).norm());
  out.params.R = cert.params.R;
  out.params.S = cert.params.S;
  out.params.eps = var + 1e-12;
  local.measurements.emplace_back("l2-variation", var);
  if (report) *report = std::move(local);
  return out;
}

PropACertificate truncate_normalize(const PropACertificate& cert,
                                    const FiniteMetricSpace& X,
                                    ConversionReport* report) {
  if (cert.variant != CertVariant::l2_delta_weak)
    throw std::invalid_argument("conversion expects an l2-delta-weak certificate");
  check_payload_shape(cert, X);
  if (cert.params.delta >= 1.0)
    throw std::invalid_argument("delta must be below 1");
  const int n = X.size();
  const Dist radius = cert.params.R + cert.params.S;

  PropACertificate out;
  out.variant = CertVariant::l2;
  out.vectors = Eigen::MatrixXcd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    Eigen::VectorXcd zeta = restrict_to_ball(X, cert.vectors.col(x), x, -1, radius);
    const double norm = zeta.norm();
    if (norm <= kDefaultTol)
      throw std::invalid_argument("restriction of the vector at " + X.point(x) +
                                  " vanishes");
    out.vectors.col(x) = zeta / norm;
  }

  double var = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (X.distance(x, y) <= cert.params.R)
        var = std::max(var, (out.vectors.col(x) - out.vectors.col(y)).norm());
  const double bound = 6.0 * cert.params.eps / (1.0 - cert.params.delta);

  ConversionReport local;
  local.bounds.push_back(
      make_check("variation <= 6 eps/(1-delta)", var <= bound + kDefaultTol, var));
  local.measurements.emplace_back("variation", var);
  local.measurements.emplace_back("bound", bound);

  out.params.R = cert.params.R;
  out.params.S = radius;
  out.params.eps = std::max(bound, var + 1e-12);
  if (report) *report = std::move(local);
  return out;
}

PropACertificate vectors_to_kernel(const PropACertificate& cert,
                                   const FiniteMetricSpace& X,
                                   ConversionReport* report) {
  if (cert.variant != CertVariant::l2 && cert.variant != CertVariant::hilbert)
    throw std::invalid_argument("conversion expects an l2 or hilbert certificate");
  check_payload_shape(cert, X);
  const int n = X.size();
  for (int x = 0; x < n; ++x)
    if (std::abs(cert.vectors.col(x).norm() - 1.0) > 1e-6)
      throw std::invalid_argument("non-unit vector at " + X.point(x));

  PropACertificate out;
  out.variant = CertVariant::kernel_real;
  out.kernel = Kernel::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      out.kernel(x, y) = cert.vectors.col(x).dot(cert.vectors.col(y)).real();

  ConversionReport local;
  double worst_gap = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const double lhs = (cert.vectors.col(x) - cert.vectors.col(y)).squaredNorm();
      const double rhs = 2.0 - 2.0 * out.kernel(x, y).real();
      worst_gap = std::max(worst_gap, std::abs(lhs - rhs));
    }
  local.bounds.push_back(
      make_check("norm identity |xi_x-xi_y|^2 = 2-2u", worst_gap <= 1e-9, worst_gap));

  const double var = measured_variation(X, out.kernel, cert.params.R);
  const double eps_bound = cert.params.eps * cert.params.eps / 2.0;
  local.bounds.push_back(
      make_check("kernel variation <= eps^2/2", var <= eps_bound + kDefaultTol, var));
  local.measurements.emplace_back("kernel-variation", var);

  out.params.R = cert.params.R;
  out.params.S =
      cert.variant == CertVariant::hilbert ? cert.params.S : 2 * cert.params.S;
  out.params.eps = std::max(eps_bound, var + 1e-12);
  const Dist prop = propagation(X, out.kernel);
  local.measurements.emplace_back("propagation", static_cast<double>(prop));
  local.bounds.push_back(
      make_check("propagation within declared S", prop <= out.params.S,
                 static_cast<double>(prop)));
  if (report) *report = std::move(local);
  return out;
}

Kernel psd_sqrt(const Kernel& u, double tol) {
  if (!is_hermitian(u, tol)) throw std::invalid_argument("kernel is not hermitian");
  const Kernel sym = (u + u.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Kernel> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");
  Eigen::VectorXd vals = solver.eigenvalues();
  if (vals(0) < -tol)
    throw std::invalid_argument("kernel is not positive type; least eigenvalue " +
                                std::to_string(vals(0)));
  for (int i = 0; i < vals.size(); ++i) vals(i) = std::sqrt(std::max(vals(i), 0.0));
  return solver.eigenvectors() * vals.asDiagonal() *
         solver.eigenvectors().adjoint();
}

PropACertificate kernel_to_vectors(const PropACertificate& cert,
                                   const FiniteMetricSpace& X, Dist S_target,
                                   ConversionReport* report) {
  if (cert.variant != CertVariant::kernel_roe)
    throw std::invalid_argument("conversion expects a kernel-roe certificate");
  check_payload_shape(cert, X);
  if (cert.params.eps >= 0.5)
    throw std::invalid_argument("variation parameter must be below 1/2");
  if (S_target < 0) throw std::invalid_argument("truncation radius must be nonnegative");
  const int n = X.size();

  const Kernel v = psd_sqrt(cert.kernel);
  Kernel w = v;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (X.distance(x, y) > S_target) w(x, y) = 0.0;
  w = (w + Kernel(w.adjoint())) / 2.0;

  const double defect = operator_norm(v * v - w * w);
  const double eps_eff = std::max(cert.params.eps, defect);
  if (eps_eff >= 0.5)
    throw std::runtime_error(
        "truncation radius too small: achieved ||v^2-w^2|| = " + std::to_string(defect));

  PropACertificate out;
  out.variant = CertVariant::l2;
  out.vectors = Eigen::MatrixXcd::Zero(n, n);
  const double floor = 1.0 - 2.0 * eps_eff;
  double min_sq = std::numeric_limits<double>::infinity();
  for (int x = 0; x < n; ++x) {
    const Eigen::VectorXcd zeta = w.col(x);
    const double norm = zeta.norm();
    min_sq = std::min(min_sq, norm * norm);
    if (norm <= kDefaultTol)
      throw std::runtime_error("column norm vanished during truncation at " + X.point(x));
    out.vectors.col(x) = zeta / norm;
  }

  ConversionReport local;
  local.bounds.push_back(
      make_check("column norm^2 >= 1-2eps'", min_sq >= floor - kDefaultTol, min_sq));

  double var = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (X.distance(x, y) <= cert.params.R)
        var = std::max(var, (out.vectors.col(x) - out.vectors.col(y)).norm());
  const double bound = 2.0 * std::sqrt(6.0 * eps_eff / (1.0 - 2.0 * eps_eff));
  local.bounds.push_back(
      make_check("variation <= 2 sqrt(6eps'/(1-2eps'))", var <= bound + kDefaultTol, var));
  local.measurements.emplace_back("square-defect", defect);
  local.measurements.emplace_back("eps-effective", eps_eff);
  local.measurements.emplace_back("variation", var);
  local.measurements.emplace_back("min-column-norm-sq", min_sq);

  out.params.R = cert.params.R;
  out.params.S = S_target;
  out.params.eps = std::max(bound, var + 1e-12);
  if (report) *report = std::move(local);
  return out;
}

PropACertificate kernel_real_to_roe(const PropACertificate& cert) {
  if (cert.variant != CertVariant::kernel_real)
    throw std::invalid_argument("conversion expects a kernel-real certificate");
  PropACertificate out = cert;
  out.variant = CertVariant::kernel_roe;
  return out;
}

}  // namespace coarse
