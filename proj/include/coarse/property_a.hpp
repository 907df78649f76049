#pragma once

#include "coarse/metric_space.hpp"
#include "coarse/roe.hpp"

#include <string>
#include <vector>

namespace coarse {

/// The eight certificate forms: averaging set families, normalized l1 / l2
/// vector families (with the ball-support, delta-concentration and weak
/// annulus variants), abstract Hilbert families with orthogonality at long
/// range, and the two positive-type kernel forms.
enum class CertVariant {
  yu_sets,
  l1,
  l2,
  l2_delta,
  l2_delta_weak,
  hilbert,
  kernel_real,
  kernel_roe,
};

std::string to_string(CertVariant v);
CertVariant cert_variant_from_string(const std::string& s);

struct CertParams {
  Dist R = 0;
  double eps = 0;
  Dist S = 0;
  double delta = 0;
};

struct PropACertificate {
  CertVariant variant = CertVariant::l2;
  CertParams params;

  // yu_sets payload: per point x, a finite list of (point, level) elements.
  std::vector<std::vector<std::pair<int, int>>> sets;

  // Vector payload: column x is the vector for point x. Rows are points of X,
  // except for `hilbert` where they index an abstract orthonormal basis.
  Eigen::MatrixXcd vectors;

  // Kernel payload for the two kernel variants.
  Kernel kernel;
};

struct CertCheck {
  std::string name;
  bool pass = false;
  double measured = 0;
  std::string witness;
};

struct CertReport {
  std::vector<CertCheck> checks;
  bool valid() const;
};

/// Clause-by-clause verification of a certificate against its declared
/// variant and parameters, with worst-case witnesses.
CertReport verify_certificate(const PropACertificate& cert, const FiniteMetricSpace& X,
                              double tol = kDefaultTol);

/// l2 certificate of normalized ball indicators: xi_x = 1_{B_S(x)} / |B_S(x)|^(1/2).
/// When R > 0 the variation over d <= R is measured and declared (with a tiny
/// slack so the certificate verifies); R = 0 declares eps = 1.
PropACertificate ball_certificate(const FiniteMetricSpace& X, Dist S, Dist R = 0);

struct ConversionReport {
  std::vector<CertCheck> bounds;  // per-instance quantitative bound checks
  std::vector<std::pair<std::string, double>> measurements;
  bool ok() const;
};

/// Averaging sets to l1: xi_x(y) = |A_x cap ({y} x N)| / |A_x|. The l1
/// variation is measured per instance against 2|A_x delta A_y| / max(|A_x|,|A_y|).
PropACertificate yusets_to_l1(const PropACertificate& cert, const FiniteMetricSpace& X,
                              ConversionReport* report = nullptr);

/// l1 to l2 by the pointwise square root; checks the per-instance contraction
/// ||eta_x - eta_y||^2 <= ||xi_x - xi_y||_1.
PropACertificate l1_to_l2(const PropACertificate& cert, const FiniteMetricSpace& X,
                          ConversionReport* report = nullptr);

/// Weak-annulus form to ball-supported l2: restrict to B_{R+S}(x), normalize,
/// and check the measured variation against 6 eps / (1 - delta).
PropACertificate truncate_normalize(const PropACertificate& cert,
                                    const FiniteMetricSpace& X,
                                    ConversionReport* report = nullptr);

/// Unit vector family to a real positive-type kernel u(x,y) = Re<xi_x, xi_y>,
/// checking the identity ||xi_x - xi_y||^2 = 2 - 2 u(x,y) per pair.
PropACertificate vectors_to_kernel(const PropACertificate& cert,
                                   const FiniteMetricSpace& X,
                                   ConversionReport* report = nullptr);

/// Positive-type kernel to an l2 family: PSD square root, truncation to
/// propagation S_target, columns normalized. Reports ||v^2 - w^2|| and checks
/// the norm floor 1 - 2 eps' and the variation bound 2 sqrt(6 eps'/(1-2 eps'))
/// with eps' = max(eps, ||v^2 - w^2||).
PropACertificate kernel_to_vectors(const PropACertificate& cert,
                                   const FiniteMetricSpace& X, Dist S_target,
                                   ConversionReport* report = nullptr);

/// Finite-propagation real kernels already act on l2(X); relabel clause 7 to
/// clause 8 unchanged.
PropACertificate kernel_real_to_roe(const PropACertificate& cert);

/// PSD square root via eigendecomposition, eigenvalues clamped at zero.
Kernel psd_sqrt(const Kernel& u, double tol = kDefaultTol);

}  // namespace coarse
