#pragma once

// Quasi-stationary pdf q_A and cdf Q_A on [0, A], and the A -> infinity
// stationary law H(x) = exp(-2/x).

#include "qsd/eigen.hpp"

namespace qsd::distribution {

using eigen::EigenSolution;

struct QsdParams {
  EigenSolution eigen;
  /// C = e^{-1/A} W_{0,xi/2}(2/A)
  double normalizer = 0.0;

  double A() const noexcept { return eigen.A; }
  double lambda() const noexcept { return eigen.lambda; }
  /// The Whittaker/Bessel order xi/2 used by the pdf and cdf.
  specfun::OrderParam half_xi() const { return eigen.xi.scaled(0.5); }
};

/// Below x_min = 2/700 the pdf and cdf are returned as exactly zero: there
/// both are bounded by roughly exp(-1/x) / x^2 < 1e-300.
inline constexpr double kZMax = 700.0;
inline constexpr double kXMin = 2.0 / kZMax;

QsdParams make_params(const EigenSolution& eigen);
/// Shorthand for make_params(principal_lambda(A)).
QsdParams params_for(double A);

double qsd_pdf(const QsdParams& p, double x);
double qsd_cdf(const QsdParams& p, double x);

double stationary_pdf(double x);
double stationary_cdf(double x);

}  // namespace qsd::distribution
