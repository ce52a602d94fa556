#pragma once

// Laplace transform L(s) = E[exp(-s Z)] of the quasi-stationary law, by five
// routes: direct quadrature, the moment (Taylor) series, two Kampe de Feriet
// forms, and the closed form in modified Bessel functions and incomplete
// Weber integrals.  All of them satisfy
//   (s^2/2) L'' - (s - lambda) L = lambda exp(-s A),  L(0) = 1.

#include <functional>
#include <string_view>

#include "qsd/distribution.hpp"
#include "qsd/specfun.hpp"

namespace qsd::laplace {

using distribution::QsdParams;
using specfun::SeriesControl;

enum class Method { MomentSeries, KdF1, KdF2, BesselForm, Quadrature };

std::string_view method_name(Method m);

struct LaplaceEval {
  double s = 0.0;
  double A = 0.0;
  double value = 0.0;
  Method method = Method::Quadrature;
  double err_estimate = 0.0;
};

LaplaceEval laplace_quadrature(const QsdParams& p, double s);
/// sum_n (-s)^n M_n / n!; throws NonConvergenceError once cancellation
/// among the terms (large s A) would cost more than ctl.rounding_tol.
LaplaceEval laplace_moment_series(const QsdParams& p, double s, const SeriesControl& ctl = {});
LaplaceEval laplace_kdf1(const QsdParams& p, double s, const SeriesControl& ctl = {});
/// Below s = 1e-8 the lambda/s form is replaced by the moment series.
LaplaceEval laplace_kdf2(const QsdParams& p, double s, const SeriesControl& ctl = {});
LaplaceEval laplace_bessel(const QsdParams& p, double s);

LaplaceEval evaluate(const QsdParams& p, double s, Method method, const SeriesControl& ctl = {});

/// 2 sqrt(2s) K_1(2 sqrt(2s)), the transform of H(x) = exp(-2/x).
double stationary_laplace(double s);

/// (s^2/2) L''(s) - (s - lambda) L(s) - lambda exp(-s A) with L'' from
/// central differences at steps h and 2h combined by one Richardson step.
double ode_residual(const QsdParams& p, double s, double h, Method method = Method::BesselForm);
double ode_residual(const QsdParams& p, double s, double h,
                    const std::function<double(double)>& transform);

/// L'(0) by Richardson extrapolation of forward differences (L(h) - 1)/h;
/// should equal -M_1 = 1/lambda - A.
double slope_at_zero(const QsdParams& p, Method method = Method::BesselForm);

}  // namespace qsd::laplace
