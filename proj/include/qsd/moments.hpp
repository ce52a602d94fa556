#pragma once

// Moments M_n = E[Z^n] of the quasi-stationary law, by four routes:
// the three-term recurrence, the terminating 2F2 closed form, the explicit
// power-series form and direct quadrature of x^n q_A(x).

#include <string_view>
#include <vector>

#include "qsd/distribution.hpp"

namespace qsd::moments {

using distribution::QsdParams;

enum class Method { Recurrence, ClosedForm2F2, PowerSeries, Quadrature };

std::string_view method_name(Method m);

struct MomentSeries {
  QsdParams params;
  int n_max = 0;
  std::vector<double> values;
  Method method = Method::Recurrence;
};

/// (n(n-1)/2 + lambda) M_n + n M_{n-1} = lambda A^n, M_0 = 1.
MomentSeries moments_recurrence(const QsdParams& p, int n_max);

/// Largest relative residual of the recurrence over a computed series.
double recurrence_residual(const MomentSeries& series);

/// M_n = 2 lambda A^n / (n(n-1) + 2 lambda) * 2F2[1, -n; 3/2 + xi/2 - n, 3/2 - xi/2 - n; 2/A]
double moment_2f2(const QsdParams& p, int n);

/// M_n = (-2)^n n! / ((1/2+xi/2)_n (1/2-xi/2)_n)
///       * sum_k (-1/2+xi/2)_k (-1/2-xi/2)_k (-A/2)^k / k!
double moment_powerseries(const QsdParams& p, int n);

double moment_quadrature(const QsdParams& p, int n);

/// All n in [0, n_max] by one of the four routes.
MomentSeries moment_series(const QsdParams& p, int n_max, Method method);

/// (lambda - (A lambda - 1)^2) / (lambda^2 (1 + lambda))
double variance(const QsdParams& p);
/// M_2 - M_1^2 from the recurrence.
double variance_from_moments(const QsdParams& p);

/// The two positivity constraints behind the analytic eigenvalue bounds:
/// M_1 = A - 1/lambda > 0 and lambda - (A lambda - 1)^2 > 0.
struct PositivityCheck {
  double first_moment;
  double variance_numerator;
};
PositivityCheck positivity_at(double A, double lambda);

}  // namespace qsd::moments
