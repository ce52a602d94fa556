#include "qsd/moments.hpp"

#include <cmath>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/numerics.hpp"

namespace qsd::moments {

namespace {

constexpr std::string_view kModule = "moments";

void require_order(int n) {
  if (n < 0) throw DomainError(kModule, "moment order must be nonnegative");
}

// xi^2 = 1 - 8 lambda is real on both branches, so (c + xi/2)_k (c - xi/2)_k
// = prod_j ((c + j)^2 - xi^2/4) can be accumulated in real arithmetic.
double xi_squared(const QsdParams& p) { return 1.0 - 8.0 * p.lambda(); }

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Recurrence: return "recurrence";
    case Method::ClosedForm2F2: return "2f2";
    case Method::PowerSeries: return "powerseries";
    case Method::Quadrature: return "quadrature";
  }
  return "unknown";
}

MomentSeries moments_recurrence(const QsdParams& p, int n_max) {
  require_order(n_max);
  MomentSeries s{p, n_max, std::vector<double>(std::size_t(n_max) + 1), Method::Recurrence};
  const double A = p.A();
  const double lambda = p.lambda();
  s.values[0] = 1.0;
  double a_pow = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    a_pow *= A;
    const double nn = double(n);
    s.values[n] = (lambda * a_pow - nn * s.values[n - 1]) / (0.5 * nn * (nn - 1.0) + lambda);
  }
  return s;
}

double recurrence_residual(const MomentSeries& series) {
  const double A = series.params.A();
  const double lambda = series.params.lambda();
  double worst = 0.0;
  double a_pow = 1.0;
  for (int n = 1; n <= series.n_max; ++n) {
    a_pow *= A;
    const double nn = double(n);
    const double lhs =
        (0.5 * nn * (nn - 1.0) + lambda) * series.values[n] + nn * series.values[n - 1];
    worst = std::max(worst, std::abs(lhs - lambda * a_pow) / (lambda * a_pow));
  }
  return worst;
}

double moment_2f2(const QsdParams& p, int n) {
  require_order(n);
  const double A = p.A();
  const double lambda = p.lambda();
  const double nn = double(n);
  const specfun::Complex half_xi = p.half_xi().value();
  const specfun::Complex f = specfun::hyp2f2(1.0, -nn, 1.5 + half_xi - nn, 1.5 - half_xi - nn, 2.0 / A);
  const double prefactor = 2.0 * lambda * std::pow(A, n) / (nn * (nn - 1.0) + 2.0 * lambda);
  return prefactor * specfun::collapse_to_real(f, "moment_2f2");
}

double moment_powerseries(const QsdParams& p, int n) {
  require_order(n);
  const double quarter_xi2 = 0.25 * xi_squared(p);
  const double A = p.A();

  // (-2)^n n! / prod_{j<n} ((1/2 + j)^2 - xi^2/4)
  double prefactor = 1.0;
  for (int j = 0; j < n; ++j) {
    const double c = 0.5 + j;
    prefactor *= -2.0 * double(j + 1) / (c * c - quarter_xi2);
  }

  // sum_k prod_{j<k} ((-1/2 + j)^2 - xi^2/4) (-A/2)^k / k!
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= n; ++k) {
    const double c = -0.5 + (k - 1);
    term *= (c * c - quarter_xi2) * (-0.5 * A) / double(k);
    sum += term;
  }
  return prefactor * sum;
}

double moment_quadrature(const QsdParams& p, int n) {
  require_order(n);
  auto f = [&](double x) { return std::pow(x, n) * distribution::qsd_pdf(p, x); };
  return numerics::integrate(f, 0.0, p.A(), 1e-13).value;
}

MomentSeries moment_series(const QsdParams& p, int n_max, Method method) {
  if (method == Method::Recurrence) return moments_recurrence(p, n_max);
  require_order(n_max);
  MomentSeries s{p, n_max, std::vector<double>(std::size_t(n_max) + 1), method};
  for (int n = 0; n <= n_max; ++n) {
    switch (method) {
      case Method::ClosedForm2F2: s.values[n] = moment_2f2(p, n); break;
      case Method::PowerSeries: s.values[n] = moment_powerseries(p, n); break;
      case Method::Quadrature: s.values[n] = moment_quadrature(p, n); break;
      case Method::Recurrence: break;
    }
  }
  return s;
}

double variance(const QsdParams& p) {
  const double A = p.A();
  const double l = p.lambda();
  const double d = A * l - 1.0;
  return (l - d * d) / (l * l * (1.0 + l));
}

double variance_from_moments(const QsdParams& p) {
  const MomentSeries s = moments_recurrence(p, 2);
  return s.values[2] - s.values[1] * s.values[1];
}

PositivityCheck positivity_at(double A, double lambda) {
  if (!(A > 0.0) || !(lambda > 0.0)) throw DomainError(kModule, "A and lambda must be positive");
  const double d = A * lambda - 1.0;
  return {A - 1.0 / lambda, lambda - d * d};
}

}  // namespace qsd::moments
