#include "qsd/laplace.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/numerics.hpp"

namespace qsd::laplace {

namespace {

constexpr std::string_view kModule = "laplace";
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kKdf2SmallS = 1e-8;

using specfun::Complex;

void require_s(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    std::ostringstream msg;
    msg << "s must be finite and nonnegative, got " << s;
    throw DomainError(kModule, msg.str());
  }
}

LaplaceEval make(const QsdParams& p, double s, double value, Method m, double err) {
  return {s, p.A(), value, m, err};
}

// -1/2 - xi/2, -1/2 + xi/2 and the denominators 1/2 -+ xi/2
struct KdfParams {
  Complex a1, a2, b1, b2;
};

KdfParams kdf_params(const QsdParams& p) {
  const Complex h = p.half_xi().value();
  return {-0.5 - h, -0.5 + h, 0.5 - h, 0.5 + h};
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::MomentSeries: return "moment_series";
    case Method::KdF1: return "kdf1";
    case Method::KdF2: return "kdf2";
    case Method::BesselForm: return "bessel";
    case Method::Quadrature: return "quadrature";
  }
  return "unknown";
}

LaplaceEval laplace_quadrature(const QsdParams& p, double s) {
  if (!std::isfinite(s)) throw DomainError(kModule, "s must be finite");
  // negative s is allowed here: the transform of a compactly supported law is entire
  auto f = [&](double x) { return std::exp(-s * x) * distribution::qsd_pdf(p, x); };
  const auto r = numerics::integrate(f, 0.0, p.A(), 1e-14);
  return make(p, s, r.value, Method::Quadrature, r.abs_err_estimate);
}

LaplaceEval laplace_moment_series(const QsdParams& p, double s, const SeriesControl& ctl) {
  require_s(s);
  if (s == 0.0) return make(p, s, 1.0, Method::MomentSeries, 0.0);
  const double A = p.A();
  const double lambda = p.lambda();
  const double x = -s * A;
  // m_n = M_n / A^n keeps the recurrence O(1):
  // (n(n-1)/2 + lambda) m_n = lambda - n m_{n-1} / A
  double m = 1.0;
  double coeff = 1.0;  // x^n / n!
  double sum = 1.0;
  double max_term = 1.0;
  int small = 0;
  for (int n = 1; n <= ctl.max_terms; ++n) {
    const double nn = double(n);
    m = (lambda - nn * m / A) / (0.5 * nn * (nn - 1.0) + lambda);
    coeff *= x / nn;
    const double term = coeff * m;
    sum += term;
    max_term = std::max(max_term, std::abs(term));
    if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
      if (++small >= 3) {
        if (4.0 * kEps * max_term > ctl.rounding_tol * std::abs(sum)) {
          std::ostringstream msg;
          msg << "moment series at s A = " << s * A << " loses too many digits to cancellation";
          throw NonConvergenceError(kModule, msg.str());
        }
        return make(p, s, sum, Method::MomentSeries,
                    3.0 * std::abs(term) + kEps * max_term * nn);
      }
    } else {
      small = 0;
    }
  }
  throw NonConvergenceError(kModule, "moment series did not converge within max_terms");
}

LaplaceEval laplace_kdf1(const QsdParams& p, double s, const SeriesControl& ctl) {
  require_s(s);
  const KdfParams k = kdf_params(p);
  const auto e = specfun::kampe_de_feriet_eval(k.a1, k.a2, k.b1, k.b2, -s * p.A(), 2.0 * s, ctl);
  return make(p, s, specfun::collapse_to_real(e.value, "laplace_kdf1"), Method::KdF1, e.abs_err);
}

LaplaceEval laplace_kdf2(const QsdParams& p, double s, const SeriesControl& ctl) {
  require_s(s);
  if (s < kKdf2SmallS) {
    LaplaceEval r = laplace_moment_series(p, s, ctl);
    r.method = Method::KdF2;
    return r;
  }
  const KdfParams k = kdf_params(p);
  const auto e = specfun::kampe_de_feriet_eval(k.a1, k.a2, k.a1, k.a2, -s * p.A(), 2.0 * s, ctl);
  const double f = specfun::collapse_to_real(e.value, "laplace_kdf2");
  const double factor = p.lambda() / s;
  const double value = factor * (f - std::exp(-s * p.A()));
  return make(p, s, value, Method::KdF2, factor * (e.abs_err + 2.0 * kEps * std::abs(f)));
}

LaplaceEval laplace_bessel(const QsdParams& p, double s) {
  require_s(s);
  if (s == 0.0) return make(p, s, 1.0, Method::BesselForm, 0.0);
  const double A = p.A();
  const double u = 2.0 * std::sqrt(2.0 * s);
  const Complex xi = p.eigen.xi.value();
  const Complex iu = specfun::bessel_i(xi, u);
  const Complex ku = specfun::bessel_k(xi, u);
  constexpr auto rule = specfun::QuadratureRule::DoubleExponential;
  const auto wi = specfun::weber_incomplete_eval(specfun::BesselKind::I, u, A, xi, rule);
  const auto wk = specfun::weber_incomplete_eval(specfun::BesselKind::K, u, A, xi, rule);
  const double lambda = p.lambda();
  const Complex homogeneous = u * ku / p.normalizer;
  const Complex t1 = u * ku * wi.value;
  const Complex t2 = u * iu * wk.value;
  const Complex value = homogeneous + 8.0 * lambda * (t1 - t2);
  const double err = 8.0 * lambda * u * (std::abs(ku) * wi.abs_err + std::abs(iu) * wk.abs_err) +
                     8.0 * kEps * (std::abs(homogeneous) + 8.0 * lambda * (std::abs(t1) + std::abs(t2)));
  return make(p, s, specfun::collapse_to_real(value, "laplace_bessel"), Method::BesselForm, err);
}

LaplaceEval evaluate(const QsdParams& p, double s, Method method, const SeriesControl& ctl) {
  switch (method) {
    case Method::MomentSeries: return laplace_moment_series(p, s, ctl);
    case Method::KdF1: return laplace_kdf1(p, s, ctl);
    case Method::KdF2: return laplace_kdf2(p, s, ctl);
    case Method::BesselForm: return laplace_bessel(p, s);
    case Method::Quadrature: return laplace_quadrature(p, s);
  }
  throw DomainError(kModule, "unknown method");
}

double stationary_laplace(double s) {
  require_s(s);
  if (s == 0.0) return 1.0;
  const double u = 2.0 * std::sqrt(2.0 * s);
  return u * specfun::bessel_k(specfun::OrderParam::real(1.0), u);
}

double ode_residual(const QsdParams& p, double s, double h,
                    const std::function<double(double)>& transform) {
  if (!(h > 0.0) || !(s - 2.0 * h > 0.0)) {
    std::ostringstream msg;
    msg << "ode_residual needs h > 0 and s > 2h, got s = " << s << ", h = " << h;
    throw DomainError(kModule, msg.str());
  }
  const double l0 = transform(s);
  const double d1 = (transform(s + h) - 2.0 * l0 + transform(s - h)) / (h * h);
  const double d2 = (transform(s + 2.0 * h) - 2.0 * l0 + transform(s - 2.0 * h)) / (4.0 * h * h);
  const double second = (4.0 * d1 - d2) / 3.0;
  const double lambda = p.lambda();
  return 0.5 * s * s * second - (s - lambda) * l0 - lambda * std::exp(-s * p.A());
}

double ode_residual(const QsdParams& p, double s, double h, Method method) {
  return ode_residual(p, s, h, [&](double t) { return evaluate(p, t, method).value; });
}

double slope_at_zero(const QsdParams& p, Method method) {
  // Forward differences D(h) = (L(h) - 1)/h = L'(0) + c1 h + c2 h^2 + ...,
  // eliminated term by term on h, h/2, h/4, h/8.
  constexpr int kLevels = 4;
  const double h0 = 1e-2 / std::max(1.0, p.A());
  double table[kLevels][kLevels];
  double h = h0;
  for (int i = 0; i < kLevels; ++i, h *= 0.5) {
    table[i][0] = (evaluate(p, h, method).value - 1.0) / h;
    double factor = 1.0;
    for (int j = 1; j <= i; ++j) {
      factor *= 2.0;
      table[i][j] = (factor * table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
    }
  }
  return table[kLevels - 1][kLevels - 1];
}

}  // namespace qsd::laplace
