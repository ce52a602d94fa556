#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/numerics.hpp"
#include "qsd/specfun.hpp"
#include "specfun_detail.hpp"

namespace qsd::specfun {

using detail::kModule;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kAsymptoticTry = 12.0;
constexpr double kConnectionMaxZ = 1.0;
constexpr double kIntegerGuard = 1e-3;
// Beyond this |Im mu| the integral loses digits to oscillation.  The
// connection formula then has no cancellation as long as z stays below a
// few times |Im mu| (past that the M terms grow like e^z).
constexpr double kLargeImagOrder = 4.0;
constexpr double kConnectionZPerImag = 2.5;
constexpr double kConnectionAccept = 1e-10;

void require_positive(double z, std::string_view fn) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::ostringstream msg;
    msg << fn << " requires 0 < z < inf, got z = " << z;
    throw EvaluationDomainError(kModule, msg.str());
  }
}

// W is even in mu; evaluate with Re(mu) >= 0 (Im(mu) >= 0 when Re(mu) = 0).
// Adding +0.0 turns a negative zero into a positive one so that mu and -mu
// reach exactly the same bits.
Complex canonical_mu(Complex mu) {
  if (mu.real() < 0.0 || (mu.real() == 0.0 && mu.imag() < 0.0)) {
    return {-mu.real() + 0.0, -mu.imag() + 0.0};
  }
  return {mu.real() + 0.0, mu.imag() + 0.0};
}

struct Attempt {
  bool ok = false;
  Evaluation eval;
};

// e^{z/2} W ~ z^kappa sum_n (1/2+mu-kappa)_n (1/2-mu-kappa)_n / n! (-z)^{-n}
Attempt asymptotic_scaled(double kappa, Complex mu, double z) {
  const Complex p = 0.5 + mu - kappa;
  const Complex q = 0.5 - mu - kappa;
  Complex term = 1.0;
  Complex sum = 1.0;
  double previous = 1.0;
  bool ok = false;
  double last = 0.0;
  for (int n = 1; n < 400; ++n) {
    const Complex next = term * (p + double(n - 1)) * (q + double(n - 1)) / (-z * double(n));
    const double mag = std::abs(next);
    if (mag == 0.0) {  // terminating expansion: exact
      ok = true;
      last = 0.0;
      break;
    }
    if (mag > previous) {
      ok = previous <= 2e-16 * std::abs(sum);
      last = previous;
      break;
    }
    term = next;
    sum += term;
    previous = mag;
    if (mag <= 1e-17 * std::abs(sum)) {
      ok = true;
      last = mag;
      break;
    }
  }
  const Complex scale = std::pow(z, kappa);
  return {ok, {scale * sum, std::abs(scale) * (last + 4.0 * kEps * std::abs(sum))}};
}

// W = Gamma(-2mu)/Gamma(1/2-mu-kappa) M_{kappa,mu} + (mu -> -mu).  The
// coefficients of complex mu are formed in log space: for large imaginary mu
// each Gamma under- or overflows while their ratio stays moderate.
Evaluation connection_scaled(double kappa, Complex mu, double z) {
  auto term = [&](Complex m) -> Complex {
    if (detail::is_nonpositive_integer(0.5 - m - kappa)) return 0.0;
    const Complex f = hyp1f1(0.5 + m - kappa, 1.0 + 2.0 * m, z);
    if (m.imag() == 0.0) return gamma(-2.0 * m) * rgamma(0.5 - m - kappa) * std::pow(z, 0.5 + m) * f;
    return std::exp(detail::log_gamma(-2.0 * m) - detail::log_gamma(0.5 - m - kappa) +
                    (0.5 + m) * std::log(z) + std::log(f));
  };
  const Complex t1 = term(mu);
  const Complex t2 = term(-mu);
  return {t1 + t2, 64.0 * kEps * (std::abs(t1) + std::abs(t2))};
}

// e^{z/2} W_{kappa,mu}(z) = z^kappa / Gamma(a) int_0^inf e^{-t} t^{a-1} (1 + t/z)^{mu+kappa-1/2} dt
// with a = 1/2 + mu - kappa, valid for Re(a) > 0.
//
// For complex a the factor t^{i Im a} oscillates and the integral is smaller
// than the integral of its modulus by about exp(-pi |Im a| / 2).  Turning the
// ray to t = r e^{i theta}, theta toward arg(a), removes most of that
// cancellation; e^{-t} still decays in the sector swept, so the value is
// unchanged.
Evaluation integral_scaled_direct(double kappa, Complex mu, double z) {
  const Complex a = 0.5 + mu - kappa;
  const Complex c = mu + kappa - 0.5;
  constexpr double kMaxTurn = 1.3;
  const double theta = std::clamp(std::arg(a), -kMaxTurn, kMaxTurn);
  const Complex w = std::polar(1.0, theta);
  auto f = [&](double r) -> Complex {
    const Complex t = r * w;
    return w * std::exp(-t + (a - 1.0) * (std::log(r) + Complex(0.0, theta)) + c * std::log(1.0 + t / z));
  };
  const auto r = numerics::integrate_double_exponential<Complex>(f, 0.0, numerics::kInf, 1e-14, 10);
  if (!r.converged && r.abs_err_estimate > 1e-10 * std::abs(r.value)) {
    throw NonConvergenceError(kModule, "whittaker_w: integral representation did not converge");
  }
  const Complex factor = std::pow(z, kappa) * rgamma(a);
  return {factor * r.value,
          std::abs(factor) * (r.abs_err_estimate + 4.0 * kEps * std::abs(r.value))};
}

Evaluation integral_scaled(double kappa, Complex mu, double z) {
  // Shift kappa down until Re(1/2 + mu - kappa0) >= 1/4, then recur upward with
  // W_{k+1} = (z - 2k) W_k - (k - mu - 1/2)(k + mu - 1/2) W_{k-1}; W is the
  // dominant solution of this recurrence in the upward direction.
  const double re_a = 0.5 + mu.real() - kappa;
  const int shift = re_a >= 0.25 ? 0 : int(std::ceil(0.25 - re_a));
  if (shift == 0) return integral_scaled_direct(kappa, mu, z);
  const double k0 = kappa - shift;
  Evaluation lower = integral_scaled_direct(k0 - 1.0, mu, z);
  Evaluation current = integral_scaled_direct(k0, mu, z);
  double k = k0;
  for (int step = 0; step < shift; ++step) {
    const Complex coeff = (k - mu - 0.5) * (k + mu - 0.5);
    const Complex next = (z - 2.0 * k) * current.value - coeff * lower.value;
    const double err = std::abs(z - 2.0 * k) * current.abs_err + std::abs(coeff) * lower.abs_err +
                       4.0 * kEps * (std::abs(z - 2.0 * k) * std::abs(current.value) +
                                     std::abs(coeff) * std::abs(lower.value));
    lower = current;
    current = {next, err};
    k += 1.0;
  }
  return current;
}

double distance_to_integer(double x) { return std::abs(x - std::nearbyint(x)); }

}  // namespace

Complex whittaker_m(double kappa, Complex mu, double z) {
  require_positive(z, "whittaker_m");
  if (detail::is_nonpositive_integer(1.0 + 2.0 * mu)) {
    std::ostringstream msg;
    msg << "whittaker_m: 1 + 2 mu = " << (1.0 + 2.0 * mu).real() << " is a nonpositive integer";
    throw ParameterPoleError(kModule, msg.str());
  }
  const Complex prefactor = std::exp(-0.5 * z + (0.5 + mu) * std::log(z));
  return prefactor * hyp1f1(0.5 + mu - kappa, 1.0 + 2.0 * mu, z);
}

Complex whittaker_m(double a, const OrderParam& b, double z) { return whittaker_m(a, b.value(), z); }

Evaluation whittaker_w_scaled_eval(double kappa, Complex mu, double z, WhittakerRoute route) {
  require_positive(z, "whittaker_w");
  mu = canonical_mu(mu);
  const bool integer_order = mu.imag() == 0.0 && distance_to_integer(2.0 * mu.real()) < kIntegerGuard;
  switch (route) {
    case WhittakerRoute::Asymptotic: {
      const Attempt a = asymptotic_scaled(kappa, mu, z);
      if (!a.ok) {
        throw NonConvergenceError(kModule, "whittaker_w: asymptotic series not accurate at this z");
      }
      return a.eval;
    }
    case WhittakerRoute::Connection:
      if (integer_order) {
        throw ParameterPoleError(kModule, "whittaker_w: connection formula needs 2 mu off the integers");
      }
      return connection_scaled(kappa, mu, z);
    case WhittakerRoute::Integral:
      return integral_scaled(kappa, mu, z);
    case WhittakerRoute::Automatic:
      break;
  }
  if (z >= kAsymptoticTry) {
    const Attempt a = asymptotic_scaled(kappa, mu, z);
    if (a.ok) return a.eval;
  }
  if (z <= kConnectionMaxZ && !integer_order) return connection_scaled(kappa, mu, z);
  const double im = std::abs(mu.imag());
  if (im >= kLargeImagOrder && z <= kConnectionZPerImag * im) return connection_scaled(kappa, mu, z);
  try {
    return integral_scaled(kappa, mu, z);
  } catch (const NonConvergenceError&) {
    if (integer_order) throw;
    const Evaluation c = connection_scaled(kappa, mu, z);
    if (c.abs_err > kConnectionAccept * std::abs(c.value)) throw;
    return c;
  }
}

Complex whittaker_w(double kappa, Complex mu, double z, WhittakerRoute route) {
  return whittaker_w_scaled_eval(kappa, mu, z, route).value * std::exp(-0.5 * z);
}

double whittaker_w_scaled(double a, const OrderParam& b, double z) {
  return collapse_to_real(whittaker_w_scaled_eval(a, b.value(), z).value, "whittaker_w");
}

double whittaker_w(double a, const OrderParam& b, double z) {
  return whittaker_w_scaled(a, b, z) * std::exp(-0.5 * z);
}

}  // namespace qsd::specfun
