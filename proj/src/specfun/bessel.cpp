#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/specfun.hpp"
#include "specfun_detail.hpp"

namespace qsd::specfun {

using detail::kModule;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAsymptoticFrom = 30.0;

void require_positive(double z, std::string_view fn) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::ostringstream msg;
    msg << fn << " requires 0 < z < inf, got z = " << z;
    throw EvaluationDomainError(kModule, msg.str());
  }
}

// K is even in its order: pick the representative with Re >= 0.
Complex canonical_k_order(Complex nu) {
  if (nu.real() < 0.0 || (nu.real() == 0.0 && nu.imag() < 0.0)) return -nu;
  return nu;
}

// sum_k (sign)^k a_k(nu) / z^k, truncated at its smallest term.
Complex hankel_sum(Complex nu, double z, double sign) {
  const Complex mu4 = 4.0 * nu * nu;
  Complex term = 1.0;
  Complex sum = 1.0;
  double previous = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const Complex next = term * (mu4 - odd * odd) / (8.0 * k * z) * sign;
    const double mag = std::abs(next);
    if (mag > previous) break;  // asymptotic series started to diverge
    term = next;
    sum += term;
    previous = mag;
    if (mag <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// e^{z} K_nu(z) from K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt by the
// trapezoid rule, which converges geometrically for this analytic integrand.
// cosh t - 1 = 2 sinh^2(t/2) avoids cancellation near t = 0.  Far out the
// integrand is assembled in log space: for tiny z it only decays once
// t passes log(2/z), where cosh(nu t) alone may overflow.
Complex bessel_k_scaled_trapezoid(Complex nu, double z) {
  const double log_z = std::log(z);
  auto f = [&](double t) -> Complex {
    if (t < 30.0) {
      const double s = std::sinh(0.5 * t);
      return std::exp(-2.0 * z * s * s) * std::cosh(nu * t);
    }
    // z (cosh t - 1) with e^{-t} below rounding
    const double decay = std::exp(t + log_z - std::numbers::ln2) - z;
    return 0.5 * (std::exp(nu * t - decay) + std::exp(-nu * t - decay));
  };
  const double t_stop = 60.0 + std::max(0.0, std::log(2.0 / z));
  // for growing orders the integrand rises until about here, so small
  // early terms say nothing about the tail
  const double t_rise = std::max(0.0, std::log(2.0 * (1.0 + std::abs(nu)) / z));
  // Adds f(k h) for k = first, first + step, ... until the terms are
  // negligible; `abs_sum` accumulates |f| to bound the rounding error, which
  // matters for imaginary orders where cos(alpha t) makes the sum cancel.
  auto outward = [&](double h, int first, int step, double scale, double& abs_sum) {
    Complex sum = 0.0;
    int quiet = 0;
    for (int k = first;; k += step) {
      const Complex v = f(k * h);
      sum += v;
      abs_sum += std::abs(v);
      if (k * h > t_rise && std::abs(v) <= 1e-18 * std::max(scale, std::abs(sum))) {
        if (++quiet >= 3) break;
      } else {
        quiet = 0;
      }
      if (k * h > t_stop) break;
    }
    return sum;
  };
  double h = 0.5;
  double abs_raw = 0.5;
  Complex raw = 0.5 * f(0.0) + outward(h, 1, 1, 0.0, abs_raw);
  Complex estimate = h * raw;
  for (int level = 0; level < 10; ++level) {
    h *= 0.5;
    raw += outward(h, 1, 2, abs_raw, abs_raw);
    const Complex next = h * raw;
    const double diff = std::abs(next - estimate);
    estimate = next;
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * h * abs_raw;
    if (level >= 1 && diff <= 1e-15 * std::abs(estimate) + floor) return estimate;
  }
  throw NonConvergenceError(kModule, "bessel_k: trapezoid rule did not converge");
}

}  // namespace

Complex detail::bessel_i_scaled_series(Complex nu, double z) {
  // I_{-n} = I_n for integer n; the series below needs 1 + nu + k != 0
  if (detail::is_nonpositive_integer(nu)) nu = -nu;
  const double q = 0.25 * z * z;
  Complex term = std::exp(nu * std::log(0.5 * z) - z) * rgamma(nu + 1.0);
  Complex sum = term;
  int small = 0;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (double(k) * (nu + double(k)));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (++small >= 2 && k > 0.5 * z) return sum;
    } else {
      small = 0;
    }
  }
  throw NonConvergenceError(kModule, "bessel_i: series did not converge");
}

Complex bessel_k_scaled(Complex order, double z) {
  require_positive(z, "bessel_k");
  const Complex nu = canonical_k_order(order);
  if (z > kAsymptoticFrom && std::abs(nu) < 0.25 * z) {
    return std::sqrt(kPi / (2.0 * z)) * hankel_sum(nu, z, 1.0);
  }
  return bessel_k_scaled_trapezoid(nu, z);
}

Complex bessel_i_scaled(Complex order, double z) {
  require_positive(z, "bessel_i");
  if (z > kAsymptoticFrom && std::abs(order) < 0.25 * z) {
    // I_nu = (I_nu + I_{-nu})/2 - (sin(nu pi)/pi) K_nu; the even part is the
    // Hankel sum, the odd part is exponentially small relative to it
    const Complex even = hankel_sum(order, z, -1.0) / std::sqrt(2.0 * kPi * z);
    const Complex odd = std::sin(kPi * order) / kPi * std::exp(-2.0 * z) * bessel_k_scaled(order, z);
    return even - odd;
  }
  return detail::bessel_i_scaled_series(order, z);
}

Complex bessel_i(Complex order, double z) { return bessel_i_scaled(order, z) * std::exp(z); }

Complex bessel_k(Complex order, double z) { return bessel_k_scaled(order, z) * std::exp(-z); }

Complex bessel_i(const OrderParam& order, double z) { return bessel_i(order.value(), z); }

double bessel_k(const OrderParam& order, double z) {
  return collapse_to_real(bessel_k(order.value(), z), "bessel_k");
}

}  // namespace qsd::specfun
