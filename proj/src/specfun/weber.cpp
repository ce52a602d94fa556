#include <cmath>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/numerics.hpp"
#include "qsd/specfun.hpp"
#include "specfun_detail.hpp"

namespace qsd::specfun {

using detail::kModule;

Evaluation weber_incomplete_eval(BesselKind kind, double u, double A, Complex order,
                                 QuadratureRule rule) {
  if (!(u > 0.0)) {
    std::ostringstream msg;
    msg << "weber_incomplete: the integral diverges at the origin (u = " << u << ")";
    throw DivergenceError(kModule, msg.str());
  }
  if (!(A > 0.0)) throw DomainError(kModule, "weber_incomplete requires A > 0");
  const double c = A / 8.0;
  // Bessel factors are used in exponentially scaled form so that the
  // Gaussian and the e^{+-x} growth combine in a single exponent.
  auto f = [&](double x) -> Complex {
    if (kind == BesselKind::I) {
      const double g = std::exp(-c * x * x + x);
      if (g == 0.0) return 0.0;
      return g * bessel_i_scaled(order, x) / (x * x);
    }
    const double g = std::exp(-c * x * x - x);
    if (g == 0.0) return 0.0;
    return g * bessel_k_scaled(order, x) / (x * x);
  };
  if (rule == QuadratureRule::DoubleExponential) {
    const auto r = numerics::integrate_double_exponential<Complex>(f, u, numerics::kInf, 1e-13, 10);
    if (!r.converged && r.abs_err_estimate > 1e-9 * std::abs(r.value)) {
      throw NonConvergenceError(kModule, "weber_incomplete: double-exponential rule did not converge");
    }
    return {r.value, r.abs_err_estimate};
  }
  numerics::QuadOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-13;
  const auto r = numerics::integrate_adaptive<Complex>(f, u, numerics::kInf, opt);
  return {r.value, r.abs_err_estimate};
}

Complex weber_incomplete(BesselKind kind, double u, double A, const OrderParam& order,
                         QuadratureRule rule) {
  const Evaluation e = weber_incomplete_eval(kind, u, A, order.value(), rule);
  if (kind == BesselKind::K) return collapse_to_real(e.value, "weber_incomplete(K)");
  return e.value;
}

}  // namespace qsd::specfun
