#include "qsd/distribution.hpp"

#include <cmath>
#include <sstream>

#include "qsd/errors.hpp"

namespace qsd::distribution {

namespace {
constexpr std::string_view kModule = "distribution";
}

QsdParams make_params(const EigenSolution& eigen) {
  QsdParams p;
  p.eigen = eigen;
  const double z = 2.0 / eigen.A;
  // e^{-1/A} W(2/A) = e^{-2/A} * (e^{1/A} W(2/A))
  p.normalizer = std::exp(-z) * specfun::whittaker_w_scaled(0.0, p.half_xi(), z);
  if (!(p.normalizer > 0.0) || !std::isfinite(p.normalizer)) {
    std::ostringstream msg;
    msg << "normalizer is not positive and finite at A = " << eigen.A << ": " << p.normalizer;
    throw DomainError(kModule, msg.str());
  }
  return p;
}

QsdParams params_for(double A) { return make_params(eigen::principal_lambda(A)); }

namespace {
void require_number(double x, std::string_view fn) {
  if (std::isnan(x)) throw DomainError(kModule, std::string(fn) + ": x is NaN");
}
}  // namespace

double qsd_pdf(const QsdParams& p, double x) {
  require_number(x, "qsd_pdf");
  if (!(x > kXMin) || !(x < p.A())) return 0.0;  // also maps x = A to exactly 0
  const double z = 2.0 / x;
  // e^{-1/x} (1/x) W_1(2/x) = e^{-2/x} (1/x) * (e^{1/x} W_1(2/x))
  return std::exp(-z) * specfun::whittaker_w_scaled(1.0, p.half_xi(), z) / (x * p.normalizer);
}

double qsd_cdf(const QsdParams& p, double x) {
  require_number(x, "qsd_cdf");
  if (x >= p.A()) return 1.0;
  if (!(x > kXMin)) return 0.0;
  const double z = 2.0 / x;
  const double v = std::exp(-z) * specfun::whittaker_w_scaled(0.0, p.half_xi(), z) / p.normalizer;
  return std::min(1.0, v);  // the ratio can exceed 1 by an ulp just below A
}

double stationary_pdf(double x) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 0.0;
  return 2.0 / (x * x) * std::exp(-2.0 / x);
}

double stationary_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(-2.0 / x);
}

}  // namespace qsd::distribution
