#include "qsd/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qsd::numerics {

namespace {
constexpr std::string_view kModule = "numerics";
}

namespace detail {
void throw_nonconvergence(const std::string& what) { throw NonConvergenceError(kModule, what); }
}  // namespace detail

void validate(const Bracket& br) {
  if (!(br.lo < br.hi)) {
    std::ostringstream msg;
    msg << "bracket requires lo < hi, got [" << br.lo << ", " << br.hi << "]";
    throw InvalidBracketError(kModule, msg.str());
  }
  if (!(br.f_lo * br.f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "no sign change on [" << br.lo << ", " << br.hi << "]: f = (" << br.f_lo << ", "
        << br.f_hi << ")";
    throw InvalidBracketError(kModule, msg.str());
  }
}

Bracket Bracket::make(const std::function<double(double)>& f, double lo, double hi) {
  Bracket br{lo, hi, f(lo), f(hi)};
  validate(br);
  return br;
}

double find_root(const std::function<double(double)>& f, const Bracket& bracket, double tol) {
  validate(bracket);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  double a = bracket.lo, b = bracket.hi;
  double fa = bracket.f_lo, fb = bracket.f_hi;
  double c = a, fc = fa;
  double d = b - a, e = d;

  for (int iter = 0; iter < 300; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation, secant when only two points are distinct
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = d;
      }
    } else {
      d = m;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (m > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw NonConvergenceError(kModule, "root finder exceeded its iteration budget");
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  QuadOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  return integrate_adaptive<double>(f, a, b, opt);
}

}  // namespace qsd::numerics
