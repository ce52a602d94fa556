#pragma once

// Root finding and quadrature shared by every other module.
//
// The adaptive rule is a 10/21-point Gauss-Kronrod pair with global
// bisection of the worst segment.  Semi-infinite ranges are mapped onto
// [0, 1) by x = a + t/(1-t).  A double-exponential rule (tanh-sinh on finite
// ranges, exp-sinh on [a, inf)) is provided as an independent second scheme
// and for integrands with algebraic endpoint singularities.
//
// Both quadratures are templates over the value type so that complex-valued
// integrands (imaginary Bessel/Whittaker orders) share one implementation.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qsd/errors.hpp"

namespace qsd::numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;

  /// Evaluates f at both ends; throws InvalidBracketError unless lo < hi and
  /// f_lo * f_hi < 0.
  static Bracket make(const std::function<double(double)>& f, double lo, double hi);
};

void validate(const Bracket& bracket);

/// Brent's method.  The returned point always lies inside the initial bracket
/// and the final bracket width is at most `tol` (plus a few ulps of the root).
double find_root(const std::function<double(double)>& f, const Bracket& bracket, double tol);

template <class T>
struct BasicQuadResult {
  T value{};
  double abs_err_estimate = 0.0;
  int evaluations = 0;
  bool converged = true;
};

using QuadResult = BasicQuadResult<double>;

struct QuadOptions {
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  int max_evaluations = 400000;
  bool throw_on_budget = true;
};

namespace detail {

// 21-point Kronrod abscissae on [0, 1]; the odd entries are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.0,
    0.14887433898163122,
    0.2943928627014602,
    0.43339539412924721,
    0.56275713466860466,
    0.67940956829902444,
    0.7808177265864169,
    0.86506336668898454,
    0.93015749135570824,
    0.97390652851717174,
    0.99565716302580809,
};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.1494455540029169,
    0.14773910490133849,
    0.14277593857706009,
    0.13470921731147334,
    0.12349197626206584,
    0.10938715880229764,
    0.093125454583697601,
    0.075039674810919957,
    0.054755896574351995,
    0.032558162307964725,
    0.011694638867371874,
};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.29552422471475287, 0.26926671930999635, 0.21908636251598204,
    0.14945134915058059, 0.066671344308688138,
};

template <class T>
struct Segment {
  double a;
  double b;
  T value;
  double err;
};

template <class T>
bool finite_value(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
}

template <class T, class G>
Segment<T> kronrod21(G& g, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = g(c);
  T kronrod = fc * kKronrodWeights[0];
  T gauss{};
  for (std::size_t i = 1; i < kKronrodNodes.size(); ++i) {
    const double dx = h * kKronrodNodes[i];
    const T pair = g(c - dx) + g(c + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[(i - 1) / 2] * pair;
  }
  return {a, b, kronrod * h, std::abs(kronrod - gauss) * h};
}

[[noreturn]] void throw_nonconvergence(const std::string& what);

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]; b may be +infinity.
template <class T, class F>
BasicQuadResult<T> integrate_adaptive(F&& f, double a, double b, const QuadOptions& opt = {}) {
  using detail::Segment;
  BasicQuadResult<T> out;
  if (a == b) return out;
  if (b < a) {
    auto r = integrate_adaptive<T>(f, b, a, opt);
    r.value = -r.value;
    return r;
  }

  const bool semi_infinite = std::isinf(b);
  int evaluations = 0;
  auto g = [&](double x) -> T {
    ++evaluations;
    T v;
    double at = x;
    if (semi_infinite) {
      const double one_minus = 1.0 - x;
      at = a + x / one_minus;
      v = f(at) / (one_minus * one_minus);
    } else {
      v = f(x);
    }
    if (!detail::finite_value(v)) {
      detail::throw_nonconvergence("integrand is not finite at x = " + std::to_string(at));
    }
    return v;
  };
  const double lo = semi_infinite ? 0.0 : a;
  const double hi = semi_infinite ? 1.0 : b;

  auto worse = [](const Segment<T>& l, const Segment<T>& r) { return l.err < r.err; };
  std::vector<Segment<T>> heap;
  std::vector<Segment<T>> finished;
  heap.push_back(detail::kronrod21<T>(g, lo, hi));

  auto totals = [&](T& value, double& err) {
    value = T{};
    err = 0.0;
    for (const auto& s : heap) {
      value += s.value;
      err += s.err;
    }
    for (const auto& s : finished) {
      value += s.value;
      err += s.err;
    }
  };

  T value;
  double err;
  totals(value, err);
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
    if (heap.empty()) break;
    if (evaluations + 42 > opt.max_evaluations) {
      out.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Segment<T> worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      finished.push_back(worst);  // cannot be split further in double precision
      continue;
    }
    heap.push_back(detail::kronrod21<T>(g, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(detail::kronrod21<T>(g, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), worse);
    totals(value, err);
  }
  totals(value, err);
  out.value = value;
  out.abs_err_estimate = err;
  out.evaluations = evaluations;
  if (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) out.converged = false;
  if (!out.converged && opt.throw_on_budget) {
    detail::throw_nonconvergence("adaptive quadrature budget exhausted (err estimate " +
                                 std::to_string(err) + ")");
  }
  return out;
}

/// Real integrand, `tol` used as both the absolute and the relative target.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-11);

/// Double-exponential quadrature: tanh-sinh on finite [a, b], exp-sinh on
/// [a, inf).  The step is halved until two successive levels agree to `tol`
/// relative.  Endpoint singularities of algebraic type are handled without
/// special treatment as long as f is finite in the open interval.
template <class T, class F>
BasicQuadResult<T> integrate_double_exponential(F&& f, double a, double b, double tol = 1e-13,
                                                int max_levels = 9) {
  constexpr double half_pi = 0.5 * std::numbers::pi;
  constexpr double t_cap = 6.5;
  BasicQuadResult<T> out;
  if (a == b) return out;
  const bool semi_infinite = std::isinf(b);
  const double d = 0.5 * (b - a);
  int evaluations = 0;

  // Returns weight * f(x(t)); zero once the abscissa collapses onto an endpoint.
  auto term = [&](double t) -> T {
    const double sh = half_pi * std::sinh(t);
    const double ch = half_pi * std::cosh(t);
    double x;
    double w;
    if (semi_infinite) {
      const double e = std::exp(sh);
      x = a + e;
      w = ch * e;
      if (e == 0.0 || !std::isfinite(x) || x == a) return T{};
    } else {
      // distance to the nearer endpoint, computed without cancellation
      const double em = std::exp(-2.0 * std::abs(sh));
      const double delta = d * 2.0 * em / (1.0 + em);
      x = t >= 0 ? b - delta : a + delta;
      if (delta == 0.0 || x == a || x == b) return T{};
      const double sech = 2.0 * std::exp(-std::abs(sh)) / (1.0 + em);
      w = d * ch * sech * sech;
    }
    ++evaluations;
    const T v = f(x);
    if (!detail::finite_value(v)) {
      detail::throw_nonconvergence("integrand is not finite at x = " + std::to_string(x));
    }
    return w * v;
  };

  // The coarsest level samples the whole range |t| <= t_cap.  Finer levels
  // only visit the window where that level saw non-negligible terms (plus one
  // coarse step on each side), which keeps narrow peaks away from t = 0 in
  // view without paying for the empty tails.
  double h = 0.5;
  const int k_cap = static_cast<int>(t_cap / h);
  T raw{};
  double max_mag = 0.0;
  std::vector<double> mags;
  mags.reserve(2 * k_cap + 1);
  for (int k = -k_cap; k <= k_cap; ++k) {
    const T v = term(k * h);
    raw += v;
    mags.push_back(std::abs(v));
    max_mag = std::max(max_mag, mags.back());
  }
  int k_lo = k_cap;
  int k_hi = -k_cap;
  for (int k = -k_cap; k <= k_cap; ++k) {
    if (mags[k + k_cap] > 1e-20 * max_mag) {
      k_lo = std::min(k_lo, k);
      k_hi = std::max(k_hi, k);
    }
  }
  // Nothing seen on the coarse grid: a peak may sit between nodes, so keep
  // refining over the full range rather than reporting zero.
  const double t_lo = max_mag == 0.0 ? -t_cap : std::max(-t_cap, (k_lo - 1) * h);
  const double t_hi = max_mag == 0.0 ? t_cap : std::min(t_cap, (k_hi + 1) * h);

  T estimate = h * raw;
  double diff = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    const int first = static_cast<int>(std::ceil(t_lo / h)) | 1;  // odd multiples only
    for (int k = first; k * h <= t_hi; k += 2) raw += term(k * h);
    const T next = h * raw;
    diff = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && estimate != T{} && diff <= tol * std::abs(estimate)) break;
  }
  out.value = estimate;
  out.abs_err_estimate = diff;
  out.evaluations = evaluations;
  out.converged = diff <= tol * std::abs(estimate) || diff <= std::numeric_limits<double>::min();
  return out;
}

}  // namespace qsd::numerics
