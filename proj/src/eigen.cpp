#include "qsd/eigen.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/numerics.hpp"

namespace qsd::eigen {

namespace {

constexpr std::string_view kModule = "eigen";

void require_positive_A(double A) {
  if (!(A > 0.0) || !std::isfinite(A)) {
    std::ostringstream msg;
    msg << "A must be positive and finite, got " << A;
    throw DomainError(kModule, msg.str());
  }
}

double bracket_scale(double A, const LambdaBounds& b) {
  return std::max(std::abs(eigen_objective(A, b.lo)), std::abs(eigen_objective(A, b.hi)));
}

}  // namespace

OrderParam xi_of_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "lambda must be positive and finite, got " << lambda;
    throw DomainError(kModule, msg.str());
  }
  const double d = 1.0 - 8.0 * lambda;
  if (d >= 0.0) return OrderParam::real(std::sqrt(d));
  return OrderParam::imaginary(std::sqrt(-d));
}

LambdaBounds lambda_bounds(double A) {
  require_positive_A(A);
  return {1.0 / A + 1.0 / (A + A * A), 1.0 / A + (1.0 + std::sqrt(4.0 * A + 1.0)) / (2.0 * A * A)};
}

double eigen_objective(double A, double lambda) {
  require_positive_A(A);
  // e^{1/A} W = e^{z/2} W at z = 2/A
  return specfun::whittaker_w_scaled(1.0, xi_of_lambda(lambda).scaled(0.5), 2.0 / A);
}

EigenSolution solution_at(double A, double lambda) {
  const LambdaBounds b = lambda_bounds(A);
  EigenSolution sol;
  sol.A = A;
  sol.lambda = lambda;
  sol.xi = xi_of_lambda(lambda);
  sol.residual = std::abs(eigen_objective(A, lambda)) / bracket_scale(A, b);
  return sol;
}

namespace {

// First cell of an even grid on [lo, hi] over which f changes sign (lo = hi
// when a grid point is an exact root).  f(lo) must be nonzero.
template <class F>
std::optional<numerics::Bracket> first_sign_change(F& f, double lo, double hi, double f_lo) {
  constexpr int kCells = 32;
  double x0 = lo;
  double f0 = f_lo;
  for (int i = 1; i <= kCells; ++i) {
    const double x1 = i == kCells ? hi : lo + (hi - lo) * double(i) / kCells;
    const double f1 = f(x1);
    if (f1 == 0.0) return numerics::Bracket{x1, x1, f1, f1};  // landed on the root
    if (f0 * f1 < 0.0) return numerics::Bracket{x0, x1, f0, f1};
    x0 = x1;
    f0 = f1;
  }
  return std::nullopt;
}

}  // namespace

EigenSolution principal_lambda(double A, double tol) {
  require_positive_A(A);
  if (!(tol > 0.0)) throw DomainError(kModule, "tol must be positive");
  auto f = [A](double lambda) { return eigen_objective(A, lambda); };

  EigenSolution sol;
  sol.A = A;
  const LambdaBounds b = lambda_bounds(A);
  const double f_lo = f(b.lo);
  const double scale = std::max(std::abs(f_lo), std::abs(f(b.hi)));

  // A root below the bracket would be the principal one; make sure the
  // objective keeps its sign on [lo/4, lo].
  constexpr int kProbes = 8;
  for (int i = 0; i < kProbes; ++i) {
    const double x = 0.25 * b.lo + (b.lo - 0.25 * b.lo) * double(i) / kProbes;
    if (f(x) * f_lo <= 0.0) {
      std::ostringstream msg;
      msg << "sign change below the lower bound at lambda = " << x << " for A = " << A;
      throw BracketFailure(kModule, msg.str());
    }
  }

  // For small A the bounds can hold several roots (two already at A = 0.05),
  // so the first sign change on a grid is taken rather than the end points.
  std::optional<numerics::Bracket> bracket = first_sign_change(f, b.lo, b.hi, f_lo);
  if (!bracket) {
    // Widen once, doubling the width symmetrically, before giving up.
    const double w = b.hi - b.lo;
    const LambdaBounds wide{std::max(b.lo - 0.5 * w, 0.5 * b.lo), b.hi + 0.5 * w};
    std::ostringstream msg;
    msg << "no sign change on the analytic bounds for A = " << A << "; widened to [" << wide.lo
        << ", " << wide.hi << "]";
    sol.warnings.push_back(msg.str());
    bracket = first_sign_change(f, wide.lo, wide.hi, f(wide.lo));
    if (!bracket) throw BracketFailure(kModule, msg.str() + " and still no sign change");
  }

  const double lambda = bracket->lo == bracket->hi ? bracket->lo : numerics::find_root(f, *bracket, tol);
  sol.lambda = lambda;
  sol.xi = xi_of_lambda(lambda);
  sol.residual = std::abs(f(lambda)) / scale;
  if (!(sol.residual <= kResidualLimit)) {
    std::ostringstream msg;
    msg << "eigenvalue residual " << sol.residual << " exceeds " << kResidualLimit << " at A = " << A;
    throw NonConvergenceError(kModule, msg.str());
  }
  return sol;
}

double critical_A(double tol) {
  const OrderParam zero = OrderParam::real(0.0);
  auto g = [&](double A) { return specfun::whittaker_w_scaled(1.0, zero, 2.0 / A); };
  const double lo = 5.0;
  const double hi = 20.0;
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if (!(g_lo * g_hi < 0.0)) {
    throw BracketFailure(kModule, "W_{1,0}(2/A) has no sign change on [5, 20]");
  }
  return numerics::find_root(g, numerics::Bracket{lo, hi, g_lo, g_hi}, tol);
}

}  // namespace qsd::eigen
