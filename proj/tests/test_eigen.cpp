#include <doctest.h>

#include <chrono>
#include <cmath>

#include "qsd/eigen.hpp"
#include "qsd/errors.hpp"
#include "reference.hpp"

using namespace qsd;
using namespace qsd::eigen;
using ref::rel;

namespace {

// Independent oracle: the bounded solution of (x^2/2) f'' + f' + lambda f = 0
// with f(0) = 1 is shot from x0 = 0.01 (started from its asymptotic power
// series) to x = A with RK4 in log x.  lambda_A is its first zero crossing.
double shoot(double A, double lambda) {
  const double x0 = 0.01;
  // f = sum c_k x^k with c_{k+1} = -(k(k-1)/2 + lambda) c_k / (k + 1)
  double c = 1.0, f = 0.0, df = 0.0, xk = 1.0;
  for (int k = 0; k < 12; ++k) {
    f += c * xk;
    if (k + 1 < 12) df += (k + 1) * (-(k * (k - 1) / 2.0 + lambda) * c / (k + 1)) * xk;
    c *= -(k * (k - 1) / 2.0 + lambda) / (k + 1);
    xk *= x0;
  }
  // state (f, x f') in t = log x: d/dt f = g, d/dt g = g - 2 g / x - 2 lambda f
  auto rhs = [&](double t, double y0, double y1, double& d0, double& d1) {
    const double x = std::exp(t);
    d0 = y1;
    d1 = y1 - 2.0 * y1 / x - 2.0 * lambda * y0;
  };
  double t = std::log(x0), y0 = f, y1 = x0 * df;
  const int n = 20000;
  const double h = (std::log(A) - t) / n;
  for (int i = 0; i < n; ++i) {
    double a0, a1, b0, b1, c0, c1, e0, e1;
    rhs(t, y0, y1, a0, a1);
    rhs(t + h / 2, y0 + h / 2 * a0, y1 + h / 2 * a1, b0, b1);
    rhs(t + h / 2, y0 + h / 2 * b0, y1 + h / 2 * b1, c0, c1);
    rhs(t + h, y0 + h * c0, y1 + h * c1, e0, e1);
    y0 += h / 6 * (a0 + 2 * b0 + 2 * c0 + e0);
    y1 += h / 6 * (a1 + 2 * b1 + 2 * c1 + e1);
    t += h;
  }
  return y0;
}

double shooting_lambda(double A) {
  // f(A) > 0 for small lambda; scan upward for the first sign change, then bisect
  double lo = 1e-6, step = 0.02 / A;
  double hi = lo + step;
  while (shoot(A, hi) > 0.0) {
    lo = hi;
    hi += step;
  }
  for (int i = 0; i < 60 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (shoot(A, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("principal eigenvalue matches high-precision reference values") {
  for (const auto& e : ref::kLambda) {
    CAPTURE(e.A);
    const EigenSolution sol = principal_lambda(e.A);
    CHECK(rel(sol.lambda, e.lambda) < 1e-10);
    CHECK(sol.residual <= kResidualLimit);
  }
}

TEST_CASE("principal eigenvalue matches a shooting solution of the backward equation") {
  for (double A : {1.0, 2.0, 5.0, 20.0}) {
    CAPTURE(A);
    CHECK(rel(principal_lambda(A).lambda, shooting_lambda(A)) < 1e-7);
  }
}

TEST_CASE("critical level where lambda crosses 1/8") {
  const auto start = std::chrono::steady_clock::now();
  const double a = critical_A();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(std::abs(a - 10.240465) < 1e-5);
  CHECK(rel(a, ref::kCriticalA) < 1e-10);
  CHECK(seconds < 5.0);
  CHECK(principal_lambda(a).lambda == doctest::Approx(0.125).epsilon(1e-9));
  // below the critical level xi is imaginary, above it real
  CHECK_FALSE(principal_lambda(a * 0.9).xi.is_real());
  CHECK(principal_lambda(a * 1.1).xi.is_real());
}

TEST_CASE("eigenvalue lies strictly inside the analytic bounds and decreases in A") {
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 25; ++i) {
    const double A = 0.5 * std::pow(400.0, i / 24.0);
    CAPTURE(A);
    const LambdaBounds b = lambda_bounds(A);
    const double lambda = principal_lambda(A).lambda;
    CHECK(b.lo < lambda);
    CHECK(lambda < b.hi);
    CHECK(lambda < previous);
    previous = lambda;
  }
}

TEST_CASE("small A: the smallest root is returned even when the bounds hold several") {
  const double A = 0.05;
  const EigenSolution sol = principal_lambda(A);
  CHECK(rel(sol.lambda, 291.33005630741765) < 1e-10);
  // no sign change of the objective between 0 and the returned root
  const double f0 = eigen_objective(A, 1e-3);
  CHECK(f0 > 0.0);
  for (int i = 1; i < 400; ++i) {
    const double lambda = sol.lambda * i / 400.0;
    CHECK(eigen_objective(A, lambda) * f0 > 0.0);
  }
  // the next root is also inside the bounds
  CHECK(eigen_objective(A, 350.0) * eigen_objective(A, 439.0) < 0.0);
}

TEST_CASE("xi(lambda) = sqrt(1 - 8 lambda)") {
  CHECK_THROWS_AS(xi_of_lambda(0.0), DomainError);
  CHECK(xi_of_lambda(1e-20).is_real());
  CHECK(xi_of_lambda(1e-20).magnitude() == 1.0);
  CHECK(xi_of_lambda(0.125).magnitude() == 0.0);
  CHECK(xi_of_lambda(0.1).is_real());
  CHECK(xi_of_lambda(0.1).magnitude() == doctest::Approx(std::sqrt(0.2)).epsilon(1e-15));
  CHECK_FALSE(xi_of_lambda(1.0).is_real());
  CHECK(xi_of_lambda(1.0).magnitude() == doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
}

TEST_CASE("bounds formula") {
  const LambdaBounds b = lambda_bounds(2.0);
  CHECK(b.lo == doctest::Approx(0.5 + 1.0 / 6.0).epsilon(1e-15));
  CHECK(b.hi == doctest::Approx(0.5 + 4.0 / 8.0).epsilon(1e-15));
  CHECK_THROWS_AS(lambda_bounds(0.0), DomainError);
}

TEST_CASE("objective changes sign at the root and residual reflects it") {
  for (double A : {0.5, 2.0, 50.0}) {
    const EigenSolution sol = principal_lambda(A);
    CHECK(eigen_objective(A, sol.lambda * (1 - 1e-6)) * eigen_objective(A, sol.lambda * (1 + 1e-6)) < 0.0);
    CHECK(solution_at(A, sol.lambda).residual <= kResidualLimit);
    CHECK(solution_at(A, sol.lambda * 1.2).residual > 1e-3);
    CHECK(sol.warnings.empty());
  }
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(principal_lambda(0.0), DomainError);
  CHECK_THROWS_AS(principal_lambda(-1.0), DomainError);
  CHECK_THROWS_AS(principal_lambda(std::nan("")), DomainError);
  CHECK_THROWS_AS(principal_lambda(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(principal_lambda(2.0, 0.0), DomainError);
}
