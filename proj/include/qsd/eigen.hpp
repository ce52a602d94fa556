#pragma once

// Principal eigenvalue lambda_A: the smallest positive root of
// W_{1, xi(lambda)/2}(2/A) = 0 with xi(lambda) = sqrt(1 - 8 lambda).

#include <string>
#include <vector>

#include "qsd/specfun.hpp"

namespace qsd::eigen {

using specfun::OrderParam;

struct EigenSolution {
  double A = 0.0;
  double lambda = 0.0;
  OrderParam xi;
  /// |W_{1,xi/2}(2/A)| at the returned lambda relative to its size at the bracket ends.
  double residual = 0.0;
  /// Non-fatal notes, e.g. that the initial bracket had to be widened.
  std::vector<std::string> warnings;
};

struct LambdaBounds {
  double lo;
  double hi;
};

inline constexpr double kDefaultTol = 1e-12;
inline constexpr double kResidualLimit = 1e-9;

/// Real for lambda <= 1/8 (magnitude in [0, 1)), imaginary beyond.
OrderParam xi_of_lambda(double lambda);

/// lo = 1/A + 1/(A + A^2), hi = 1/A + (1 + sqrt(4A + 1)) / (2A^2).
LambdaBounds lambda_bounds(double A);

/// The eigenvalue equation's left side, e^{1/A} W_{1,xi(lambda)/2}(2/A).
/// Same sign as W; the exponential scaling keeps it O(1) for small A.
double eigen_objective(double A, double lambda);

EigenSolution principal_lambda(double A, double tol = kDefaultTol);

/// A at which lambda_A = 1/8, i.e. the root of W_{1,0}(2/A) in [5, 20].
double critical_A(double tol = kDefaultTol);

/// Rebuilds an EigenSolution for a caller-supplied lambda (e.g. to exercise
/// sign conventions); the residual is recomputed, no root search is done.
EigenSolution solution_at(double A, double lambda);

}  // namespace qsd::eigen
