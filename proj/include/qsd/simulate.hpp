#pragma once

// Euler-Maruyama simulation of dR = dt + R dB started at r0, absorbed the
// first step R >= A.  Produces the survival curve, its tail decay rate (an
// estimate of lambda_A) and the law of the survivors at the horizon.
//
// Every path draws its normals from its own generator seeded by
// (seed, path index), and all reductions are integer counts or sorts, so the
// result is bitwise reproducible for any thread count.

#include <cstdint>
#include <vector>

#include "qsd/distribution.hpp"

namespace qsd::simulate {

struct SimConfig {
  double A = 2.0;
  double r0 = 0.0;
  double dt = 1e-4;
  /// Zero selects default_horizon(A, paths).
  double horizon = 0.0;
  std::uint64_t paths = 200000;
  std::uint64_t seed = 42;
  int bins = 64;
  /// Number of equally spaced survival-curve records over [0, horizon].
  int survival_points = 200;
  /// Worker threads; zero means QSD_THREADS or the hardware concurrency.
  unsigned threads = 0;
};

struct SurvivalPoint {
  double t;
  double fraction;
};

struct EmpiricalQsd {
  double A = 0.0;
  double horizon = 0.0;
  double dt = 0.0;
  std::uint64_t paths = 0;
  std::vector<double> bin_edges;
  /// Density of the survivors at the horizon, normalized to integrate to 1.
  std::vector<double> conditional_density;
  /// Same, for the survivors at horizon / 2.
  std::vector<double> midpoint_density;
  std::vector<SurvivalPoint> survival;
  /// Survivor positions at the horizon, sorted ascending.
  std::vector<double> survivors;
  std::uint64_t midpoint_survivors = 0;
  double lambda_hat = 0.0;
  double lambda_hat_stderr = 0.0;
  /// Coefficient of determination of the log-survival fit on [horizon/2, horizon].
  double fit_r2 = 0.0;
};

/// Horizon at which about a tenth of the paths are still alive, using the
/// lower eigenvalue bound as a conservative decay rate:
/// T = ln(10) / lambda_lo(A).
double default_horizon(double A);

/// Resolves the thread count: an explicit request, else QSD_THREADS, else the
/// hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

EmpiricalQsd simulate(const SimConfig& config);

struct MartingaleSample {
  double mean;    ///< sample mean of R_T - r0 - T
  double std_error;  ///< its standard error
  std::uint64_t paths;
};

/// The same scheme without absorption (A = infinity); E[R_T - r0 - T] = 0.
MartingaleSample simulate_unabsorbed(double r0, double dt, double horizon, std::uint64_t paths,
                                     std::uint64_t seed, unsigned threads = 0);

struct Comparison {
  /// sup_x |F_emp(x) - Q_A(x)|: over the survivor sample when present,
  /// otherwise over the histogram bin edges.
  double sup_cdf_distance = 0.0;
  /// Empirical minus analytic mean density in each bin.
  std::vector<double> density_discrepancy;
  double lambda_hat = 0.0;
  double lambda_analytic = 0.0;
  double lambda_rel_error = 0.0;
};

Comparison compare_to_analytic(const EmpiricalQsd& emp, const distribution::QsdParams& p);

/// Histogram of the analytic law on `bins` equal bins, packaged as an
/// EmpiricalQsd (no survivor sample); comparing it with the same law gives
/// a distance of zero up to quadrature error.
EmpiricalQsd analytic_histogram(const distribution::QsdParams& p, int bins);

/// Sup distance between two binned conditional densities on the same edges,
/// measured on their cumulative sums.
double binned_sup_distance(const std::vector<double>& edges, const std::vector<double>& d1,
                           const std::vector<double>& d2);

}  // namespace qsd::simulate
