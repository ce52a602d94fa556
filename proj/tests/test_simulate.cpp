#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qsd/errors.hpp"
#include "qsd/simulate.hpp"

using namespace qsd::simulate;
namespace simulate = qsd::simulate;
using qsd::AllAbsorbedError;
using qsd::ConfigError;
using qsd::MismatchedAError;
namespace eigen = qsd::eigen;
using qsd::distribution::params_for;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.A = 1.0;
  c.dt = 1e-3;
  c.paths = 3000;
  c.seed = 11;
  c.bins = 16;
  return c;
}

}  // namespace

TEST_CASE("results do not depend on the thread count") {
  SimConfig c = small_config();
  c.threads = 1;
  const EmpiricalQsd one = simulate::simulate(c);
  c.threads = 3;
  const EmpiricalQsd three = simulate::simulate(c);
  CHECK(one.survivors == three.survivors);
  CHECK(one.lambda_hat == three.lambda_hat);
  CHECK(one.conditional_density == three.conditional_density);
  CHECK(one.survival.size() == three.survival.size());
  for (std::size_t i = 0; i < one.survival.size(); ++i) CHECK(one.survival[i].fraction == three.survival[i].fraction);
}

TEST_CASE("seed selects the sample") {
  SimConfig c = small_config();
  const EmpiricalQsd a = simulate::simulate(c);
  c.seed = 12;
  const EmpiricalQsd b = simulate::simulate(c);
  CHECK(a.survivors != b.survivors);
  c.seed = 11;
  CHECK(simulate::simulate(c).survivors == a.survivors);
}

TEST_CASE("output layout") {
  const SimConfig c = small_config();
  const EmpiricalQsd e = simulate::simulate(c);
  CHECK(e.bin_edges.size() == std::size_t(c.bins) + 1);
  CHECK(e.bin_edges.front() == 0.0);
  CHECK(e.bin_edges.back() == c.A);
  CHECK(e.conditional_density.size() == std::size_t(c.bins));
  CHECK(e.survival.front().t == 0.0);
  CHECK(e.survival.front().fraction == 1.0);
  for (std::size_t i = 1; i < e.survival.size(); ++i) CHECK(e.survival[i].fraction <= e.survival[i - 1].fraction);
  CHECK(std::is_sorted(e.survivors.begin(), e.survivors.end()));
  CHECK(e.survivors.back() < c.A);
  double mass = 0.0;
  for (double d : e.conditional_density) mass += d * c.A / c.bins;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.horizon == doctest::Approx(default_horizon(c.A)).epsilon(1e-2));
}

TEST_CASE("default horizon leaves about a tenth alive under the lower-bound rate") {
  const auto b = eigen::lambda_bounds(2.0);
  CHECK(default_horizon(2.0) == doctest::Approx(std::log(10.0) / b.lo).epsilon(1e-15));
}

TEST_CASE("without absorption R_T - r0 - T is a mean-zero martingale increment") {
  const MartingaleSample m = simulate_unabsorbed(1.0, 1e-3, 1.0, 20000, 5);
  CHECK(m.paths == 20000);
  CHECK(m.std_error > 0.0);
  CHECK(std::abs(m.mean) < 4.0 * m.std_error);
}

TEST_CASE("coarse end-to-end run at A = 2") {
  // dt = 1e-3 misses crossings between steps, so absorption is undercounted
  // and the decay rate comes out a few percent low
  SimConfig c;
  c.A = 2.0;
  c.dt = 1e-3;
  c.paths = 20000;
  c.seed = 3;
  const EmpiricalQsd e = simulate::simulate(c);
  const Comparison cmp = compare_to_analytic(e, params_for(2.0));
  CHECK(cmp.lambda_hat < cmp.lambda_analytic);
  CHECK(cmp.lambda_rel_error < 0.05);
  CHECK(cmp.sup_cdf_distance < 0.03);
  CHECK(e.fit_r2 > 0.99);
}

TEST_CASE("coarse end-to-end run at A = 50") {
  SimConfig c;
  c.A = 50.0;
  c.dt = 1e-3;
  c.paths = 4000;
  c.seed = 42;
  const EmpiricalQsd e = simulate::simulate(c);
  const Comparison cmp = compare_to_analytic(e, params_for(50.0));
  CHECK(cmp.lambda_rel_error < 0.05);
  CHECK(e.fit_r2 > 0.99);
}

TEST_CASE("analytic histogram compared with itself") {
  const auto p = params_for(3.0);
  const EmpiricalQsd h = analytic_histogram(p, 32);
  const Comparison c = compare_to_analytic(h, p);
  CHECK(c.sup_cdf_distance < 1e-12);
  for (double d : c.density_discrepancy) CHECK(std::abs(d) < 1e-12);
  CHECK(binned_sup_distance(h.bin_edges, h.conditional_density, h.conditional_density) == 0.0);
  CHECK_THROWS_AS(compare_to_analytic(h, params_for(4.0)), MismatchedAError);
}

TEST_CASE("binned sup distance") {
  const std::vector<double> edges{0.0, 1.0, 2.0};
  CHECK(binned_sup_distance(edges, {1.0, 0.0}, {0.0, 1.0}) == 1.0);
  CHECK(binned_sup_distance(edges, {0.5, 0.5}, {0.25, 0.75}) == 0.25);
}

TEST_CASE("configuration errors") {
  auto with = [](auto mutate) {
    SimConfig c = small_config();
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(simulate::simulate(with([](SimConfig& c) { c.A = 0.0; })), ConfigError);
  CHECK_THROWS_AS(simulate::simulate(with([](SimConfig& c) { c.paths = 0; })), ConfigError);
  CHECK_THROWS_AS(simulate::simulate(with([](SimConfig& c) { c.dt = -1.0; })), ConfigError);
  CHECK_THROWS_AS(simulate::simulate(with([](SimConfig& c) { c.r0 = 1.5; })), ConfigError);
  CHECK_THROWS_AS(simulate::simulate(with([](SimConfig& c) { c.bins = 0; })), ConfigError);
  CHECK_THROWS_AS(simulate::simulate(with([](SimConfig& c) { c.horizon = 1e-4; })), ConfigError);
  CHECK_THROWS_AS(simulate_unabsorbed(0.0, 1e-3, 1.0, 1, 1), ConfigError);
}

TEST_CASE("every path absorbed is an error, not an empty result") {
  SimConfig c = small_config();
  c.A = 0.1;
  c.paths = 100;
  c.horizon = 5.0;
  CHECK_THROWS_AS(simulate::simulate(c), AllAbsorbedError);
}

TEST_CASE("thread resolution") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}
