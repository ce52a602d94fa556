#include "qsd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "qsd/errors.hpp"
#include "qsd/numerics.hpp"

namespace qsd::simulate {

namespace {

constexpr std::string_view kModule = "simulate";

// One generator per path, seeded from (seed, path) through seed_seq so that
// neighbouring paths get unrelated streams.
std::mt19937_64 path_generator(std::uint64_t seed, std::uint64_t path) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(path),
                    std::uint32_t(path >> 32)};
  return std::mt19937_64(seq);
}

// Runs body(begin, end, worker) over contiguous slices of [0, n).
template <class Body>
void parallel_chunks(std::uint64_t n, unsigned threads, Body&& body) {
  threads = unsigned(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n)));
  if (threads == 1) {
    body(std::uint64_t{0}, n, 0u);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t begin = n * w / threads;
    const std::uint64_t end = n * (w + 1) / threads;
    pool.emplace_back([&, begin, end, w] { body(begin, end, w); });
  }
  for (auto& t : pool) t.join();
}

void validate(const SimConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(kModule, what); };
  if (!(c.A > 0.0) || !std::isfinite(c.A)) fail("A must be positive and finite");
  if (c.paths == 0) fail("paths must be positive");
  if (c.paths < 100) fail("at least 100 paths are required");
  if (!(c.dt > 0.0)) fail("dt must be positive");
  if (!(c.r0 >= 0.0)) fail("r0 must be nonnegative");
  if (!(c.r0 < c.A)) fail("r0 must be below A");
  if (!(c.horizon >= 0.0) || !std::isfinite(c.horizon)) fail("horizon must be finite and >= 0");
  if (c.bins < 1) fail("bins must be positive");
  if (c.survival_points < 4) fail("survival_points must be at least 4");
}

std::vector<double> densities(const std::vector<std::uint64_t>& counts, std::uint64_t total,
                              double width) {
  std::vector<double> d(counts.size(), 0.0);
  if (total == 0) return d;
  for (std::size_t i = 0; i < counts.size(); ++i) d[i] = double(counts[i]) / (double(total) * width);
  return d;
}

}  // namespace

double default_horizon(double A) { return std::log(10.0) / eigen::lambda_bounds(A).lo; }

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QSD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return unsigned(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EmpiricalQsd simulate(const SimConfig& config) {
  validate(config);
  const double A = config.A;
  const double dt = config.dt;
  const double horizon = config.horizon > 0.0 ? config.horizon : default_horizon(A);
  if (!(dt < horizon)) throw ConfigError(kModule, "dt must be smaller than the horizon");

  // Records every `stride` steps; the step count is rounded to a multiple of it.
  const auto raw_steps = std::max<std::int64_t>(1, std::llround(horizon / dt));
  const std::int64_t stride = std::max<std::int64_t>(1, raw_steps / config.survival_points);
  const std::int64_t records = std::max<std::int64_t>(1, raw_steps / stride);
  const std::int64_t n_steps = records * stride;
  const std::int64_t mid_step = n_steps / 2;
  const double sqdt = std::sqrt(dt);
  const int bins = config.bins;
  const double width = A / bins;

  struct Tally {
    std::vector<std::uint64_t> dead_at;  // index of the first record at which the path is dead
    std::vector<std::uint64_t> mid_counts;
    std::vector<std::uint64_t> end_counts;
    std::vector<double> survivors;
  };
  const unsigned threads = resolve_threads(config.threads);
  std::vector<Tally> tallies(threads);
  auto bin_of = [&](double r) { return std::min(bins - 1, int(r / width)); };

  parallel_chunks(config.paths, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    Tally& t = tallies[w];
    t.dead_at.assign(std::size_t(records) + 2, 0);
    t.mid_counts.assign(bins, 0);
    t.end_counts.assign(bins, 0);
    for (std::uint64_t path = begin; path < end; ++path) {
      std::mt19937_64 gen = path_generator(config.seed, path);
      std::normal_distribution<double> normal;
      double r = config.r0;
      std::int64_t death = 0;
      for (std::int64_t step = 1; step <= n_steps; ++step) {
        r += dt + r * sqdt * normal(gen);
        if (r < 0.0) r = 0.0;
        if (r >= A) {
          death = step;
          break;
        }
        if (step == mid_step) ++t.mid_counts[bin_of(r)];
      }
      if (death == 0) {
        ++t.end_counts[bin_of(r)];
        t.survivors.push_back(r);
        ++t.dead_at[std::size_t(records) + 1];
      } else {
        ++t.dead_at[std::size_t((death + stride - 1) / stride)];
      }
    }
  });

  std::vector<std::uint64_t> dead_at(std::size_t(records) + 2, 0);
  std::vector<std::uint64_t> mid_counts(bins, 0), end_counts(bins, 0);
  EmpiricalQsd out;
  for (const Tally& t : tallies) {
    if (t.dead_at.empty()) continue;
    for (std::size_t i = 0; i < dead_at.size(); ++i) dead_at[i] += t.dead_at[i];
    for (int b = 0; b < bins; ++b) {
      mid_counts[b] += t.mid_counts[b];
      end_counts[b] += t.end_counts[b];
    }
    out.survivors.insert(out.survivors.end(), t.survivors.begin(), t.survivors.end());
  }
  std::sort(out.survivors.begin(), out.survivors.end());

  out.A = A;
  out.horizon = double(n_steps) * dt;
  out.dt = dt;
  out.paths = config.paths;
  out.bin_edges.resize(std::size_t(bins) + 1);
  for (int b = 0; b <= bins; ++b) out.bin_edges[b] = A * b / bins;

  const std::uint64_t survivors = out.survivors.size();
  if (survivors == 0) {
    std::ostringstream msg;
    msg << "no path survived to the horizon " << out.horizon << " (A = " << A << ")";
    throw AllAbsorbedError(kModule, msg.str());
  }
  out.midpoint_survivors = std::accumulate(mid_counts.begin(), mid_counts.end(), std::uint64_t{0});
  out.conditional_density = densities(end_counts, survivors, width);
  out.midpoint_density = densities(mid_counts, out.midpoint_survivors, width);

  std::vector<std::uint64_t> alive(std::size_t(records) + 1);
  std::uint64_t dead = 0;
  for (std::int64_t j = 0; j <= records; ++j) {
    dead += dead_at[std::size_t(j)];
    alive[std::size_t(j)] = config.paths - dead;
    out.survival.push_back({double(j * stride) * dt, double(alive[std::size_t(j)]) / double(config.paths)});
  }

  // Least squares of log S(t) on the tail window [horizon/2, horizon].
  const std::int64_t first = records / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int m = 0;
  for (std::int64_t j = first; j <= records; ++j) {
    if (alive[std::size_t(j)] == 0) continue;
    const double x = out.survival[std::size_t(j)].t;
    const double y = std::log(out.survival[std::size_t(j)].fraction);
    sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
    ++m;
  }
  const double cxx = sxx - sx * sx / m;
  const double cxy = sxy - sx * sy / m;
  const double cyy = syy - sy * sy / m;
  const double slope = cxy / cxx;
  out.lambda_hat = -slope;
  out.fit_r2 = cyy > 0.0 ? (cxy * cxy) / (cxx * cyy) : 1.0;
  const double deaths = double(alive[std::size_t(first)] - alive[std::size_t(records)]);
  out.lambda_hat_stderr = deaths > 0.0 ? out.lambda_hat / std::sqrt(deaths) : INFINITY;
  return out;
}

MartingaleSample simulate_unabsorbed(double r0, double dt, double horizon, std::uint64_t paths,
                                     std::uint64_t seed, unsigned threads) {
  if (paths < 2) throw ConfigError(kModule, "at least 2 paths are required");
  if (!(dt > 0.0) || !(horizon > dt)) throw ConfigError(kModule, "need 0 < dt < horizon");
  if (!(r0 >= 0.0)) throw ConfigError(kModule, "r0 must be nonnegative");
  const auto n_steps = std::max<std::int64_t>(1, std::llround(horizon / dt));
  const double t_end = double(n_steps) * dt;
  const double sqdt = std::sqrt(dt);
  std::vector<double> excess(paths);
  parallel_chunks(paths, resolve_threads(threads), [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    for (std::uint64_t path = begin; path < end; ++path) {
      std::mt19937_64 gen = path_generator(seed, path);
      std::normal_distribution<double> normal;
      double r = r0;
      for (std::int64_t step = 0; step < n_steps; ++step) {
        r += dt + r * sqdt * normal(gen);
        if (r < 0.0) r = 0.0;
      }
      excess[path] = r - r0 - t_end;
    }
  });
  // sequential reduction in path order keeps the result thread-count independent
  double mean = 0.0;
  for (double e : excess) mean += e;
  mean /= double(paths);
  double var = 0.0;
  for (double e : excess) var += (e - mean) * (e - mean);
  var /= double(paths - 1);
  return {mean, std::sqrt(var / double(paths)), paths};
}

double binned_sup_distance(const std::vector<double>& edges, const std::vector<double>& d1,
                           const std::vector<double>& d2) {
  double c1 = 0.0, c2 = 0.0, worst = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double w = edges[i + 1] - edges[i];
    c1 += d1[i] * w;
    c2 += d2[i] * w;
    worst = std::max(worst, std::abs(c1 - c2));
  }
  return worst;
}

EmpiricalQsd analytic_histogram(const distribution::QsdParams& p, int bins) {
  if (bins < 1) throw ConfigError(kModule, "bins must be positive");
  EmpiricalQsd out;
  out.A = p.A();
  out.lambda_hat = p.lambda();
  out.bin_edges.resize(std::size_t(bins) + 1);
  for (int b = 0; b <= bins; ++b) out.bin_edges[b] = p.A() * b / bins;
  out.conditional_density.resize(bins);
  for (int b = 0; b < bins; ++b) {
    const double mass = distribution::qsd_cdf(p, out.bin_edges[b + 1]) - distribution::qsd_cdf(p, out.bin_edges[b]);
    out.conditional_density[b] = mass / (out.bin_edges[b + 1] - out.bin_edges[b]);
  }
  return out;
}

Comparison compare_to_analytic(const EmpiricalQsd& emp, const distribution::QsdParams& p) {
  if (std::abs(emp.A - p.A()) > 1e-12 * std::max(1.0, p.A())) {
    std::ostringstream msg;
    msg << "empirical A = " << emp.A << " but analytic A = " << p.A();
    throw MismatchedAError(kModule, msg.str());
  }
  Comparison c;
  const EmpiricalQsd exact = analytic_histogram(p, int(emp.conditional_density.size()));
  c.density_discrepancy.resize(emp.conditional_density.size());
  for (std::size_t i = 0; i < c.density_discrepancy.size(); ++i) {
    c.density_discrepancy[i] = emp.conditional_density[i] - exact.conditional_density[i];
  }
  if (!emp.survivors.empty()) {
    // Kolmogorov distance of the survivor sample from Q_A
    const double n = double(emp.survivors.size());
    for (std::size_t i = 0; i < emp.survivors.size(); ++i) {
      const double q = distribution::qsd_cdf(p, emp.survivors[i]);
      c.sup_cdf_distance = std::max({c.sup_cdf_distance, double(i + 1) / n - q, q - double(i) / n});
    }
  } else {
    c.sup_cdf_distance = binned_sup_distance(emp.bin_edges, emp.conditional_density, exact.conditional_density);
  }
  c.lambda_hat = emp.lambda_hat;
  c.lambda_analytic = p.lambda();
  c.lambda_rel_error = std::abs(emp.lambda_hat - p.lambda()) / p.lambda();
  return c;
}

}  // namespace qsd::simulate
