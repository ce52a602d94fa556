#include "qsd/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "output.hpp"
#include "qsd/distribution.hpp"
#include "qsd/eigen.hpp"
#include "qsd/errors.hpp"
#include "qsd/laplace.hpp"
#include "qsd/moments.hpp"
#include "qsd/simulate.hpp"
#include "qsd/specfun.hpp"

namespace qsd::cli {

namespace {

// Bad flag values found after CLI11 has parsed the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Verification ran to completion but at least one check failed.
struct VerificationFailed : Error {
  explicit VerificationFailed(const std::string& what) : Error("cli", "VerificationFailed", what) {}
};

double parse_real(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw UsageError(what + ": not a number: '" + s + "'");
  return v;
}

// Integer flags also accept scientific notation such as 2e5.
std::uint64_t parse_count(const std::string& s, const std::string& what) {
  std::uint64_t n = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec == std::errc() && p == s.data() + s.size()) return n;
  const double v = parse_real(s, what);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9007199254740992.0)
    throw UsageError(what + ": expected a nonnegative integer, got '" + s + "'");
  return std::uint64_t(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<double> spaced(double lo, double hi, std::uint64_t n, bool log_spaced) {
  std::vector<double> g(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : double(i) / double(n - 1);
    g[i] = log_spaced ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  g.back() = n == 1 ? lo : hi;
  return g;
}

// "v" is a single value; "lo:hi:n" is n equally (or log-) spaced points.
std::vector<double> parse_grid(const std::string& spec, bool log_spaced, const std::string& what) {
  const auto parts = split(spec, ':');
  if (parts.size() == 1) return {parse_real(parts[0], what)};
  if (parts.size() != 3) throw UsageError(what + ": expected a value or lo:hi:n, got '" + spec + "'");
  const double lo = parse_real(parts[0], what);
  const double hi = parse_real(parts[1], what);
  const auto n = parse_count(parts[2], what);
  if (n < 1) throw UsageError(what + ": grid needs at least one point");
  if (log_spaced && !(lo > 0.0 && hi > 0.0)) throw UsageError(what + ": log grid needs positive ends");
  return spaced(lo, hi, n, log_spaced);
}

Cell maybe(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

double max_rel_spread(const std::vector<std::optional<double>>& values) {
  double spread = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (!values[i] || !values[j]) continue;
      const double scale = std::max(std::abs(*values[i]), std::abs(*values[j]));
      if (scale > 0.0) spread = std::max(spread, std::abs(*values[i] - *values[j]) / scale);
    }
  return spread;
}

// eigen ---------------------------------------------------------------------

std::vector<std::string> eigen_columns() {
  return {"A", "lambda", "xi_kind", "xi", "residual", "lo", "hi", "warnings"};
}

std::vector<Cell> eigen_row(const eigen::EigenSolution& e) {
  const auto b = eigen::lambda_bounds(e.A);
  std::string warnings;
  for (const auto& w : e.warnings) warnings += (warnings.empty() ? "" : "; ") + w;
  return {e.A,
          e.lambda,
          std::string(e.xi.is_real() ? "real" : "imaginary"),
          e.xi.sign() * e.xi.magnitude(),
          e.residual,
          b.lo,
          b.hi,
          warnings};
}

// moments -------------------------------------------------------------------

const std::map<std::string, moments::Method>& moment_methods() {
  static const std::map<std::string, moments::Method> m = {
      {"recurrence", moments::Method::Recurrence},
      {"2f2", moments::Method::ClosedForm2F2},
      {"powerseries", moments::Method::PowerSeries},
      {"quadrature", moments::Method::Quadrature}};
  return m;
}

Table moment_table(const distribution::QsdParams& p, int n_max, const std::string& method) {
  std::vector<std::pair<std::string, moments::Method>> chosen;
  if (method == "all") {
    for (const char* name : {"recurrence", "2f2", "powerseries", "quadrature"})
      chosen.emplace_back(name, moment_methods().at(name));
  } else {
    chosen.emplace_back(method, moment_methods().at(method));
  }
  Table t;
  t.columns.push_back("n");
  for (const auto& [name, m] : chosen) t.columns.push_back(name);
  t.columns.push_back("max_rel_spread");
  std::vector<std::vector<double>> cols;
  for (const auto& [name, m] : chosen) cols.push_back(moments::moment_series(p, n_max, m).values);
  for (int n = 0; n <= n_max; ++n) {
    std::vector<Cell> row{std::int64_t(n)};
    std::vector<std::optional<double>> vals;
    for (const auto& c : cols) {
      row.emplace_back(c[std::size_t(n)]);
      vals.emplace_back(c[std::size_t(n)]);
    }
    row.emplace_back(max_rel_spread(vals));
    t.add_row(std::move(row));
  }
  return t;
}

constexpr int kFig1Orders[] = {1, 2, 3, 4, 5, 10};
constexpr double kFig2As[] = {1.0, 3.0, 5.0, 10.0, 30.0, 50.0};

Table fig1_table(int points) {
  Table t;
  t.columns.push_back("A");
  for (int n : kFig1Orders) t.columns.push_back("M" + std::to_string(n));
  for (int i = 0; i < points; ++i) {
    const double A = points == 1 ? 0.05 : 0.05 + (50.0 - 0.05) * double(i) / double(points - 1);
    const auto p = distribution::params_for(A);
    const auto m = moments::moments_recurrence(p, 10).values;
    std::vector<Cell> row{A};
    for (int n : kFig1Orders) row.emplace_back(m[std::size_t(n)]);
    t.add_row(std::move(row));
  }
  return t;
}

std::string a_label(double A) { return "A=" + format_number(A, 6); }

Table fig2_table() {
  Table t;
  t.columns.push_back("n");
  std::vector<std::vector<double>> cols;
  for (double A : kFig2As) {
    t.columns.push_back(a_label(A));
    cols.push_back(moments::moments_recurrence(distribution::params_for(A), 10).values);
  }
  for (int n = 1; n <= 10; ++n) {
    std::vector<Cell> row{std::int64_t(n)};
    for (const auto& c : cols) row.emplace_back(c[std::size_t(n)]);
    t.add_row(std::move(row));
  }
  return t;
}

// Both figure grids in long form, so they fit one table.
Table figures_long(int points) {
  Table t;
  t.columns = {"figure", "A", "n", "moment"};
  const Table f1 = fig1_table(points);
  for (const auto& row : f1.rows)
    for (std::size_t j = 0; j < std::size(kFig1Orders); ++j)
      t.add_row({std::string("fig1"), row[0], std::int64_t(kFig1Orders[j]), row[j + 1]});
  const Table f2 = fig2_table();
  for (const auto& row : f2.rows)
    for (std::size_t j = 0; j < std::size(kFig2As); ++j)
      t.add_row({std::string("fig2"), kFig2As[j], row[0], row[j + 1]});
  return t;
}

Table bounds_table() {
  Table t;
  t.columns = {"A", "lo", "lambda", "hi", "inside"};
  for (double A : spaced(0.5, 200.0, 25, true)) {
    const auto e = eigen::principal_lambda(A);
    const auto b = eigen::lambda_bounds(A);
    t.add_row({A, b.lo, e.lambda, b.hi, std::int64_t(b.lo < e.lambda && e.lambda < b.hi)});
  }
  return t;
}

// laplace -------------------------------------------------------------------

const std::vector<std::pair<std::string, laplace::Method>>& laplace_methods() {
  static const std::vector<std::pair<std::string, laplace::Method>> m = {
      {"moment_series", laplace::Method::MomentSeries},
      {"kdf1", laplace::Method::KdF1},
      {"kdf2", laplace::Method::KdF2},
      {"bessel", laplace::Method::BesselForm},
      {"quadrature", laplace::Method::Quadrature}};
  return m;
}

std::optional<double> try_laplace(const distribution::QsdParams& p, double s, laplace::Method m) {
  try {
    return laplace::evaluate(p, s, m).value;
  } catch (const NonConvergenceError&) {
    return std::nullopt;
  }
}

std::optional<double> try_ode_residual(const distribution::QsdParams& p, double s) {
  const double h = 1e-4 * std::max(1.0, s);
  if (!(s > 2.0 * h)) return std::nullopt;
  return laplace::ode_residual(p, s, h, laplace::Method::BesselForm);
}

void add_laplace_rows(Table& t, const distribution::QsdParams& p, const std::vector<double>& s_grid,
                      const std::vector<std::pair<std::string, laplace::Method>>& chosen,
                      bool with_A) {
  for (double s : s_grid) {
    std::vector<Cell> row{s};
    if (with_A) row.emplace_back(p.A());
    std::vector<std::optional<double>> vals;
    for (const auto& [name, m] : chosen) {
      vals.push_back(try_laplace(p, s, m));
      row.push_back(maybe(vals.back()));
    }
    row.emplace_back(max_rel_spread(vals));
    row.push_back(maybe(try_ode_residual(p, s)));
    t.add_row(std::move(row));
  }
}

Table laplace_header(const std::vector<std::pair<std::string, laplace::Method>>& chosen, bool with_A) {
  Table t;
  t.columns.push_back("s");
  if (with_A) t.columns.push_back("A");
  for (const auto& c : chosen) t.columns.push_back(c.first);
  t.columns.push_back("max_rel_spread");
  t.columns.push_back("ode_residual");
  return t;
}

Table laplace_table() {
  Table t = laplace_header(laplace_methods(), true);
  for (double A : {1.0, 5.0, 20.0}) add_laplace_rows(t, distribution::params_for(A), {0.1, 1.0, 5.0}, laplace_methods(), true);
  return t;
}

// simulate ------------------------------------------------------------------

struct SimFlags {
  double A = 2.0;
  double r0 = 0.0;
  double dt = 1e-4;
  double horizon = 0.0;
  std::string paths = "200000";
  std::string seed = "42";
  std::string bins = "64";
  std::string threads = "0";
  std::string histogram_path;
  std::string survival_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--A", A, "absorbing level")->capture_default_str();
    cmd->add_option("--r0", r0, "starting point")->capture_default_str();
    cmd->add_option("--dt", dt, "time step")->capture_default_str();
    cmd->add_option("--horizon", horizon, "simulated time (0: ln(10)/lambda_lo)")->capture_default_str();
    cmd->add_option("--paths", paths, "number of paths")->capture_default_str();
    cmd->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    cmd->add_option("--bins", bins, "histogram bins")->capture_default_str();
    cmd->add_option("--threads", threads, "worker threads (0: QSD_THREADS or all cores)")->capture_default_str();
    cmd->add_option("--histogram", histogram_path, "also write the survivor histogram to this file");
    cmd->add_option("--survival", survival_path, "also write the survival curve to this file");
  }

  simulate::SimConfig config() const {
    simulate::SimConfig c;
    c.A = A;
    c.r0 = r0;
    c.dt = dt;
    c.horizon = horizon;
    c.paths = parse_count(paths, "--paths");
    c.seed = parse_count(seed, "--seed");
    c.bins = int(std::min<std::uint64_t>(parse_count(bins, "--bins"), 1u << 20));
    c.threads = unsigned(std::min<std::uint64_t>(parse_count(threads, "--threads"), 4096));
    return c;
  }
};

struct SimRun {
  simulate::EmpiricalQsd emp;
  simulate::Comparison cmp;
  double elapsed_s;
  simulate::SimConfig config;
};

SimRun run_simulation(const SimFlags& f, const OutputSpec& spec) {
  const auto config = f.config();
  const auto t0 = std::chrono::steady_clock::now();
  auto emp = simulate::simulate(config);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto p = distribution::params_for(config.A);
  auto cmp = simulate::compare_to_analytic(emp, p);

  if (!f.histogram_path.empty()) {
    const auto exact = simulate::analytic_histogram(p, int(emp.conditional_density.size()));
    Table h;
    h.columns = {"bin_lo", "bin_hi", "empirical_density", "analytic_density", "midpoint_density"};
    for (std::size_t i = 0; i + 1 < emp.bin_edges.size(); ++i)
      h.add_row({emp.bin_edges[i], emp.bin_edges[i + 1], emp.conditional_density[i],
                 exact.conditional_density[i], emp.midpoint_density[i]});
    emit_to(h, {spec.format, f.histogram_path, spec.precision}, std::cout);
  }
  if (!f.survival_path.empty()) {
    Table s;
    s.columns = {"t", "fraction"};
    for (const auto& pt : emp.survival) s.add_row({pt.t, pt.fraction});
    emit_to(s, {spec.format, f.survival_path, spec.precision}, std::cout);
  }
  return {std::move(emp), std::move(cmp), elapsed, config};
}

Table simulation_summary(const SimRun& r) {
  Table t;
  t.single_record = true;
  t.columns = {"A", "r0", "dt", "horizon", "paths", "seed", "survivors", "lambda_hat",
               "lambda_hat_stderr", "fit_r2", "lambda_analytic", "lambda_rel_error",
               "sup_cdf_distance", "midpoint_sup_distance", "elapsed_s"};
  t.add_row({r.emp.A, r.config.r0, r.emp.dt, r.emp.horizon, std::int64_t(r.emp.paths),
             r.config.seed <= std::uint64_t(INT64_MAX) ? Cell{std::int64_t(r.config.seed)}
                                                       : Cell{std::to_string(r.config.seed)},
             std::int64_t(r.emp.survivors.size()), r.emp.lambda_hat,
             r.emp.lambda_hat_stderr, r.emp.fit_r2, r.cmp.lambda_analytic, r.cmp.lambda_rel_error,
             r.cmp.sup_cdf_distance,
             simulate::binned_sup_distance(r.emp.bin_edges, r.emp.conditional_density,
                                           r.emp.midpoint_density),
             r.elapsed_s});
  return t;
}

// specfun-probe ---------------------------------------------------------------

// "1.5" is real, "2.2i" purely imaginary, "1.5+2.2i" / "1.5-2.2i" general.
specfun::Complex parse_complex(const std::string& s) {
  if (s.empty()) throw UsageError("empty argument");
  if (s.back() != 'i') return parse_real(s, "argument");
  const std::string body = s.substr(0, s.size() - 1);
  const auto split_at = body.find_last_of("+-");
  if (split_at == std::string::npos || split_at == 0 || body[split_at - 1] == 'e' || body[split_at - 1] == 'E') {
    const std::string im = body.empty() || body == "+" ? "1" : body == "-" ? "-1" : body;
    return {0.0, parse_real(im, "argument")};
  }
  const double re = parse_real(body.substr(0, split_at), "argument");
  std::string im = body.substr(split_at + (body[split_at] == '+' ? 1 : 0));
  if (im.empty() || im == "-") im += "1";
  return {re, parse_real(im, "argument")};
}

Table probe(const std::string& fn, const std::vector<std::string>& raw) {
  std::vector<specfun::Complex> a;
  for (const auto& r : raw) a.push_back(parse_complex(r));
  auto need = [&](std::size_t n) {
    if (a.size() != n)
      throw UsageError(fn + " takes " + std::to_string(n) + " arguments, got " + std::to_string(a.size()));
  };
  auto real_arg = [&](std::size_t i) {
    if (a[i].imag() != 0.0) throw UsageError(fn + ": argument " + std::to_string(i + 1) + " must be real");
    return a[i].real();
  };
  auto int_arg = [&](std::size_t i) {
    const double v = real_arg(i);
    if (v != std::floor(v)) throw UsageError(fn + ": argument " + std::to_string(i + 1) + " must be an integer");
    return int(v);
  };

  specfun::Evaluation e;
  if (fn == "gamma") {
    need(1);
    e.value = specfun::gamma(a[0]);
  } else if (fn == "rgamma") {
    need(1);
    e.value = specfun::rgamma(a[0]);
  } else if (fn == "pochhammer") {
    need(2);
    e.value = specfun::pochhammer(a[0], int_arg(1));
  } else if (fn == "hyp2f2") {
    need(5);
    e = specfun::hyp2f2_eval(a[0], a[1], a[2], a[3], a[4]);
  } else if (fn == "hyp1f1") {
    need(3);
    e.value = specfun::hyp1f1(a[0], a[1], real_arg(2));
  } else if (fn == "whittaker_m") {
    need(3);
    e.value = specfun::whittaker_m(real_arg(0), a[1], real_arg(2));
  } else if (fn == "whittaker_w") {
    need(3);
    const double z = real_arg(2);
    e = specfun::whittaker_w_scaled_eval(real_arg(0), a[1], z);
    const double scale = std::exp(-0.5 * z);
    e.value *= scale;
    e.abs_err *= scale;
  } else if (fn == "bessel_i") {
    need(2);
    e.value = specfun::bessel_i(a[0], real_arg(1));
  } else if (fn == "bessel_k") {
    need(2);
    e.value = specfun::bessel_k(a[0], real_arg(1));
  } else if (fn == "kampe_de_feriet") {
    need(6);
    e = specfun::kampe_de_feriet_eval(a[0], a[1], a[2], a[3], real_arg(4), real_arg(5));
  } else if (fn == "weber_i" || fn == "weber_k") {
    need(3);
    e = specfun::weber_incomplete_eval(fn == "weber_i" ? specfun::BesselKind::I : specfun::BesselKind::K,
                                       real_arg(0), real_arg(1), a[2]);
  } else {
    throw UsageError("unknown function '" + fn +
                     "' (gamma, rgamma, pochhammer, hyp2f2, hyp1f1, whittaker_m, whittaker_w, "
                     "bessel_i, bessel_k, kampe_de_feriet, weber_i, weber_k)");
  }
  Table t;
  t.single_record = true;
  t.columns = {"fn", "value_re", "value_im", "abs_err"};
  t.add_row({fn, e.value.real(), e.value.imag(), e.abs_err});
  return t;
}

void write_error_record(std::ostream& err, const std::string& code, const std::string& message,
                        const std::string& subcommand) {
  nlohmann::ordered_json rec;
  rec["error"] = code;
  rec["message"] = message;
  if (!subcommand.empty()) rec["subcommand"] = subcommand;
  err << rec.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-stationary distribution of dR = dt + R dB absorbed at A", "qsd"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", "qsd 1.0.0");

  OutputSpec spec;
  std::string format = "csv";
  int precision = 12;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--precision", precision, "significant digits")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
  app.add_option("-o,--output", spec.path, "write the main table to this file");

  // Each subcommand fills `table` (or leaves it empty when it wrote its own output).
  std::function<Table()> action;

  // eigen
  auto* eig = app.add_subcommand("eigen", "principal eigenvalue lambda_A");
  double eig_A = 0.0;
  double eig_tol = eigen::kDefaultTol;
  std::string eig_grid;
  bool eig_log = false;
  std::string eig_target;
  eig->add_option("target", eig_target, "'critical_A' for the A with lambda_A = 1/8")
      ->check(CLI::IsMember({"critical_A"}));
  eig->add_option("--A", eig_A, "absorbing level");
  eig->add_option("--tol", eig_tol, "root tolerance")->capture_default_str();
  eig->add_option("--grid", eig_grid, "A grid lo:hi:n");
  eig->add_flag("--log", eig_log, "log-spaced grid");
  eig->callback([&] {
    action = [&] {
      Table t;
      if (eig_target == "critical_A") {
        const double a = eigen::critical_A(eig_tol);
        t.single_record = true;
        t.columns = {"A_critical", "lambda"};
        t.add_row({a, eigen::principal_lambda(a, eig_tol).lambda});
        return t;
      }
      t.columns = eigen_columns();
      if (!eig_grid.empty()) {
        for (double A : parse_grid(eig_grid, eig_log, "--grid"))
          t.add_row(eigen_row(eigen::principal_lambda(A, eig_tol)));
        return t;
      }
      if (!(eig_A > 0.0)) throw UsageError("eigen needs --A > 0, --grid or critical_A");
      t.single_record = true;
      t.add_row(eigen_row(eigen::principal_lambda(eig_A, eig_tol)));
      return t;
    };
  });

  // pdf and cdf
  double dist_A = 0.0;
  std::string dist_grid;
  auto add_dist = [&](const char* name, const char* desc, bool cumulative) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--A", dist_A, "absorbing level")->required();
    cmd->add_option("--grid", dist_grid, "x grid lo:hi:n (default 0:A:101)");
    cmd->callback([&, cumulative, name] {
      action = [&, cumulative, name] {
        const auto p = distribution::params_for(dist_A);
        const auto xs = dist_grid.empty() ? spaced(0.0, dist_A, 101, false) : parse_grid(dist_grid, false, "--grid");
        Table t;
        t.columns = {"x", name};
        for (double x : xs)
          t.add_row({x, cumulative ? distribution::qsd_cdf(p, x) : distribution::qsd_pdf(p, x)});
        return t;
      };
    });
  };
  add_dist("pdf", "quasi-stationary density q_A", false);
  add_dist("cdf", "quasi-stationary distribution function Q_A", true);

  // moments
  auto* mom = app.add_subcommand("moments", "moments M_n by several routes");
  double mom_A = 0.0;
  std::string mom_n = "10";
  std::string mom_method = "all";
  bool mom_figures = false;
  std::string mom_points = "100";
  mom->add_option("--A", mom_A, "absorbing level");
  mom->add_option("--n-max", mom_n, "largest order")->capture_default_str();
  mom->add_option("--method", mom_method, "route")
      ->check(CLI::IsMember({"all", "recurrence", "2f2", "powerseries", "quadrature"}))
      ->capture_default_str();
  mom->add_flag("--figures", mom_figures, "emit the moment-vs-A and moment-vs-n grids");
  mom->add_option("--points", mom_points, "A points for the moment-vs-A grid")->capture_default_str();
  mom->callback([&] {
    action = [&] {
      if (mom_figures) return figures_long(int(parse_count(mom_points, "--points")));
      if (!(mom_A > 0.0)) throw UsageError("moments needs --A > 0 or --figures");
      const auto n = parse_count(mom_n, "--n-max");
      if (n > 1000) throw UsageError("--n-max must be at most 1000");
      return moment_table(distribution::params_for(mom_A), int(n), mom_method);
    };
  });

  // laplace
  auto* lap = app.add_subcommand("laplace", "Laplace transform E[exp(-s Z)]");
  double lap_A = 0.0;
  std::string lap_s;
  std::string lap_method = "all";
  bool lap_limit = false;
  std::string lap_As = "20,50,200,500";
  lap->add_option("--A", lap_A, "absorbing level");
  lap->add_option("--s", lap_s, "s value or grid lo:hi:n")->required();
  lap->add_option("--method", lap_method, "route")
      ->check(CLI::IsMember({"all", "moment_series", "kdf1", "kdf2", "bessel", "quadrature"}))
      ->capture_default_str();
  lap->add_flag("--limit-check", lap_limit, "compare an A sweep with the A -> infinity transform");
  lap->add_option("--A-list", lap_As, "comma separated A values for --limit-check")->capture_default_str();
  lap->callback([&] {
    action = [&] {
      const auto s_grid = parse_grid(lap_s, false, "--s");
      if (lap_limit) {
        Table t;
        t.columns = {"s", "A", "bessel", "stationary", "abs_diff"};
        for (double s : s_grid) {
          const double h = laplace::stationary_laplace(s);
          for (const auto& a : split(lap_As, ',')) {
            const double A = parse_real(a, "--A-list");
            const double v = laplace::laplace_bessel(distribution::params_for(A), s).value;
            t.add_row({s, A, v, h, std::abs(v - h)});
          }
        }
        return t;
      }
      if (!(lap_A > 0.0)) throw UsageError("laplace needs --A > 0 or --limit-check");
      std::vector<std::pair<std::string, laplace::Method>> chosen;
      for (const auto& m : laplace_methods())
        if (lap_method == "all" || lap_method == m.first) chosen.push_back(m);
      Table t = laplace_header(chosen, false);
      add_laplace_rows(t, distribution::params_for(lap_A), s_grid, chosen, false);
      return t;
    };
  });

  // simulate and verify
  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation of the absorbed process");
  SimFlags sim_flags;
  sim_flags.attach(sim);
  sim->callback([&] {
    action = [&] { return simulation_summary(run_simulation(sim_flags, spec)); };
  });

  auto* ver = app.add_subcommand("verify", "simulate and check the result against the analytic law");
  SimFlags ver_flags;
  ver_flags.attach(ver);
  double ver_lambda_tol = 0.05;
  double ver_ks_tol = 0.02;
  double ver_r2_min = 0.99;
  ver->add_option("--lambda-tol", ver_lambda_tol, "relative tolerance on lambda_hat")->capture_default_str();
  ver->add_option("--ks-tol", ver_ks_tol, "bound on the cdf sup-distance")->capture_default_str();
  ver->add_option("--r2-min", ver_r2_min, "minimum R^2 of the log-survival fit")->capture_default_str();
  bool verify_failed = false;
  ver->callback([&] {
    action = [&] {
      const auto r = run_simulation(ver_flags, spec);
      Table t;
      t.columns = {"check", "value", "threshold", "pass"};
      auto check = [&](const char* name, double v, double thr, bool ok) {
        t.add_row({std::string(name), v, thr, std::string(ok ? "PASS" : "FAIL")});
        verify_failed = verify_failed || !ok;
      };
      check("lambda_rel_error", r.cmp.lambda_rel_error, ver_lambda_tol, r.cmp.lambda_rel_error <= ver_lambda_tol);
      check("sup_cdf_distance", r.cmp.sup_cdf_distance, ver_ks_tol, r.cmp.sup_cdf_distance <= ver_ks_tol);
      check("fit_r2", r.emp.fit_r2, ver_r2_min, r.emp.fit_r2 >= ver_r2_min);
      return t;
    };
  });

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "regenerate the published numerical artifacts");
  std::string rep_target;
  std::string rep_dir;
  std::string rep_points = "100";
  rep->add_option("artifact", rep_target, "fig1 | fig2 | bounds | laplace-table | all")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "bounds", "laplace-table", "all"}));
  rep->add_option("--out-dir", rep_dir, "directory for the files (required for 'all')");
  rep->add_option("--points", rep_points, "A points for fig1")->capture_default_str();
  rep->callback([&] {
    action = [&] {
      auto build = [&](const std::string& which) {
        if (which == "fig1") return fig1_table(int(parse_count(rep_points, "--points")));
        if (which == "fig2") return fig2_table();
        if (which == "bounds") return bounds_table();
        return laplace_table();
      };
      const std::string ext = spec.format == Format::Csv ? ".csv" : ".json";
      if (rep_target == "all" || !rep_dir.empty()) {
        if (rep_dir.empty()) throw UsageError("reproduce all needs --out-dir");
        std::filesystem::create_directories(rep_dir);
        Table index;
        index.columns = {"artifact", "path", "rows"};
        const std::vector<std::string> targets =
            rep_target == "all" ? std::vector<std::string>{"fig1", "fig2", "bounds", "laplace-table"}
                                : std::vector<std::string>{rep_target};
        for (const auto& which : targets) {
          const Table t = build(which);
          const auto path = (std::filesystem::path(rep_dir) / (which + ext)).string();
          emit_to(t, {spec.format, path, spec.precision}, out);
          index.add_row({which, path, std::int64_t(t.rows.size())});
        }
        return index;
      }
      return build(rep_target);
    };
  });

  // specfun-probe (hidden: a debugging aid)
  auto* prb = app.add_subcommand("specfun-probe", "raw special-function evaluation");
  prb->group("");
  std::string prb_fn;
  std::vector<std::string> prb_args;
  prb->add_option("fn", prb_fn, "function name")->required();
  prb->add_option("args", prb_args, "arguments; '2.5i' is imaginary")->allow_extra_args();
  prb->callback([&] {
    action = [&] { return probe(prb_fn, prb_args); };
  });

  if (args.empty()) {
    err << app.help();
    return 2;
  }
  std::string active;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    spec.format = format == "json" ? Format::Json : Format::Csv;
    spec.precision = precision;
    for (const auto* sub : app.get_subcommands()) active = sub->get_name();
    const Table t = action();
    emit_to(t, spec, out);
    if (verify_failed) throw VerificationFailed("one or more verification checks failed");
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << (active.empty() ? app.help() : app.get_subcommand(active)->help());
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    write_error_record(err, e.code(), e.what(), active);
    return 1;
  } catch (const std::exception& e) {
    write_error_record(err, "cli.Internal", e.what(), active);
    return 1;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qsd::cli
