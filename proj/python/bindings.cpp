#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

#include "qsd/distribution.hpp"
#include "qsd/eigen.hpp"
#include "qsd/errors.hpp"
#include "qsd/laplace.hpp"
#include "qsd/moments.hpp"
#include "qsd/simulate.hpp"
#include "qsd/specfun.hpp"

namespace py = pybind11;
using namespace qsd;

namespace {

moments::Method moment_method(const std::string& name) {
  if (name == "recurrence") return moments::Method::Recurrence;
  if (name == "2f2") return moments::Method::ClosedForm2F2;
  if (name == "powerseries") return moments::Method::PowerSeries;
  if (name == "quadrature") return moments::Method::Quadrature;
  throw py::value_error("unknown moment method '" + name + "'");
}

laplace::Method laplace_method(const std::string& name) {
  if (name == "moment_series") return laplace::Method::MomentSeries;
  if (name == "kdf1") return laplace::Method::KdF1;
  if (name == "kdf2") return laplace::Method::KdF2;
  if (name == "bessel") return laplace::Method::BesselForm;
  if (name == "quadrature") return laplace::Method::Quadrature;
  throw py::value_error("unknown Laplace method '" + name + "'");
}

specfun::OrderParam order_of(std::complex<double> v) {
  if (v.imag() != 0.0 && v.real() != 0.0) throw py::value_error("order must be real or purely imaginary");
  return specfun::OrderParam::from_complex(v);
}

// Applies f elementwise to a float or an array of floats, keeping the shape.
template <class F>
py::object elementwise(F f, const py::object& x) {
  if (py::isinstance<py::float_>(x) || py::isinstance<py::int_>(x)) return py::float_(f(x.cast<double>()));
  auto in = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(x);
  if (!in) throw py::type_error("expected a float or an array of floats");
  py::array_t<double> out(std::vector<py::ssize_t>(in.shape(), in.shape() + in.ndim()));
  const double* src = in.data();
  double* dst = out.mutable_data();
  for (py::ssize_t i = 0; i < in.size(); ++i) dst[i] = f(src[i]);
  return std::move(out);
}

py::dict comparison_dict(const simulate::EmpiricalQsd& e, const simulate::Comparison& c) {
  py::dict d;
  d["A"] = e.A;
  d["horizon"] = e.horizon;
  d["dt"] = e.dt;
  d["paths"] = e.paths;
  d["survivors"] = e.survivors.size();
  d["lambda_hat"] = e.lambda_hat;
  d["lambda_hat_stderr"] = e.lambda_hat_stderr;
  d["fit_r2"] = e.fit_r2;
  d["lambda_analytic"] = c.lambda_analytic;
  d["lambda_rel_error"] = c.lambda_rel_error;
  d["sup_cdf_distance"] = c.sup_cdf_distance;
  d["bin_edges"] = e.bin_edges;
  d["conditional_density"] = e.conditional_density;
  std::vector<double> t, s;
  for (const auto& p : e.survival) {
    t.push_back(p.t);
    s.push_back(p.fraction);
  }
  d["survival_t"] = t;
  d["survival"] = s;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quasi-stationary distribution of dR = dt + R dB absorbed at A";

  static py::exception<Error> error(m, "QsdError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object cls = error;
      py::object instance = cls(e.what());
      instance.attr("code") = e.code();
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  // eigen
  py::class_<eigen::EigenSolution>(m, "EigenSolution")
      .def_readonly("A", &eigen::EigenSolution::A)
      .def_readonly("lambda_", &eigen::EigenSolution::lambda)
      .def_readonly("residual", &eigen::EigenSolution::residual)
      .def_readonly("warnings", &eigen::EigenSolution::warnings)
      .def_property_readonly("xi", [](const eigen::EigenSolution& s) { return s.xi.value(); })
      .def("__repr__", [](const eigen::EigenSolution& s) {
        return "EigenSolution(A=" + std::to_string(s.A) + ", lambda=" + std::to_string(s.lambda) + ")";
      });
  m.def("principal_lambda", &eigen::principal_lambda, py::arg("A"), py::arg("tol") = eigen::kDefaultTol);
  m.def("critical_A", &eigen::critical_A, py::arg("tol") = eigen::kDefaultTol);
  m.def("lambda_bounds", [](double A) {
    const auto b = eigen::lambda_bounds(A);
    return py::make_tuple(b.lo, b.hi);
  });

  // distribution
  py::class_<distribution::QsdParams>(m, "QsdParams")
      .def_property_readonly("A", &distribution::QsdParams::A)
      .def_property_readonly("lambda_", &distribution::QsdParams::lambda)
      .def_readonly("normalizer", &distribution::QsdParams::normalizer)
      .def_readonly("eigen", &distribution::QsdParams::eigen);
  m.def("params_for", &distribution::params_for, py::arg("A"));
  m.def(
      "qsd_pdf",
      [](const distribution::QsdParams& p, const py::object& x) {
        return elementwise([&](double v) { return distribution::qsd_pdf(p, v); }, x);
      },
      py::arg("params"), py::arg("x"));
  m.def(
      "qsd_cdf",
      [](const distribution::QsdParams& p, const py::object& x) {
        return elementwise([&](double v) { return distribution::qsd_cdf(p, v); }, x);
      },
      py::arg("params"), py::arg("x"));
  m.def(
      "stationary_pdf", [](const py::object& x) { return elementwise(&distribution::stationary_pdf, x); },
      py::arg("x"));
  m.def(
      "stationary_cdf", [](const py::object& x) { return elementwise(&distribution::stationary_cdf, x); },
      py::arg("x"));

  // moments
  m.def(
      "moments",
      [](const distribution::QsdParams& p, int n_max, const std::string& method) {
        return moments::moment_series(p, n_max, moment_method(method)).values;
      },
      py::arg("params"), py::arg("n_max"), py::arg("method") = "recurrence");
  m.def("variance", &moments::variance, py::arg("params"));

  // laplace
  m.def(
      "laplace",
      [](const distribution::QsdParams& p, double s, const std::string& method) {
        return laplace::evaluate(p, s, laplace_method(method)).value;
      },
      py::arg("params"), py::arg("s"), py::arg("method") = "bessel");
  m.def("stationary_laplace", &laplace::stationary_laplace, py::arg("s"));

  // simulate
  m.def(
      "simulate",
      [](double A, double r0, double dt, double horizon, std::uint64_t paths, std::uint64_t seed, int bins,
         unsigned threads) {
        simulate::SimConfig c;
        c.A = A;
        c.r0 = r0;
        c.dt = dt;
        c.horizon = horizon;
        c.paths = paths;
        c.seed = seed;
        c.bins = bins;
        c.threads = threads;
        simulate::EmpiricalQsd e;
        {
          py::gil_scoped_release release;
          e = simulate::simulate(c);
        }
        return comparison_dict(e, simulate::compare_to_analytic(e, distribution::params_for(A)));
      },
      py::arg("A"), py::arg("r0") = 0.0, py::arg("dt") = 1e-4, py::arg("horizon") = 0.0,
      py::arg("paths") = 200000, py::arg("seed") = 42, py::arg("bins") = 64, py::arg("threads") = 0);

  // special functions
  py::module_ sf = m.def_submodule("specfun", "special functions");
  sf.def("gamma", &specfun::gamma);
  sf.def("rgamma", &specfun::rgamma);
  sf.def("pochhammer", &specfun::pochhammer);
  sf.def("hyp1f1", [](std::complex<double> a, std::complex<double> b, double z) { return specfun::hyp1f1(a, b, z); });
  sf.def("hyp2f2", [](std::complex<double> a1, std::complex<double> a2, std::complex<double> b1,
                      std::complex<double> b2, double z) { return specfun::hyp2f2(a1, a2, b1, b2, z); });
  sf.def("whittaker_m", [](double kappa, std::complex<double> mu, double z) { return specfun::whittaker_m(kappa, mu, z); });
  sf.def("whittaker_w", [](double kappa, std::complex<double> mu, double z) { return specfun::whittaker_w(kappa, mu, z); });
  sf.def("bessel_i", [](std::complex<double> nu, double z) { return specfun::bessel_i(nu, z); });
  sf.def("bessel_k", [](std::complex<double> nu, double z) { return specfun::bessel_k(order_of(nu), z); });
  sf.def("kampe_de_feriet", [](double a1, double a2, double b1, double b2, double u, double v) {
    return specfun::kampe_de_feriet(a1, a2, b1, b2, u, v);
  });
}
