#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "npoint/cache.hpp"
#include "npoint/errors.hpp"
#include "npoint/intersection.hpp"
#include "npoint/quadrature.hpp"
#include "npoint/real.hpp"
#include "npoint/report.hpp"

namespace py = pybind11;
using namespace npoint;

namespace {

std::vector<Real> to_reals(const std::vector<double>& x, Precision bits) {
  std::vector<Real> out;
  for (double v : x) out.emplace_back(v, bits);
  return out;
}

// Decimal digits that cover the binary precision.
int digits_for(Precision bits) { return static_cast<int>(bits * 0.30103) + 1; }

py::dict f_eval_py(const std::vector<double>& x, Precision precision, bool force_quadrature) {
  PrecisionGuard guard(precision);
  QuadratureSpec spec;
  spec.precision = precision;
  spec.force_quadrature = force_quadrature;
  const auto v = to_reals(x, precision);
  const FResult r = f_eval(v, spec);
  const int digits = digits_for(precision);
  py::dict out;
  out["full"] = r.full.to_string(digits);
  out["stable"] = r.stable.to_string(digits);
  out["unstable"] = r.unstable.to_string(digits);
  out["error_estimate"] = r.error_estimate;
  return out;
}

std::string e_integral_py(const std::vector<double>& x, Precision precision, bool force_quadrature) {
  PrecisionGuard guard(precision);
  QuadratureSpec spec;
  spec.precision = precision;
  spec.force_quadrature = force_quadrature;
  return e_integral(to_reals(x, precision), spec).value.to_string(digits_for(precision));
}

std::string verify_py(const std::string& suite, Precision precision) {
  RunConfig config;
  config.precision = precision;
  return render(run_suite(suite, config), OutputFormat::json, false);
}

}  // namespace

PYBIND11_MODULE(_npoint, m) {
  m.doc() = "Exact psi-class intersection numbers and numerical n-point function checks.";

  auto base = py::register_exception<Error>(m, "NpointError", PyExc_RuntimeError);
  py::register_exception<SizeLimitError>(m, "SizeLimitError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<RangeError>(m, "RangeError", base);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base);
  py::register_exception<MissingDataError>(m, "MissingDataError", base);
  py::register_exception<IntegrityError>(m, "IntegrityError", base);
  py::register_exception<IoError>(m, "IoError", base);
  py::register_exception<ParseError>(m, "ParseError", base);

  py::class_<IntersectionEngine>(m, "Engine")
      .def(py::init([](int max_genus, int max_points) { return IntersectionEngine(EngineLimits{max_genus, max_points}); }),
           py::arg("max_genus") = 12, py::arg("max_points") = 10)
      .def("correlator",
           [](IntersectionEngine& e, int genus, std::vector<int> d) { return to_string(e.correlator(genus, std::move(d))); },
           py::arg("genus"), py::arg("exponents"), "Correlator as a 'num/den' string.")
      .def("correlator_any_genus",
           [](IntersectionEngine& e, std::vector<int> d) { return to_string(e.correlator_any_genus(std::move(d))); },
           py::arg("exponents"))
      .def(
          "polynomial",
          [](IntersectionEngine& e, int genus, int points) {
            const NPointPolynomial p = fg_polynomial(e, genus, points);
            py::list terms;
            for (const auto& [d, c] : p.coefficients) terms.append(py::make_tuple(py::tuple(py::cast(d)), to_string(c)));
            return py::make_tuple(p.unstable, terms);
          },
          py::arg("genus"), py::arg("points"), "(unstable, [(exponents, 'num/den'), ...]) for F_{g,n}.")
      .def(
          "write_cache",
          [](IntersectionEngine& e, const std::string& path, int genus, int points) {
            const CorrelatorTable table = e.build_complete(genus, points);
            write_cache_file(path, table);
            return table.size();
          },
          py::arg("path"), py::arg("genus"), py::arg("points"))
      .def(
          "load_cache", [](IntersectionEngine& e, const std::string& path) { e.preload(read_cache_file(path)); },
          py::arg("path"));

  m.def("f_eval", &f_eval_py, py::arg("x"), py::arg("precision") = kDefaultPrecision,
        py::arg("force_quadrature") = false, "n-point function by quadrature; values as decimal strings.");
  m.def("e_integral", &e_integral_py, py::arg("x"), py::arg("precision") = kDefaultPrecision,
        py::arg("force_quadrature") = false);
  m.def(
      "genus_sum",
      [](const std::vector<double>& x, double tolerance, int max_genus, Precision precision) {
        PrecisionGuard guard(precision);
        IntersectionEngine engine(EngineLimits{max_genus, std::max<int>(10, static_cast<int>(x.size()))});
        const GenusSum s = genus_sum_eval(engine, to_reals(x, precision), tolerance, max_genus);
        py::dict out;
        out["value"] = (s.stable_value + s.unstable_term).to_string(digits_for(precision));
        out["unstable"] = s.unstable_term.to_string(digits_for(precision));
        out["genus_used"] = s.genus_used;
        out["tail_estimate"] = s.tail_estimate;
        return out;
      },
      py::arg("x"), py::arg("tolerance") = 1e-8, py::arg("max_genus") = 12, py::arg("precision") = kDefaultPrecision);
  m.def("verify", &verify_py, py::arg("suite"), py::arg("precision") = kDefaultPrecision,
        "JSON report for one verification suite.");
  m.def("suite_names", &suite_names);
}
