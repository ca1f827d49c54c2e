#include "npoint/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "npoint/airy.hpp"
#include "npoint/errors.hpp"
#include "npoint/intersection.hpp"
#include "npoint/kdv.hpp"
#include "npoint/parallel.hpp"

namespace npoint {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fixed_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

CheckResult numeric(std::string id, std::string anchor, double residual, double tolerance) {
  CheckResult c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.passed = std::isfinite(residual) && residual < tolerance;
  c.residual = sci(residual);
  c.tolerance = sci(tolerance);
  return c;
}

CheckResult exact(std::string id, std::string anchor, const Rational& residual) {
  CheckResult c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.exact = true;
  c.passed = residual == 0;
  c.residual = to_string(residual);
  c.tolerance = "exact";
  return c;
}

// First nonzero coefficient of a residual series, or zero.
Rational series_residual(const TruncatedSeries& s) { return s.is_zero() ? Rational(0) : s.terms().begin()->second; }

// A sensitivity control passes when the residual does not vanish.
CheckResult control(std::string id, std::string anchor, const Rational& residual) {
  CheckResult c = exact(std::move(id), std::move(anchor), residual);
  c.passed = residual != 0;
  c.tolerance = "nonzero";
  return c;
}

double rel(const Real& a, const Real& b) { return (abs(a - b) / abs(b)).to_double(); }

class SuiteRunner {
 public:
  explicit SuiteRunner(VerificationReport& report) : report_(report) {}

  void run(const std::function<CheckResult()>& check) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult c = check();
    c.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report_.checks.push_back(std::move(c));
  }

 private:
  VerificationReport& report_;
};

IntersectionEngine make_engine(const RunConfig& config, InitialValues initial = {}) {
  return IntersectionEngine(EngineLimits{config.max_genus, config.max_points}, std::move(initial));
}

void airy_suite(const RunConfig& config, SuiteRunner& run) {
  const Precision bits = config.precision;
  for (double x : {0.3, 0.5, 1.0, 2.0})
    for (double a : {-1.0, 0.0, 1.0})
      for (double b : {-1.0, 0.0, 1.0})
        run.run([&] {
          PrecisionGuard guard(bits);
          const auto r = laplace_product(Real(x, bits), Real(a, bits), Real(b, bits), bits);
          return numeric("airy.laplace x=" + fixed_label(x) + " a=" + fixed_label(a) + " b=" + fixed_label(b),
                         "Laplace transform of an Airy product", r.relative_error, 1e-8);
        });
  for (double z : {0.0, 1.0, 2.0})
    for (double w : {0.0, 1.0, 2.0})
      run.run([&] {
        PrecisionGuard guard(bits);
        const auto r = kernel_integral_check(Real(z, bits), Real(w, bits), bits);
        return numeric("airy.kernel_integral z=" + fixed_label(z) + " w=" + fixed_label(w),
                       "Airy kernel integral representation", r.residual, 1e-10);
      });
  for (double x : {0.5, 1.0})
    run.run([&] {
      PrecisionGuard guard(bits);
      const auto r = kernel_laplace_n1(Real(x, bits), bits);
      return numeric("airy.kernel_laplace x=" + fixed_label(x), "one-point Airy kernel Laplace transform",
                     r.relative_error, 1e-8);
    });
}

void quadrature_suite(const RunConfig& config, SuiteRunner& run) {
  const Precision bits = config.precision;
  QuadratureSpec forced = config.quadrature;
  forced.precision = bits;
  forced.force_quadrature = true;
  for (double x : {0.3, 1.0, 2.0})
    run.run([&] {
      PrecisionGuard guard(bits);
      const std::vector<Real> v{Real(x, bits)};
      return numeric("quadrature.e1 x=" + fixed_label(x), "orthant integral, one-point closed form",
                     rel(e_integral(v, forced).value, e_closed_n1(v[0])), 1e-8);
    });
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 1.0}, std::pair{2.0, 0.5}})
    run.run([&] {
      PrecisionGuard guard(bits);
      const std::vector<Real> v{Real(a, bits), Real(b, bits)};
      return numeric("quadrature.e2 x=" + fixed_label(a) + "," + fixed_label(b), "orthant integral, erfc closed form",
                     rel(e_integral(v, forced).value, e_closed_n2(v[0], v[1])), 1e-8);
    });
  run.run([&] {
    Rational worst = 0;
    for (const auto& row : erf_series_check(20))
      if (row.residual != 0 && worst == 0) worst = row.residual;
    return exact("quadrature.erf_series k<=20", "erf series coefficients k!/(2k+1)!", worst);
  });

  QuadratureSpec spec = config.quadrature;
  spec.precision = bits;
  for (double x : {0.5, 1.0})
    run.run([&] {
      PrecisionGuard guard(bits);
      const std::vector<Real> v{Real(x, bits)};
      return numeric("quadrature.f1 x=" + fixed_label(x), "n-point formula against exp(x^3/24)/x^2",
                     rel(f_eval(v, spec).full, one_point_closed(v[0])), 1e-6);
    });
  for (double x : {0.5, 1.0})
    run.run([&] {
      PrecisionGuard guard(bits);
      const std::vector<Real> v{Real(x, bits), Real(x, bits)};
      return numeric("quadrature.f2 x=" + fixed_label(x) + "," + fixed_label(x),
                     "n-point formula against the two-point closed form",
                     rel(f_eval(v, spec).full, two_point_closed(v[0], v[1])), 1e-6);
    });
  PrecisionGuard guard(bits);
  const std::vector<Real> v3(3, Real(0.5, bits));
  GenusSum sum;
  run.run([&] {
    IntersectionEngine engine = make_engine(config);
    sum = genus_sum_eval(engine, v3, 1e-8, config.max_genus);
    return numeric("quadrature.f3_genus_tail x=0.5,0.5,0.5", "genus expansion tail bound", sum.tail_estimate, 1e-5);
  });
  run.run([&] {
    const FResult f = f_eval(v3, spec);
    return numeric("quadrature.f3 x=0.5,0.5,0.5", "n-point formula against the genus expansion",
                   abs(f.full - sum.stable_value - sum.unstable_term).to_double(), 1e-4);
  });
}

void kdv_suite(const RunConfig& config, SuiteRunner& run) {
  IntersectionEngine engine = make_engine(config);
  TauCoefficients tau(engine);
  run.run([&] {
    return exact("kdv.two_variable order=18", "two-variable tau identity",
                 series_residual(two_variable_identity_check(tau, 18)));
  });
  const TruncatedSeries kernel = bilinear_kernel(3) * Rational(-1);
  run.run([&] {
    return exact("kdv.kernel_x3", "kernel coefficient of x^-3 equals 5/24", kernel.coefficient({3, 0}) - Rational(5, 24));
  });
  run.run([&] {
    return exact("kdv.kernel_x2y", "kernel coefficient of x^-2 y^-1 equals 1/2", kernel.coefficient({2, 1}) - Rational(1, 2));
  });
  run.run([&] {
    int mismatched = 0;
    for (const auto& row : rescaling_consistency(12))
      if (!row.matches) ++mismatched;
    return exact("kdv.rescaling order=12", "real and complex conventions agree", mismatched);
  });
  const int genus = std::min(3, config.max_genus);
  const int points = std::min(10, config.max_points);
  run.run([&] {
    const KdvResidual r = kdv_residual(engine.build_complete(genus, points), points, genus);
    const auto bad = r.first_nonzero();
    return exact("kdv.residual degree=" + std::to_string(points), "first KdV equation on exp(F)",
                 bad ? bad->second : Rational(0));
  });
  run.run([&] {
    IntersectionEngine perturbed = make_engine(config, InitialValues{1, Rational(1, 24) + Rational(1, 1000)});
    const KdvResidual r = kdv_residual(perturbed.build_complete(genus, points), points, genus);
    const auto bad = r.first_nonzero();
    return control("kdv.residual_control tau1+1/1000", "first KdV equation, perturbed <tau_1>",
                   bad ? bad->second : Rational(0));
  });
}

void fay_suite(const RunConfig& config, SuiteRunner& run) {
  IntersectionEngine engine = make_engine(config);
  TauCoefficients tau(engine);
  run.run([&] {
    return exact("fay.n1 order=12", "determinant identity, n=1", series_residual(fay_identity_check(tau, 1, 12)));
  });
  run.run([&] {
    return exact("fay.n2 order=8", "determinant identity, n=2", series_residual(fay_identity_check(tau, 2, 8)));
  });
  run.run([&] {
    IntersectionEngine perturbed = make_engine(config, InitialValues{1, Rational(1, 24) + Rational(1, 1000)});
    TauCoefficients bad(perturbed);
    return control("fay.n2_control tau1+1/1000", "determinant identity, perturbed <tau_1>",
                   series_residual(fay_identity_check(bad, 2, 6)));
  });
}

void gkz_suite(const RunConfig& config, SuiteRunner& run) {
  const Precision bits = config.precision;
  PrecisionGuard guard(bits);
  const std::vector<std::pair<std::string, QuadraticForm>> forms = {
      {"q1", QuadraticForm{1, {{{2}, Real(-1.0)}, {{1}, Real(0.3)}}}},
      {"q2", QuadraticForm{2, {{{2, 0}, Real(-1.0)}, {{1, 1}, Real(0.4)}, {{0, 2}, Real(-0.8)}, {{0, 1}, Real(0.2)}}}},
      {"q3", QuadraticForm{2, {{{2, 0}, Real(-0.7)}, {{1, 1}, Real(-0.3)}, {{0, 2}, Real(-1.2)}, {{1, 0}, Real(0.5)}, {{0, 0}, Real(0.1)}}}},
  };
  QuadratureSpec spec = config.quadrature;
  spec.precision = bits;
  for (const auto& [name, q] : forms) {
    GkzResidual r;
    run.run([&] {
      r = gkz_residual(q, spec);
      return numeric("gkz." + name + ".homogeneity1", "homogeneity equation", r.homogeneity[0], 1e-5);
    });
    for (std::size_t i = 1; i < r.homogeneity.size(); ++i)
      run.run([&] {
        return numeric("gkz." + name + ".homogeneity" + std::to_string(i + 1), "homogeneity equation", r.homogeneity[i], 1e-5);
      });
    run.run([&] { return numeric("gkz." + name + ".exchange", r.exchange_equation, r.exchange, 1e-5); });
    run.run([&] { return numeric("gkz." + name + ".scaling", "scaling s -> 1.3 s", r.scaling, 1e-8); });
  }
}

void string_suite(const RunConfig& config, SuiteRunner& run) {
  IntersectionEngine engine = make_engine(config);
  run.run([&] {
    return exact("string.two_point degree=14", "string equation (x1+x2)F(x1,x2) = F(x1,x2,0)",
                 series_residual(string_equation_residual(engine, 14)));
  });
  run.run([&] {
    Rational bad = 0;
    for (int g = 1; g <= std::min(10, config.max_genus) && bad == 0; ++g)
      bad = engine.correlator(g, {3 * g - 2}) - one_point_coefficient(g);
    return exact("string.one_point g<=10", "<tau_{3g-2}> = 1/(24^g g!)", bad);
  });
  run.run([&] {
    const TruncatedSeries oracle = two_point_correlators_from_series(21);
    Rational bad = 0;
    for (int a = 0; a <= 20 && bad == 0; ++a)
      for (int b = 0; a + b <= 20 && bad == 0; ++b)
        bad = engine.correlator_any_genus({a, b}) - oracle.coefficient({a, b});
    return exact("string.two_point_oracle d1+d2<=20", "two-point closed series", bad);
  });
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  if (name == "text") return OutputFormat::text;
  throw DomainError("unknown output format '" + name + "'");
}

std::string to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::text: return "text";
  }
  return "text";
}

void RunConfig::validate() const {
  if (precision < 64) throw DomainError("precision must be at least 64 bits");
  if (max_genus < 1 || max_points < 1 || max_degree < 1) throw DomainError("caps must be positive");
  quadrature.validate();
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"airy", "quadrature", "kdv", "fay", "gkz", "string", "all"};
  return names;
}

VerificationReport run_suite(const std::string& suite, const RunConfig& config) {
  config.validate();
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw DomainError("unknown suite '" + suite + "'");
  if (config.threads) set_thread_count(config.threads);
  VerificationReport report;
  report.suite = suite;
  SuiteRunner run(report);
  const bool all = suite == "all";
  if (all || suite == "string") string_suite(config, run);
  if (all || suite == "airy") airy_suite(config, run);
  if (all || suite == "quadrature") quadrature_suite(config, run);
  if (all || suite == "kdv") kdv_suite(config, run);
  if (all || suite == "fay") fay_suite(config, run);
  if (all || suite == "gkz") gkz_suite(config, run);
  return report;
}

std::string render(const VerificationReport& report, OutputFormat format, bool timings) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::json: {
      nlohmann::ordered_json j;
      j["suite"] = report.suite;
      j["status"] = report.passed() ? "pass" : "fail";
      j["checks"] = nlohmann::ordered_json::array();
      for (const auto& c : report.checks) {
        nlohmann::ordered_json row;
        row["id"] = c.id;
        row["anchor"] = c.anchor;
        row["status"] = c.passed ? "pass" : "fail";
        row["exact"] = c.exact;
        row["residual"] = c.residual;
        row["tolerance"] = c.tolerance;
        if (timings) row["runtime_s"] = c.runtime_seconds;
        j["checks"].push_back(std::move(row));
      }
      os << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv: {
      os << "suite,id,anchor,status,residual,tolerance" << (timings ? ",runtime_s" : "") << '\n';
      auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
      };
      for (const auto& c : report.checks) {
        os << report.suite << ',' << quote(c.id) << ',' << quote(c.anchor) << ',' << (c.passed ? "pass" : "fail") << ','
           << c.residual << ',' << c.tolerance;
        if (timings) os << ',' << sci(c.runtime_seconds);
        os << '\n';
      }
      break;
    }
    case OutputFormat::text: {
      for (const auto& c : report.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.id << "  residual " << c.residual << "  tolerance " << c.tolerance;
        if (timings) os << "  " << sci(c.runtime_seconds) << " s";
        os << "  [" << c.anchor << "]\n";
      }
      os << "suite " << report.suite << ": " << (report.passed() ? "pass" : "fail") << " (" << report.checks.size()
         << " checks)\n";
      break;
    }
  }
  return os.str();
}

}  // namespace npoint
