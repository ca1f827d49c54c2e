#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "npoint/cache.hpp"
#include "npoint/errors.hpp"
#include "npoint/intersection.hpp"
#include "npoint/parallel.hpp"
#include "npoint/quadrature.hpp"
#include "npoint/report.hpp"

using namespace npoint;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;
constexpr int kExitIo = 4;

struct Options {
  RunConfig config;
  std::string format = "text";
  std::string cache;
  int nodes = 16;
  int refine = 6;
  double target = 1e-12;
  double radius = 0;
};

std::string join(const std::vector<int>& v, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
  return out;
}

IntersectionEngine make_engine(const RunConfig& config) {
  IntersectionEngine engine(EngineLimits{config.max_genus, config.max_points});
  if (!config.cache_path.empty() && std::filesystem::exists(config.cache_path))
    engine.preload(read_cache_file(config.cache_path));
  return engine;
}

int cmd_tau(const RunConfig& config, int genus, const std::vector<int>& d) {
  IntersectionEngine engine = make_engine(config);
  const Rational value = engine.correlator(genus, d);
  const bool dimension_ok = satisfies_dimension(genus, d);
  const long sum = std::accumulate(d.begin(), d.end(), 0L);
  const long expected = 3L * genus - 3 + static_cast<long>(d.size());
  switch (config.format) {
    case OutputFormat::json: {
      json j;
      j["g"] = genus;
      j["d"] = d;
      j["num"] = value.get_num().get_str();
      j["den"] = value.get_den().get_str();
      j["value"] = to_string(value);
      j["dimension_ok"] = dimension_ok;
      if (dimension_ok && is_stable(genus, static_cast<int>(d.size())))
        j["cache_line"] = format_cache_line(make_key(genus, d), value);
      std::cout << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      std::cout << "g,d,num,den\n" << genus << ",\"" << join(d) << "\"," << value.get_num().get_str() << ','
                << value.get_den().get_str() << '\n';
      break;
    case OutputFormat::text:
      std::cout << to_string(value) << '\n';
      break;
  }
  if (!dimension_ok)
    std::cerr << "note: dimension mismatch (sum d = " << sum << ", 3g-3+n = " << expected << ")\n";
  return kExitOk;
}

int cmd_series(const RunConfig& config, int genus, int points) {
  IntersectionEngine engine = make_engine(config);
  const NPointPolynomial poly = fg_polynomial(engine, genus, points);
  // Every monomial: all distinct orderings of each stored exponent multiset.
  std::vector<std::pair<std::vector<int>, Rational>> terms;
  for (const auto& [multiset, c] : poly.coefficients) {
    std::vector<int> d = multiset;
    std::sort(d.begin(), d.end());
    do terms.emplace_back(d, c);
    while (std::next_permutation(d.begin(), d.end()));
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  switch (config.format) {
    case OutputFormat::json: {
      json j;
      j["g"] = genus;
      j["n"] = points;
      j["unstable"] = poly.unstable;
      j["terms"] = json::array();
      for (const auto& [d, c] : terms)
        j["terms"].push_back({{"d", d}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
      std::cout << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      std::cout << "d,num,den\n";
      for (const auto& [d, c] : terms)
        std::cout << '"' << join(d) << "\"," << c.get_num().get_str() << ',' << c.get_den().get_str() << '\n';
      break;
    case OutputFormat::text:
      if (poly.unstable) std::cout << "unstable (g, n) = (" << genus << ", " << points << ")\n";
      for (const auto& [d, c] : terms) std::cout << "d=" << join(d) << "  " << to_string(c) << '\n';
      break;
  }
  return kExitOk;
}

int cmd_eval(const RunConfig& config, const std::vector<double>& xs, const std::string& mode, double tolerance) {
  const Precision bits = config.precision;
  PrecisionGuard guard(bits);
  std::vector<Real> x;
  for (double v : xs) x.emplace_back(v, bits);
  QuadratureSpec spec = config.quadrature;
  spec.precision = bits;

  std::optional<FResult> quad;
  std::optional<GenusSum> series;
  if (mode != "series") quad = f_eval(x, spec);
  if (mode != "quadrature") {
    IntersectionEngine engine = make_engine(config);
    series = genus_sum_eval(engine, x, tolerance / 10, config.max_genus);
  }
  const int digits = std::max(20, static_cast<int>(bits * 0.30103) - 5);
  json j;
  j["x"] = xs;
  j["mode"] = mode;
  std::ostringstream text;
  if (quad) {
    j["quadrature"] = quad->full.to_string(digits);
    j["quadrature_error_estimate"] = quad->error_estimate;
    text << "quadrature  " << quad->full.to_string(digits) << '\n';
  }
  if (series) {
    const Real full = series->stable_value + series->unstable_term;
    j["series"] = full.to_string(digits);
    j["genus_used"] = series->genus_used;
    j["tail_estimate"] = series->tail_estimate;
    text << "series      " << full.to_string(digits) << "  (genus <= " << series->genus_used << ")\n";
  }
  bool ok = true;
  if (quad && series) {
    const double diff = abs(quad->full - series->stable_value - series->unstable_term).to_double();
    const double combined = tolerance + quad->error_estimate + series->tail_estimate;
    ok = diff <= combined;
    j["difference"] = diff;
    j["tolerance"] = combined;
    j["status"] = ok ? "pass" : "fail";
    char buf[96];
    std::snprintf(buf, sizeof buf, "difference  %.3e\ntolerance   %.3e\n", diff, combined);
    text << buf << (ok ? "pass" : "FAIL") << '\n';
  }
  switch (config.format) {
    case OutputFormat::json:
      std::cout << j.dump(2) << '\n';
      break;
    case OutputFormat::csv: {
      std::vector<std::string> keys, values;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "x") continue;
        keys.push_back(it.key());
        values.push_back(it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
      }
      std::cout << "x";
      for (const auto& k : keys) std::cout << ',' << k;
      std::cout << "\n\"";
      for (std::size_t i = 0; i < xs.size(); ++i) std::cout << (i ? "," : "") << xs[i];
      std::cout << '"';
      for (const auto& v : values) std::cout << ',' << v;
      std::cout << '\n';
      break;
    }
    case OutputFormat::text:
      std::cout << text.str();
      break;
  }
  return ok ? kExitOk : kExitVerification;
}

int cmd_verify(const RunConfig& config, const std::string& suite) {
  const VerificationReport report = run_suite(suite, config);
  std::cout << render(report, config.format, config.timings);
  return report.passed() ? kExitOk : kExitVerification;
}

int cmd_cache_build(const RunConfig& config, int genus, int points) {
  IntersectionEngine engine = make_engine(config);
  const CorrelatorTable table = engine.build_complete(genus, points);
  write_cache_file(config.cache_path, table);
  std::cout << "wrote " << table.size() << " entries to " << config.cache_path.string() << '\n';
  return kExitOk;
}

int cmd_cache_show(const RunConfig& config) {
  const CorrelatorTable table = read_cache_file(config.cache_path);
  switch (config.format) {
    case OutputFormat::json: {
      json j;
      if (table.coverage()) j["coverage"] = {{"g", table.coverage()->max_genus}, {"n", table.coverage()->max_points}};
      j["entries"] = json::array();
      std::ostringstream os;
      write_cache(os, table);
      std::istringstream is(os.str());
      for (std::string line; std::getline(is, line);)
        if (!line.empty() && line[0] != '#') {
          const auto [key, value] = parse_cache_line(line, 0);
          j["entries"].push_back({{"g", key.genus},
                                  {"d", key.exponents},
                                  {"num", value.get_num().get_str()},
                                  {"den", value.get_den().get_str()}});
        }
      std::cout << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      std::cout << "g,d,num,den\n";
      for (const auto& [key, value] : table.entries())
        std::cout << key.genus << ",\"" << join(key.exponents) << "\"," << value.get_num().get_str() << ','
                  << value.get_den().get_str() << '\n';
      break;
    case OutputFormat::text:
      write_cache(std::cout, table);
      break;
  }
  return kExitOk;
}

// Recomputes every cached entry and compares.
int cmd_cache_check(const RunConfig& config) {
  const CorrelatorTable table = read_cache_file(config.cache_path);
  IntersectionEngine engine(EngineLimits{config.max_genus, config.max_points});
  std::size_t bad = 0;
  for (const auto& [key, value] : table.entries())
    if (engine.correlator(key.genus, key.exponents) != value) {
      std::cerr << "mismatch: " << format_cache_line(key, value) << '\n';
      ++bad;
    }
  std::cout << table.size() << " entries, " << bad << " mismatched\n";
  return bad == 0 ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Psi-class intersection numbers, n-point functions and their verification suites"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--precision", opt.config.precision, "working precision in bits")->capture_default_str();
  app.add_option("--max-genus", opt.config.max_genus, "genus cap")->capture_default_str();
  app.add_option("--max-points", opt.config.max_points, "cap on the number of points")->capture_default_str();
  app.add_option("--max-degree", opt.config.max_degree, "series degree cap")->capture_default_str();
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
  app.add_option("--cache", opt.cache, "cache file (default $NPOINT_CACHE or npoint_cache.txt)");
  app.add_option("--threads", opt.config.threads, "worker threads, 0 for all cores")->capture_default_str();
  app.add_flag("--timings", opt.config.timings, "include runtimes in reports");
  app.add_option("--nodes", opt.nodes, "initial Gauss-Legendre nodes per dimension")->capture_default_str();
  app.add_option("--refine", opt.refine, "maximum node doublings")->capture_default_str();
  app.add_option("--target", opt.target, "absolute error target of the orthant quadrature")->capture_default_str();
  app.add_option("--radius", opt.radius, "truncation radius, 0 for automatic")->capture_default_str();

  int genus = 0, points = 0;
  std::vector<int> exponents;
  auto* tau = app.add_subcommand("tau", "one correlator <tau_d1 ... tau_dn>_g");
  tau->add_option("--g", genus, "genus")->required();
  tau->add_option("--d", exponents, "exponents, comma separated")->required()->delimiter(',');

  auto* series = app.add_subcommand("series", "coefficients of F_{g,n}");
  series->add_option("--g", genus, "genus")->required();
  series->add_option("--n", points, "number of points")->required();

  std::vector<double> xs;
  std::string mode = "both";
  double tolerance = 1e-6;
  auto* eval = app.add_subcommand("eval", "evaluate the n-point function");
  eval->add_option("--x", xs, "arguments, comma separated")->required()->delimiter(',');
  eval->add_option("--mode", mode, "quadrature, series or both")->check(CLI::IsMember({"quadrature", "series", "both"}))->capture_default_str();
  eval->add_option("--tol", tolerance, "agreement tolerance for mode both")->capture_default_str();

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));

  auto* cache = app.add_subcommand("cache", "build, show or check the correlator cache");
  cache->require_subcommand(1);
  int cache_genus = 6, cache_points = 6;
  auto* build = cache->add_subcommand("build", "compute a complete table and write it");
  build->add_option("--genus", cache_genus, "genus bound")->capture_default_str();
  build->add_option("--points", cache_points, "point bound")->capture_default_str();
  auto* show = cache->add_subcommand("show", "print the cache");
  auto* check = cache->add_subcommand("check", "recompute and compare every entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    RunConfig& config = opt.config;
    config.format = parse_output_format(opt.format);
    config.cache_path = opt.cache.empty() ? default_cache_path() : std::filesystem::path(opt.cache);
    config.quadrature.precision = config.precision;
    config.quadrature.nodes_per_dim = opt.nodes;
    config.quadrature.refinement_levels = opt.refine;
    config.quadrature.target_abs_error = opt.target;
    config.quadrature.truncation_radius = opt.radius;
    config.validate();
    if (config.threads) set_thread_count(config.threads);

    if (tau->parsed()) return cmd_tau(config, genus, exponents);
    if (series->parsed()) return cmd_series(config, genus, points);
    if (eval->parsed()) return cmd_eval(config, xs, mode, tolerance);
    if (verify->parsed()) return cmd_verify(config, suite);
    if (build->parsed()) return cmd_cache_build(config, cache_genus, cache_points);
    if (show->parsed()) return cmd_cache_show(config);
    if (check->parsed()) return cmd_cache_check(config);
  } catch (const SizeLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IntegrityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  }
  return kExitUsage;
}
