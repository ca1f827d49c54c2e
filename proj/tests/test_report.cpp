#include <doctest.h>

#include <algorithm>

#include <json.hpp>

#include "npoint/errors.hpp"
#include "npoint/report.hpp"

using namespace npoint;

TEST_CASE("output formats") {
  CHECK(parse_output_format("json") == OutputFormat::json);
  CHECK(parse_output_format("csv") == OutputFormat::csv);
  CHECK(parse_output_format("text") == OutputFormat::text);
  CHECK(to_string(OutputFormat::csv) == "csv");
  CHECK_THROWS_AS(parse_output_format("yaml"), DomainError);
}

TEST_CASE("run configuration limits") {
  RunConfig config;
  CHECK_NOTHROW(config.validate());
  config.precision = 32;
  CHECK_THROWS_AS(config.validate(), DomainError);
  config = RunConfig{};
  config.max_genus = 0;
  CHECK_THROWS_AS(config.validate(), DomainError);
  CHECK_THROWS_AS(run_suite("string", config), DomainError);
  CHECK_THROWS_AS(run_suite("everything", RunConfig{}), DomainError);
}

TEST_CASE("exact suites render deterministically") {
  RunConfig config;
  for (const char* suite : {"string", "kdv", "fay"}) {
    const auto report = run_suite(suite, config);
    CHECK(report.passed());
    CHECK(report.checks.size() >= 3);
    for (const auto& c : report.checks) {
      CHECK(c.exact);
      CHECK(!c.anchor.empty());
    }
    CHECK(render(report, OutputFormat::text, false) == render(run_suite(suite, config), OutputFormat::text, false));
  }

  const auto report = run_suite("fay", config);
  const auto doc = nlohmann::json::parse(render(report, OutputFormat::json, false));
  CHECK(doc["suite"] == "fay");
  CHECK(doc["status"] == "pass");
  REQUIRE(doc["checks"].size() == report.checks.size());
  CHECK(doc["checks"][0]["residual"] == "0");
  CHECK_FALSE(doc["checks"][0].contains("runtime_s"));
  CHECK(nlohmann::json::parse(render(report, OutputFormat::json, true))["checks"][0].contains("runtime_s"));

  const auto csv = render(report, OutputFormat::csv, false);
  CHECK(csv.rfind("suite,id,anchor,status,residual,tolerance\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(report.checks.size() + 1));

  const auto text = render(report, OutputFormat::text, false);
  CHECK(text.find("PASS fay.n1") == 0);
  CHECK(text.find("suite fay: pass") != std::string::npos);
}
