#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "npoint/quadrature.hpp"

namespace npoint {

enum class OutputFormat { json, csv, text };

OutputFormat parse_output_format(const std::string& name);
std::string to_string(OutputFormat format);

/// Settings shared by every command.
struct RunConfig {
  Precision precision = kDefaultPrecision;
  int max_genus = 12;
  int max_points = 10;
  int max_degree = 14;
  QuadratureSpec quadrature;
  std::filesystem::path cache_path;
  OutputFormat format = OutputFormat::text;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Include wall-clock runtimes in reports (makes output run-dependent).
  bool timings = false;

  /// DomainError unless all caps are positive and precision >= 64.
  void validate() const;
};

struct CheckResult {
  std::string id;
  /// Short name of the identity or formula the check exercises.
  std::string anchor;
  bool passed = false;
  /// Exact checks print the residual as a rational ("0" when it vanishes); numeric checks as %.3e.
  bool exact = false;
  std::string residual;
  std::string tolerance;
  double runtime_seconds = 0;
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
};

const std::vector<std::string>& suite_names();

/// Runs one of airy, quadrature, kdv, fay, gkz, string, or all. DomainError on an unknown name.
VerificationReport run_suite(const std::string& suite, const RunConfig& config);

std::string render(const VerificationReport& report, OutputFormat format, bool timings);

}  // namespace npoint
