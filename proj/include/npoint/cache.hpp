#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "npoint/intersection.hpp"

namespace npoint {

/// Environment variable that overrides the cache location.
inline constexpr const char* kCacheEnvironmentVariable = "NPOINT_CACHE";

/// $NPOINT_CACHE if set and nonempty, otherwise "npoint_cache.txt" in the working directory.
std::filesystem::path default_cache_path();

/// "g <g> d <d1,...> = <num>/<den>"; exponents non-increasing.
std::string format_cache_line(const CorrelatorKey& key, const Rational& value);

/// Inverse of format_cache_line. ParseError on malformed text, IntegrityError on a zero
/// denominator or a violated dimension constraint.
std::pair<CorrelatorKey, Rational> parse_cache_line(const std::string& line, std::size_t line_number);

/// Text cache. An optional first line "# coverage g <G> n <N>" records the table coverage;
/// other lines starting with '#' and blank lines are ignored. Entries are written sorted by
/// genus, point count, then exponents. Duplicated keys are an IntegrityError.
void write_cache(std::ostream& out, const CorrelatorTable& table);
CorrelatorTable read_cache(std::istream& in);

/// File variants; IoError when the file cannot be opened.
void write_cache_file(const std::filesystem::path& path, const CorrelatorTable& table);
CorrelatorTable read_cache_file(const std::filesystem::path& path);

}  // namespace npoint
