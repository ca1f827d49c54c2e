#include "npoint/cache.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "npoint/errors.hpp"

namespace npoint {

namespace {

bool parse_int(const std::string& text, int& out) {
  if (text.empty() || text.size() > 9) return false;
  if (!std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) return false;
  out = std::stoi(text);
  return true;
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> words;
  for (std::string w; is >> w;) words.push_back(w);
  return words;
}

// Cache order: genus, then point count, then exponents lexicographically.
bool cache_less(const CorrelatorKey& a, const CorrelatorKey& b) {
  if (a.genus != b.genus) return a.genus < b.genus;
  if (a.points() != b.points()) return a.points() < b.points();
  return a.exponents < b.exponents;
}

}  // namespace

std::filesystem::path default_cache_path() {
  const char* env = std::getenv(kCacheEnvironmentVariable);
  if (env != nullptr && *env != '\0') return env;
  return "npoint_cache.txt";
}

std::string format_cache_line(const CorrelatorKey& key, const Rational& value) {
  std::string out = "g " + std::to_string(key.genus) + " d ";
  for (std::size_t i = 0; i < key.exponents.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(key.exponents[i]);
  }
  Rational v = value;
  v.canonicalize();
  out += " = " + v.get_num().get_str() + "/" + v.get_den().get_str();
  return out;
}

std::pair<CorrelatorKey, Rational> parse_cache_line(const std::string& line, std::size_t line_number) {
  const auto words = split_words(line);
  if (words.size() != 6 || words[0] != "g" || words[2] != "d" || words[4] != "=")
    throw ParseError(line_number, "expected 'g <g> d <d1,...> = <num>/<den>'");
  int genus = 0;
  if (!parse_int(words[1], genus)) throw ParseError(line_number, "bad genus '" + words[1] + "'");
  std::vector<int> exponents;
  std::istringstream ds(words[3]);
  for (std::string item; std::getline(ds, item, ',');) {
    int e = 0;
    if (!parse_int(item, e)) throw ParseError(line_number, "bad exponent '" + item + "'");
    exponents.push_back(e);
  }
  if (exponents.empty() || words[3].back() == ',') throw ParseError(line_number, "bad exponent list");

  const std::string& value = words[5];
  const auto slash = value.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == value.size())
    throw ParseError(line_number, "value must be num/den");
  const std::string num = value.substr(0, slash), den = value.substr(slash + 1);
  auto digits = [](const std::string& s, bool sign_ok) {
    std::size_t start = sign_ok && s[0] == '-' ? 1 : 0;
    return start < s.size() && std::all_of(s.begin() + start, s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (!digits(num, true) || !digits(den, false)) throw ParseError(line_number, "malformed rational '" + value + "'");
  const Integer n(num), d(den);
  if (d == 0) throw IntegrityError("line " + std::to_string(line_number) + ": zero denominator");
  const Rational q = ratio(n, d);

  CorrelatorKey key = make_key(genus, exponents);
  if (!satisfies_dimension(genus, key.exponents))
    throw IntegrityError("line " + std::to_string(line_number) + ": dimension constraint violated");
  if (!is_stable(genus, key.points()))
    throw IntegrityError("line " + std::to_string(line_number) + ": unstable (g, n)");
  return {std::move(key), q};
}

void write_cache(std::ostream& out, const CorrelatorTable& table) {
  if (const auto& c = table.coverage())
    out << "# coverage g " << c->max_genus << " n " << c->max_points << '\n';
  std::vector<const std::pair<const CorrelatorKey, Rational>*> rows;
  for (const auto& entry : table.entries()) rows.push_back(&entry);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return cache_less(a->first, b->first); });
  for (const auto* row : rows) out << format_cache_line(row->first, row->second) << '\n';
}

CorrelatorTable read_cache(std::istream& in) {
  std::map<CorrelatorKey, Rational> entries;
  std::optional<TableCoverage> coverage;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto words = split_words(line);
    if (words.empty()) continue;
    if (words[0][0] == '#') {
      if (words.size() >= 2 && words[1] == "coverage") {
        TableCoverage c;
        if (number != 1 || words.size() != 6 || words[2] != "g" || words[4] != "n" || !parse_int(words[3], c.max_genus) ||
            !parse_int(words[5], c.max_points))
          throw ParseError(number, "coverage header must be the first line: '# coverage g <G> n <N>'");
        coverage = c;
      }
      continue;
    }
    auto [key, value] = parse_cache_line(line, number);
    if (!entries.emplace(std::move(key), value).second)
      throw IntegrityError("line " + std::to_string(number) + ": duplicate entry");
  }
  return CorrelatorTable(std::move(entries), coverage);
}

void write_cache_file(const std::filesystem::path& path, const CorrelatorTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_cache(out, table);
  if (!out) throw IoError("failed writing " + path.string());
}

CorrelatorTable read_cache_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_cache(in);
}

}  // namespace npoint
