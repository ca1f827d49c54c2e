#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "npoint/cache.hpp"
#include "npoint/errors.hpp"
#include "npoint/intersection.hpp"

using namespace npoint;

TEST_CASE("cache line format") {
  CHECK(format_cache_line(make_key(1, {1}), Rational(1, 24)) == "g 1 d 1 = 1/24");
  CHECK(format_cache_line(make_key(0, {0, 1, 0, 0}), Rational(1)) == "g 0 d 1,0,0,0 = 1/1");
  CHECK(format_cache_line(make_key(2, {4}), Rational(2, 2 * 1152)) == "g 2 d 4 = 1/1152");

  auto [key, value] = parse_cache_line("g 1 d 1 = 1/24", 1);
  CHECK(key == make_key(1, {1}));
  CHECK(value == Rational(1, 24));
  auto [k2, v2] = parse_cache_line("  g 0  d 0,0,1,0   =  2/2 ", 1);
  CHECK(k2 == make_key(0, {1, 0, 0, 0}));
  CHECK(v2 == 1);
}

TEST_CASE("malformed cache lines") {
  CHECK_THROWS_AS(parse_cache_line("g 1 d 1 1/24", 3), ParseError);
  CHECK_THROWS_AS(parse_cache_line("g x d 1 = 1/24", 3), ParseError);
  CHECK_THROWS_AS(parse_cache_line("g 1 d 1, = 1/24", 3), ParseError);
  CHECK_THROWS_AS(parse_cache_line("g 1 d 1 = 1", 3), ParseError);
  CHECK_THROWS_AS(parse_cache_line("g 1 d 1 = 1/-24", 3), ParseError);
  try {
    parse_cache_line("g 1 d a = 1/24", 7);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
  CHECK_THROWS_AS(parse_cache_line("g 1 d 1 = 1/0", 1), IntegrityError);
  CHECK_THROWS_AS(parse_cache_line("g 1 d 2 = 1/24", 1), IntegrityError);
  CHECK_THROWS_AS(parse_cache_line("g 0 d 0,0 = 1/1", 1), IntegrityError);
}

TEST_CASE("cache round trip") {
  IntersectionEngine engine;
  const auto table = engine.build_complete(2, 4);
  std::stringstream buffer;
  write_cache(buffer, table);
  const std::string text = buffer.str();
  CHECK(text.rfind("# coverage g 2 n 4\ng 0 d 0,0,0 = 1/1\n", 0) == 0);

  const auto back = read_cache(buffer);
  CHECK(back.entries() == table.entries());
  REQUIRE(back.coverage());
  CHECK(back.coverage()->max_genus == 2);
  CHECK(back.coverage()->max_points == 4);
  CHECK(back.value(2, {4}) == Rational(1, 1152));

  std::stringstream again;
  write_cache(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("reading edge cases") {
  std::istringstream empty("");
  const auto t = read_cache(empty);
  CHECK(t.size() == 0);
  CHECK_FALSE(t.coverage());

  std::istringstream comments("# notes\n\ng 1 d 1 = 1/24\r\n# trailing\n");
  const auto c = read_cache(comments);
  CHECK(c.size() == 1);
  CHECK(c.value(1, {1}) == Rational(1, 24));
  CHECK_THROWS_AS(c.value(1, {2, 0}), MissingDataError);

  std::istringstream duplicate("g 1 d 1 = 1/24\ng 1 d 1 = 1/24\n");
  CHECK_THROWS_AS(read_cache(duplicate), IntegrityError);

  std::istringstream late_header("g 1 d 1 = 1/24\n# coverage g 1 n 1\n");
  CHECK_THROWS_AS(read_cache(late_header), ParseError);

  std::istringstream bad_second("g 1 d 1 = 1/24\ng 1 d 1\n");
  try {
    read_cache(bad_second);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("cache files and the environment override") {
  const auto dir = std::filesystem::temp_directory_path() / "npoint_test_cache";
  std::filesystem::create_directories(dir);
  const auto path = dir / "table.txt";

  IntersectionEngine engine;
  const auto table = engine.build_complete(1, 3);
  write_cache_file(path, table);
  CHECK(read_cache_file(path).entries() == table.entries());
  CHECK_THROWS_AS(read_cache_file(dir / "missing.txt"), IoError);
  CHECK_THROWS_AS(write_cache_file(dir / "no_such_dir" / "x.txt", table), IoError);

  ::setenv(kCacheEnvironmentVariable, path.c_str(), 1);
  CHECK(default_cache_path() == path);
  ::setenv(kCacheEnvironmentVariable, "", 1);
  CHECK(default_cache_path() == "npoint_cache.txt");
  ::unsetenv(kCacheEnvironmentVariable);
  CHECK(default_cache_path() == "npoint_cache.txt");

  std::filesystem::remove_all(dir);
}
