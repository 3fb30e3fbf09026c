#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "k3lab/survey.hpp"

using namespace k3lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "k3lab-test-survey";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

}  // namespace

TEST_CASE("slot enumeration over the cubic field") {
  const auto& k = models::find_surface("X5").base_field;
  std::vector<survey::SkippedSlot> ramified;
  const auto slots = survey::enumerate_slots(k, 200, &ramified);
  CHECK(std::is_sorted(slots.begin(), slots.end(), numfield::slot_less));
  for (const auto& s : slots) CHECK(s.norm <= 200);
  REQUIRE(ramified.size() == 2);  // 3 and 107 ramify
  CHECK(ramified[0].slot.p == 3);
  CHECK(ramified[1].slot.p == 107);
  ramified.clear();
  CHECK(survey::enumerate_slots(k, 100, &ramified).size() < slots.size());
  CHECK(ramified.size() == 1);
}

TEST_CASE("X3 survey to 100: 24 records, byte-identical rerun") {
  const auto cache = scratch("X3.csv");
  survey::SurveyOptions opts;
  opts.norm_bound = 100;
  opts.cache = cache;
  const auto first = survey::run_survey(models::find_surface("X3"), opts);
  CHECK(first.records.size() == 24);
  CHECK(first.new_records == 24);
  const std::string bytes = slurp(cache);
  CHECK(bytes.rfind(std::string(survey::kCacheHeader) + "\n", 0) == 0);

  const auto again = survey::run_survey(models::find_surface("X3"), opts);
  CHECK(again.new_records == 0);
  CHECK(again.cached_records == 24);
  CHECK(again.records == first.records);
  CHECK(slurp(cache) == bytes);

  opts.norm_bound = 150;
  opts.workers = 3;
  const auto extended = survey::run_survey(models::find_surface("X3"), opts);
  CHECK(extended.new_records == 10);
  CHECK(survey::read_cache(cache) == extended.records);
}

TEST_CASE("parallel and serial surveys agree") {
  survey::SurveyOptions opts;
  opts.norm_bound = 120;
  const auto serial = survey::run_survey(models::find_surface("X5"), opts);
  opts.workers = 4;
  const auto parallel = survey::run_survey(models::find_surface("X5"), opts);
  CHECK(serial.records == parallel.records);
  bool has29 = false;
  for (const auto& r : serial.records) has29 |= r.p == 29 && r.f == 1 && r.norm == 29;
  CHECK(has29);
}

TEST_CASE("record formatting round trips") {
  traces::TraceRecord r{"X5", 3, 2, 0, 9, {"deg=2", "gauss=split"}, -4, 3};
  const auto line = survey::format_record(r);
  CHECK(line == "X5,3,2,0,9,deg=2;gauss=split,-4,3");
  CHECK(survey::parse_record(line) == r);
  CHECK_THROWS_AS(survey::parse_record("X5,3,2,0,8,,0,1"), std::invalid_argument);     // norm
  CHECK_THROWS_AS(survey::parse_record("X5,3,1,0,3,,2,4"), std::invalid_argument);     // not reduced
  CHECK_THROWS_AS(survey::parse_record("X5,3,1,0,3,b;a,0,1"), std::invalid_argument);  // tag order
  CHECK_THROWS_AS(survey::parse_record("X5,3,1,0,3,,0"), std::invalid_argument);
}

TEST_CASE("corrupt caches report the offending line") {
  const auto cache = scratch("X3-corrupt.csv");
  survey::SurveyOptions opts;
  opts.norm_bound = 30;
  opts.cache = cache;
  survey::run_survey(models::find_surface("X3"), opts);
  const std::string good = slurp(cache);

  auto expect_line = [&](const std::string& content, std::size_t line) {
    spit(cache, content);
    try {
      survey::read_cache(cache);
      FAIL("no error");
    } catch (const survey::CacheCorrupt& e) {
      CHECK(e.line() == line);
    }
  };
  std::string s = good;
  s.replace(s.find("X3,5,"), 5, "X3,5x");
  expect_line(s, 3);

  s = good;
  s.back() = 'X';  // damage the checksum
  expect_line(s, 11);

  s = good.substr(0, good.find("#sha256"));
  expect_line(s, 11);  // missing checksum

  s = "bogus\n" + good.substr(good.find('\n') + 1);
  expect_line(s, 1);

  spit(cache, good);
  CHECK(survey::read_cache(cache).size() == 9);
  CHECK_THROWS_AS(survey::run_survey(models::find_surface("X1"), opts), survey::CacheError);
}

TEST_CASE("default cache path honours the environment") {
  ::setenv("K3LAB_CACHE_DIR", "/tmp/somewhere", 1);
  CHECK(survey::default_cache_path("X1") == fs::path("/tmp/somewhere/X1.csv"));
  ::unsetenv("K3LAB_CACHE_DIR");
  CHECK(survey::default_cache_path("X1") == fs::path("k3lab-cache/X1.csv"));
}

TEST_CASE("sha256") {
  CHECK(survey::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
