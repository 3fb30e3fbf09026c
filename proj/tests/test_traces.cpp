#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "k3lab/counting.hpp"
#include "k3lab/traces.hpp"
#include "naive_count.hpp"

using namespace k3lab;
using models::find_surface;
using traces::TraceRecord;

namespace {

numfield::PrimeSlot rational_slot(std::uint64_t p) { return numfield::factor_prime(numfield::NumberFieldDesc::rationals(), p).front(); }

// Reduced fraction of n / d.
std::pair<std::int64_t, std::int64_t> reduce(std::int64_t n, std::int64_t d) {
  const std::int64_t g = std::gcd(n, d);
  return {n / g, d / g};
}

}  // namespace

TEST_CASE("e2 from curve counts") {
  // y^2 = x^5 - 1 over F_3: n1 = 4, n2 = 10
  CHECK(traces::e2_from_counts(4, 10, 3) == 0);
  CHECK(traces::e2_from_counts(2, 10, 3) == 2);  // s1 = 2, s2 = 0
  CHECK_THROWS_AS(traces::e2_from_counts(4, 11, 3), std::domain_error);
}

TEST_CASE("X3 trace is a1 a2 / p") {
  const auto& spec = find_surface("X3");
  for (std::uint64_t p : ffield::prime_sieve(200)) {
    if (p == 2) continue;
    const auto r = traces::trace_transcendental(spec, rational_slot(p));
    const auto a1 = counting::ap_elliptic(models::find_curve("E1").g, p);
    const auto a2 = counting::ap_elliptic(models::find_curve("E2").g, p);
    const auto [n, d] = reduce(a1 * a2, static_cast<std::int64_t>(p));
    CAPTURE(p);
    CHECK(r.num == n);
    CHECK(r.den == d);
    CHECK(r.has_tag("mod8=" + std::to_string(p % 8)));
    CHECK(std::is_sorted(r.tags.begin(), r.tags.end()));
  }
}

TEST_CASE("X1 trace from the resolved count") {
  const auto& spec = find_surface("X1");
  for (const auto& slot : naive::good_slots(spec, 150)) {
    const auto p = static_cast<std::int64_t>(slot.p);
    const auto rf = numfield::open_residue_field(spec.base_field, slot);
    const auto raw = static_cast<std::int64_t>(naive::weighted_points(spec, rf));
    const auto [n, d] = reduce(raw + 15 * p - 1 - p * p - 16 * p, p);
    const auto r = traces::trace_transcendental(spec, slot);
    CAPTURE(p);
    CHECK(r.num == n);
    CHECK(r.den == d);
    CHECK(static_cast<std::int64_t>(traces::raw_count(spec, slot)) == raw);
  }
}

TEST_CASE("bad slots throw") {
  CHECK_THROWS_AS(traces::trace_transcendental(find_surface("X1"), rational_slot(5)), numfield::BadPrime);
  CHECK_THROWS_AS(traces::trace_transcendental(find_surface("X2"), rational_slot(5)), numfield::BadPrime);
}

TEST_CASE("valuation") {
  CHECK(traces::valuation(3, 9, 3) == -1);
  CHECK(traces::valuation(50, 1, 5) == 2);
  CHECK(traces::valuation(7, 1, 5) == 0);
}

TEST_CASE("checks flag planted counterexamples") {
  const auto& spec = find_surface("X3");
  const auto checks = traces::available_checks(spec);
  CHECK(checks == std::vector<std::string>{"weil-bound", "denominator-law", "zero-congruence-mod8"});
  std::vector<TraceRecord> records;
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 17ULL}) records.push_back(traces::trace_transcendental(spec, rational_slot(p)));
  for (const auto& name : checks) CHECK(traces::run_check(spec, name, records).passed);

  auto planted = records;
  planted[0].num = 1;  // p = 3 is not 1 mod 8
  planted.back().num = 5 * 17;
  planted.back().den = 17 * 17;
  CHECK_FALSE(traces::run_check(spec, "zero-congruence-mod8", planted).passed);
  CHECK_FALSE(traces::run_check(spec, "denominator-law", planted).passed);
  planted.back().num = 7;
  planted.back().den = 1;
  const auto weil = traces::run_check(spec, "weil-bound", planted);
  CHECK_FALSE(weil.passed);
  CHECK(weil.counterexamples.size() == 1);
  CHECK_THROWS_AS(traces::run_check(spec, "valuation-table", records), std::invalid_argument);
}

TEST_CASE("twist identity holds and detects a wrong record") {
  const auto& spec = find_surface("X6");
  std::vector<TraceRecord> records;
  for (const auto& slot : naive::good_slots(spec, 80)) records.push_back(traces::trace_transcendental(spec, slot));
  REQUIRE_FALSE(records.empty());
  const auto res = traces::run_check(spec, "twist-identity", records);
  CHECK(res.passed);
  CHECK_FALSE(res.experimental);
  CHECK(traces::run_check(spec, "weil-bound", records).experimental);
  records[0].num += 1;
  CHECK_FALSE(traces::run_check(spec, "twist-identity", records).passed);
}

TEST_CASE("experimental surfaces are tagged") {
  const auto& spec = find_surface("X6~");
  const auto slot = naive::good_slots(spec, 40).front();
  CHECK(traces::trace_transcendental(spec, slot).has_tag("uncalibrated"));
  CHECK_FALSE(traces::trace_transcendental(find_surface("X1"), rational_slot(7)).has_tag("uncalibrated"));
}
