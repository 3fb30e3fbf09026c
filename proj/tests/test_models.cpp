#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "k3lab/models.hpp"

using namespace k3lab;
using models::find_surface;

TEST_CASE("catalog contents") {
  CHECK(models::surfaces().size() == 7);
  CHECK(models::curves().size() == 3);
  for (const auto& s : models::surfaces()) {
    CAPTURE(s.name);
    CHECK_FALSE(s.equation.empty());
    CHECK(s.dim_T() == 22 - s.picard_rank);
    if (s.kind == models::ModelKind::DoubleCover || s.kind == models::ModelKind::Twist) {
      CHECK(s.branch.degree() == 6);
      for (const auto& f : s.branch.factors) CHECK(f.is_homogeneous());
    }
  }
  CHECK_THROWS_AS(find_surface("X7"), std::out_of_range);
  CHECK_THROWS_AS(models::find_curve("E3"), std::out_of_range);
  CHECK(models::find_curve("C").genus() == 2);
  CHECK(models::find_curve("E1").genus() == 1);
}

TEST_CASE("X1 and X5 are six-line arrangements") {
  CHECK(find_surface("X1").branch.is_line_arrangement());
  CHECK(find_surface("X5").branch.is_line_arrangement());
  CHECK_FALSE(find_surface("X4").branch.is_line_arrangement());
  CHECK(find_surface("X5").base_field.degree() == 3);
}

TEST_CASE("the twist branch is -1974 times the base branch") {
  const auto twisted = find_surface("X6").branch.expand_rational();
  const auto base = find_surface("X6~").branch.expand_rational();
  std::map<std::array<int, 3>, std::int64_t> expected;
  for (const auto& [e, c] : base) expected[e] += -1974 * c;
  std::map<std::array<int, 3>, std::int64_t> got;
  for (const auto& [e, c] : twisted) got[e] += c;
  CHECK(got == expected);
  CHECK(find_surface("X6").twist_base == "X6~");
  CHECK(find_surface("X6").twist_disc == -1974);
}

TEST_CASE("expanded X1 sextic") {
  // x y z (x + y + z)(x + 2y + 3z)(5x + 8y + 20z)
  std::map<std::array<int, 3>, std::int64_t> got;
  for (const auto& [e, c] : find_surface("X1").branch.expand_rational()) got[e] += c;
  CHECK(got[{3, 2, 1}] == 23);
  CHECK(got[{4, 1, 1}] == 5);
  CHECK(got[{1, 1, 4}] == 60);
  CHECK(got.count({6, 0, 0}) == 0);
}

TEST_CASE("good primes") {
  const auto& C = models::find_curve("C");
  CHECK_FALSE(models::good_prime(C, 5));
  CHECK(models::good_prime(C, 3));
  const auto& X3 = find_surface("X3");
  for (std::uint64_t p : ffield::prime_sieve(100)) {
    if (p == 2) continue;
    CHECK(models::good_prime(X3, numfield::factor_prime(X3.base_field, p).front()));
  }
  const auto& X1 = find_surface("X1");
  // the 3x3 minors of the six lines have prime divisors 2, 3, 5
  auto slot = [&](std::uint64_t p) { return numfield::factor_prime(X1.base_field, p).front(); };
  CHECK_FALSE(models::good_prime(X1, slot(3)));
  CHECK_FALSE(models::good_prime(X1, slot(5)));
  CHECK(models::good_prime(X1, slot(7)));
}

TEST_CASE("arrangement nodes are 15 distinct points at good slots") {
  for (const char* name : {"X1", "X5"}) {
    const auto& spec = find_surface(name);
    for (std::uint64_t p : ffield::prime_sieve(60)) {
      if (p == 2) continue;
      std::vector<numfield::PrimeSlot> slots;
      try {
        slots = numfield::factor_prime(spec.base_field, p);
      } catch (const numfield::RamifiedPrime&) {
        continue;
      }
      for (const auto& slot : slots) {
        if (!models::good_prime(spec, slot)) continue;
        const auto rf = numfield::open_residue_field(spec.base_field, slot);
        const auto nodes = models::arrangement_nodes(spec, rf);
        std::set<std::array<std::uint32_t, 3>> distinct;
        for (const auto& n : nodes) distinct.insert({n[0].code, n[1].code, n[2].code});
        CAPTURE(name);
        CAPTURE(p);
        CHECK(distinct.size() == 15);
      }
    }
  }
}

TEST_CASE("node census") {
  CHECK(models::node_census(find_surface("X1")).rational_node_count == 15);
  const auto x4 = models::node_census(find_surface("X4"));
  CHECK(x4.rational_node_count + x4.eliminant_degree() == 15);
  const auto x6 = models::node_census(find_surface("X6~"));
  CHECK(x6.rational_node_count + x6.eliminant_degree() == 12);
  CHECK_THROWS_AS(models::node_census(find_surface("X3")), std::invalid_argument);
}

TEST_CASE("names") {
  CHECK(models::kind_name(models::ModelKind::KummerProduct) != models::kind_name(models::ModelKind::Twist));
  CHECK(models::alg_model_name(models::AlgTraceKind::Experimental) != models::alg_model_name(models::AlgTraceKind::RationalNodes16));
}
