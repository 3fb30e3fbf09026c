#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "k3lab/numfield.hpp"
#include "k3lab/polymod.hpp"

using namespace k3lab;
using numfield::NumberFieldDesc;

namespace {

const NumberFieldDesc kCubic{"cubic", {1, -4, -1, 1}};  // t^3 - t^2 - 4t + 1

int legendre(std::int64_t a, std::uint64_t p) {
  const auto r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                            static_cast<std::int64_t>(p));
  if (r == 0) return 0;
  return ffield::pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

}  // namespace

TEST_CASE("polymod basics") {
  const std::uint64_t p = 7;
  const polymod::Poly a = {1, 2, 3}, b = {5, 1};
  polymod::Poly q, r;
  polymod::divrem(polymod::mul(a, b, p), b, p, q, r);
  CHECK(q == a);
  CHECK(r.empty());
  CHECK(polymod::degree({}) == -1);
  CHECK(polymod::gcd(polymod::mul(a, b, p), polymod::mul(b, b, p), p) == polymod::make_monic(b, p));
  CHECK_FALSE(polymod::is_squarefree(polymod::mul(b, b, p), p));
  CHECK(polymod::is_irreducible({1, 0, 1}, 7));   // x^2 + 1, 7 = 3 mod 4
  CHECK_FALSE(polymod::is_irreducible({1, 0, 1}, 5));
  CHECK(polymod::count_roots({1, 0, 1}, 7, 2) == 2);
}

TEST_CASE("factor_squarefree reproduces the product and root counts") {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    // x^p - x splits into linear factors
    polymod::Poly f(p + 1, 0);
    f[1] = p - 1;
    f[p] = 1;
    const auto factors = polymod::factor_squarefree(f, p);
    CHECK(factors.size() == p);
    polymod::Poly prod = {1};
    for (const auto& g : factors) prod = polymod::mul(prod, g, p);
    CHECK(prod == f);
    CHECK(std::is_sorted(factors.begin(), factors.end(), polymod::canonical_less));
  }
}

TEST_CASE("factor_prime: residue degrees sum to the field degree") {
  CHECK(kCubic.discriminant() == 321);  // 3 * 107
  for (std::uint64_t p : ffield::prime_sieve(3000)) {
    if (p == 2 || p == 3 || p == 107) continue;
    const auto slots = numfield::factor_prime(kCubic, p);
    unsigned total = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      total += slots[i].f;
      CHECK(slots[i].index == i);
      CHECK(slots[i].norm == ffield::pow_mod(p, slots[i].f, ~std::uint64_t{0}));
      CHECK(polymod::degree(slots[i].factor) == static_cast<int>(slots[i].f));
    }
    REQUIRE(total == 3);
    // the number of degree-one slots equals the number of roots of m mod p
    int linear = 0;
    for (const auto& s : slots) linear += s.f == 1;
    CHECK(linear == polymod::count_roots(polymod::from_signed(kCubic.m, p), p));
  }
  CHECK_THROWS_AS(numfield::factor_prime(kCubic, 107), numfield::RamifiedPrime);
}

TEST_CASE("residue fields contain a root of m") {
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL}) {
    for (const auto& slot : numfield::factor_prime(kCubic, p)) {
      const auto rf = numfield::open_residue_field(kCubic, slot);
      CHECK(rf.field->size() == slot.norm);
      const auto& K = *rf.field;
      auto t = rf.local_root;
      auto value = K.from_int(1);
      value = K.add(value, K.mul(K.from_int(-4), t));
      value = K.add(value, K.mul(K.from_int(-1), K.mul(t, t)));
      value = K.add(value, K.mul(t, K.mul(t, t)));
      CHECK(value == K.zero());
      const numfield::NfElem half({1}, 2);
      CHECK(K.mul(numfield::residue_reduce(half, rf), K.from_int(2)) == K.one());
    }
  }
  const auto slot5 = numfield::factor_prime(kCubic, 5).front();
  const auto rf5 = numfield::open_residue_field(kCubic, slot5);
  CHECK_THROWS_AS(numfield::residue_reduce(numfield::NfElem({1}, 10), rf5), numfield::BadPrime);
}

TEST_CASE("NfElem normalizes") {
  const numfield::NfElem a({2, 4}, -6);
  CHECK(a.denominator() == 3);
  CHECK(a.numerator() == std::vector<std::int64_t>{-1, -2});
  CHECK(numfield::NfElem(0).is_zero());
  CHECK_THROWS(numfield::NfElem({1}, 0));
}

TEST_CASE("kronecker symbol agrees with the Legendre symbol and multiplicativity") {
  for (std::uint64_t p : ffield::prime_sieve(500)) {
    if (p == 2) continue;
    for (std::int64_t D = -60; D <= 60; ++D) REQUIRE(numfield::kronecker(D, p) == legendre(D, p));
  }
  for (std::uint64_t m = 1; m < 60; ++m)
    for (std::uint64_t n = 1; n < 60; ++n)
      for (std::int64_t D : {-4, -3, 5, 8, 12, -1974}) REQUIRE(numfield::kronecker(D, m * n) == numfield::kronecker(D, m) * numfield::kronecker(D, n));
  CHECK(numfield::kronecker(5, 2) == -1);
  CHECK(numfield::kronecker(-7, 2) == 1);
  CHECK(numfield::kronecker(-4, 2) == 0);
}

TEST_CASE("gaussian splitting depends on the norm mod 4") {
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL, 29ULL}) {
    for (const auto& slot : numfield::factor_prime(kCubic, p)) {
      const auto expected = slot.norm % 4 == 1 ? numfield::Splitting::Split : numfield::Splitting::Inert;
      CHECK(numfield::splits_in_gaussian_ext(slot) == expected);
    }
  }
}
