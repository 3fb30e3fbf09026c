#pragma once

// Prime-field and extension-field arithmetic with table-driven quadratic
// character evaluation. This is the inner loop of every point count, so the
// hot operations (add, mul, quad_char) are inline and allocation free.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "k3lab/polymod.hpp"

namespace k3lab::ffield {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m);
/// Inverse of a modulo m; throws std::domain_error if gcd(a, m) != 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);
/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);
/// All primes in [2, bound], ascending.
std::vector<std::uint64_t> prime_sieve(std::uint64_t bound);

/// Largest field size whose tables ExtField::build will allocate by default
/// (about 1.2 GB of tables at the limit for degree >= 2).
inline constexpr std::uint64_t kDefaultTableBudget = std::uint64_t{1} << 27;

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An element of F_{p^f}, packed as sum c_i p^i of its coefficients in the
/// polynomial basis 1, t, ..., t^{f-1}.
struct FieldElem {
  std::uint32_t code = 0;
  friend bool operator==(FieldElem, FieldElem) = default;
};

class ExtField {
 public:
  /// F_{p^f} with the canonically smallest monic irreducible modulus
  /// (see polymod::canonical_less). Degree one uses modulus t.
  static ExtField build(std::uint64_t p, unsigned f,
                        std::uint64_t budget = kDefaultTableBudget);

  std::uint64_t characteristic() const { return p_; }
  unsigned degree() const { return f_; }
  std::uint64_t size() const { return q_; }
  const polymod::Poly& modulus() const { return modulus_; }

  FieldElem zero() const { return {0}; }
  FieldElem one() const { return {1}; }
  FieldElem from_int(std::int64_t n) const;
  FieldElem from_coeffs(std::span<const std::uint64_t> coeffs) const;
  std::vector<std::uint64_t> coeffs(FieldElem x) const;
  /// Element with the given packed code; codes enumerate the field as 0..q-1.
  FieldElem element(std::uint64_t code) const { return {static_cast<std::uint32_t>(code)}; }

  FieldElem add(FieldElem a, FieldElem b) const {
    if (f_ == 1) {
      std::uint64_t s = std::uint64_t{a.code} + b.code;
      return {static_cast<std::uint32_t>(s >= p_ ? s - p_ : s)};
    }
    return add_digits(a, b);
  }
  FieldElem neg(FieldElem a) const;
  FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }
  FieldElem mul(FieldElem a, FieldElem b) const {
    if (f_ == 1) return {static_cast<std::uint32_t>(std::uint64_t{a.code} * b.code % p_)};
    if (a.code == 0 || b.code == 0) return {0};
    std::uint64_t s = std::uint64_t{log_[a.code]} + log_[b.code];
    if (s >= q_ - 1) s -= q_ - 1;
    return {exp_[s]};
  }
  FieldElem inv(FieldElem a) const;
  FieldElem pow(FieldElem a, std::uint64_t e) const;

  /// +1 for nonzero squares, -1 for non-squares, 0 for zero.
  int quad_char(FieldElem x) const { return chi_[x.code]; }
  std::span<const std::int8_t> char_table() const { return chi_; }

  /// The multiplicative generator used to build the tables.
  FieldElem generator() const { return generator_; }

  /// Table access for degree >= 2: generator^k and the discrete log of a
  /// nonzero element.
  FieldElem exp_index(std::uint64_t k) const { return {exp_[k]}; }
  std::uint64_t log_index(FieldElem x) const { return log_[x.code]; }
  bool has_log_tables() const { return !exp_.empty(); }

 private:
  ExtField() = default;
  FieldElem add_digits(FieldElem a, FieldElem b) const;

  std::uint64_t p_ = 0;
  unsigned f_ = 0;
  std::uint64_t q_ = 0;
  polymod::Poly modulus_;
  FieldElem generator_;
  std::vector<std::int8_t> chi_;
  std::vector<std::uint32_t> log_;  // degree >= 2 only
  std::vector<std::uint32_t> exp_;  // degree >= 2 only
};

}  // namespace k3lab::ffield
