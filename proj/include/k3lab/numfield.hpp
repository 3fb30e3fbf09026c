#pragma once

// The base number field k = Q[t]/(m(t)) of a catalog surface: factoring
// rational primes into prime ideals, reducing field elements into residue
// fields, and Kronecker symbols over Q.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "k3lab/ffield.hpp"
#include "k3lab/polymod.hpp"

namespace k3lab::numfield {

class RamifiedPrime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a prime divides a denominator or degeneracy integer of a model.
class BadPrime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct NumberFieldDesc {
  std::string name;
  std::vector<std::int64_t> m;  // monic defining polynomial, lowest degree first

  int degree() const { return static_cast<int>(m.size()) - 1; }
  /// Polynomial discriminant of m (degrees 1 to 3).
  std::int64_t discriminant() const;

  static NumberFieldDesc rationals();
};

/// A prime ideal above p, identified by its factor of m mod p.
struct PrimeSlot {
  std::uint64_t p = 0;
  unsigned f = 1;       // residue degree
  unsigned index = 0;   // position in factor_prime's ordering
  std::uint64_t norm = 0;
  polymod::Poly factor;  // monic irreducible factor of m mod p

  friend bool operator==(const PrimeSlot& a, const PrimeSlot& b) {
    return a.p == b.p && a.f == b.f && a.index == b.index;
  }
};

/// Orders slots by (norm, p, index), the survey output order.
bool slot_less(const PrimeSlot& a, const PrimeSlot& b);

/// Element of k: (sum num[i] t^i) / den with den > 0 and content 1.
class NfElem {
 public:
  NfElem() = default;
  NfElem(std::int64_t n);  // NOLINT(google-explicit-constructor): integers embed into k
  NfElem(std::vector<std::int64_t> num, std::int64_t den);

  const std::vector<std::int64_t>& numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_zero() const { return num_.empty(); }

  friend bool operator==(const NfElem&, const NfElem&) = default;

 private:
  void normalize();
  std::vector<std::int64_t> num_;
  std::int64_t den_ = 1;
};

/// The residue field O_k / P together with the image of t.
struct ResidueField {
  PrimeSlot slot;
  std::shared_ptr<const ffield::ExtField> field;
  ffield::FieldElem local_root;
};

/// Prime ideals above an unramified odd prime p, ascending by degree then by
/// canonical factor order. Throws RamifiedPrime if p divides disc(m).
std::vector<PrimeSlot> factor_prime(const NumberFieldDesc& k, std::uint64_t p);

/// Builds F_{p^f} and locates the image of t (the smallest-code root of the
/// slot's factor). Checks m(local_root) = 0.
ResidueField open_residue_field(const NumberFieldDesc& k, const PrimeSlot& slot);

/// num(local_root) / den in the residue field. Throws BadPrime if p | den.
ffield::FieldElem residue_reduce(const NfElem& x, const ResidueField& rf);

enum class Splitting { Split, Inert };

/// Behaviour of the slot in k(i)/k: split iff norm = 1 mod 4.
Splitting splits_in_gaussian_ext(const PrimeSlot& slot);

/// Kronecker symbol (D / n) for n >= 1.
int kronecker(std::int64_t D, std::uint64_t n);

}  // namespace k3lab::numfield
