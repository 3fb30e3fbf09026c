#include "k3lab/numfield.hpp"

#include <numeric>
#include <string>
#include <tuple>

namespace k3lab::numfield {

std::int64_t NumberFieldDesc::discriminant() const {
  switch (degree()) {
    case 1:
      return 1;
    case 2: {
      const std::int64_t b = m[1], c = m[0];
      return b * b - 4 * c;
    }
    case 3: {
      const std::int64_t a = m[2], b = m[1], c = m[0];
      return a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
    }
    default:
      throw std::invalid_argument("discriminant: only degrees 1 to 3 are supported");
  }
}

NumberFieldDesc NumberFieldDesc::rationals() { return {"Q", {0, 1}}; }

bool slot_less(const PrimeSlot& a, const PrimeSlot& b) {
  return std::tie(a.norm, a.p, a.index) < std::tie(b.norm, b.p, b.index);
}

NfElem::NfElem(std::int64_t n) : num_{n}, den_(1) { normalize(); }

NfElem::NfElem(std::vector<std::int64_t> num, std::int64_t den) : num_(std::move(num)), den_(den) {
  if (den_ == 0) throw std::invalid_argument("NfElem: zero denominator");
  normalize();
}

void NfElem::normalize() {
  while (!num_.empty() && num_.back() == 0) num_.pop_back();
  if (den_ < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  if (num_.empty()) {
    den_ = 1;
    return;
  }
  std::int64_t g = den_;
  for (auto c : num_) g = std::gcd(g, c);
  if (g > 1) {
    den_ /= g;
    for (auto& c : num_) c /= g;
  }
}

std::vector<PrimeSlot> factor_prime(const NumberFieldDesc& k, std::uint64_t p) {
  if (p == 2) throw RamifiedPrime("factor_prime: p = 2 is not supported");
  const std::int64_t disc = k.discriminant();
  if (disc % static_cast<std::int64_t>(p) == 0) {
    throw RamifiedPrime("prime " + std::to_string(p) + " is ramified in " + k.name);
  }
  const polymod::Poly mp = polymod::from_signed(k.m, p);
  std::vector<PrimeSlot> slots;
  unsigned index = 0;
  for (auto& fac : polymod::factor_squarefree(mp, p)) {
    PrimeSlot s;
    s.p = p;
    s.f = static_cast<unsigned>(polymod::degree(fac));
    s.index = index++;
    s.norm = 1;
    for (unsigned i = 0; i < s.f; ++i) s.norm *= p;
    s.factor = std::move(fac);
    slots.push_back(std::move(s));
  }
  return slots;
}

namespace {

ffield::FieldElem eval_in_field(const std::vector<std::int64_t>& coeffs, const ffield::ExtField& K,
                                ffield::FieldElem x) {
  ffield::FieldElem acc = K.zero();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = K.add(K.mul(acc, x), K.from_int(*it));
  return acc;
}

}  // namespace

ResidueField open_residue_field(const NumberFieldDesc& k, const PrimeSlot& slot) {
  ResidueField rf;
  rf.slot = slot;
  auto K = std::make_shared<const ffield::ExtField>(ffield::ExtField::build(slot.p, slot.f));
  rf.field = K;
  if (slot.f == 1) {
    // factor is t + c, root -c
    const std::uint64_t c = slot.factor.at(0);
    rf.local_root = K->from_int(static_cast<std::int64_t>((slot.p - c) % slot.p));
  } else {
    std::vector<std::int64_t> fac(slot.factor.begin(), slot.factor.end());
    bool found = false;
    for (std::uint64_t code = 0; code < K->size(); ++code) {
      if (eval_in_field(fac, *K, K->element(code)) == K->zero()) {
        rf.local_root = K->element(code);
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("open_residue_field: factor has no root in F_q");
  }
  if (!(eval_in_field(k.m, *K, rf.local_root) == K->zero())) {
    throw std::logic_error("open_residue_field: local root is not a root of m");
  }
  return rf;
}

ffield::FieldElem residue_reduce(const NfElem& x, const ResidueField& rf) {
  const auto& K = *rf.field;
  const auto p = static_cast<std::int64_t>(K.characteristic());
  if (x.denominator() % p == 0) {
    throw BadPrime("bad prime for this surface: " + std::to_string(p) + " divides a denominator");
  }
  const ffield::FieldElem num = eval_in_field(x.numerator(), K, rf.local_root);
  return K.mul(num, K.inv(K.from_int(x.denominator())));
}

Splitting splits_in_gaussian_ext(const PrimeSlot& slot) {
  if (slot.norm % 2 == 0) throw std::invalid_argument("splits_in_gaussian_ext: even norm");
  return slot.norm % 4 == 1 ? Splitting::Split : Splitting::Inert;
}

int kronecker(std::int64_t D, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("kronecker: n must be positive");
  int result = 1;
  // factor out powers of two from n
  while (n % 2 == 0) {
    n /= 2;
    if (D % 2 == 0) return 0;
    const std::int64_t r = ((D % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (n == 1) return result;
  // Jacobi symbol (D / n) for odd n
  std::int64_t a = D % static_cast<std::int64_t>(n);
  if (a < 0) a += static_cast<std::int64_t>(n);
  auto ua = static_cast<std::uint64_t>(a);
  while (ua != 0) {
    while (ua % 2 == 0) {
      ua /= 2;
      const std::uint64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(ua, n);
    if (ua % 4 == 3 && n % 4 == 3) result = -result;
    ua %= n;
  }
  return n == 1 ? result : 0;
}

}  // namespace k3lab::numfield
