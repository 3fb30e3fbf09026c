#include "k3lab/ffield.hpp"

#include <array>
#include <string>

namespace k3lab::ffield {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1U;
  }
  return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t old_r = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("inv_mod: element is not invertible");
  std::int64_t res = old_s % static_cast<std::int64_t>(m);
  if (res < 0) res += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(res);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<std::uint64_t> prime_sieve(std::uint64_t bound) {
  std::vector<std::uint64_t> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return primes;
}

namespace {

constexpr unsigned kMaxDegree = 8;
using Digits = std::array<std::uint64_t, kMaxDegree>;

Digits decode(std::uint64_t code, std::uint64_t p, unsigned f) {
  Digits d{};
  for (unsigned i = 0; i < f; ++i) {
    d[i] = code % p;
    code /= p;
  }
  return d;
}

std::uint64_t encode(const Digits& d, std::uint64_t p, unsigned f) {
  std::uint64_t code = 0;
  for (unsigned i = f; i-- > 0;) code = code * p + d[i];
  return code;
}

// Product in F_p[t]/(modulus) on raw digit arrays; modulus is monic of degree f.
Digits slow_mul(const Digits& a, const Digits& b, const polymod::Poly& modulus, std::uint64_t p,
                unsigned f) {
  std::array<std::uint64_t, 2 * kMaxDegree> prod{};
  for (unsigned i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + mul_mod(a[i], b[j], p)) % p;
  }
  for (unsigned k = 2 * f - 1; k-- > f;) {
    const std::uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (unsigned j = 0; j < f; ++j) {
      const std::uint64_t t = mul_mod(c, modulus[j], p);
      std::uint64_t& slot = prod[k - f + j];
      slot = slot >= t ? slot - t : slot + p - t;
    }
  }
  Digits r{};
  for (unsigned i = 0; i < f; ++i) r[i] = prod[i];
  return r;
}

Digits slow_pow(Digits base, std::uint64_t e, const polymod::Poly& modulus, std::uint64_t p,
                unsigned f) {
  Digits result{};
  result[0] = 1;
  while (e > 0) {
    if (e & 1U) result = slow_mul(result, base, modulus, p, f);
    base = slow_mul(base, base, modulus, p, f);
    e >>= 1U;
  }
  return result;
}

std::uint64_t primitive_root(std::uint64_t p) {
  const auto factors = distinct_prime_factors(p - 1);
  for (std::uint64_t g = 1; g < p; ++g) {
    bool ok = true;
    for (std::uint64_t r : factors) {
      if (pow_mod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

}  // namespace

ExtField ExtField::build(std::uint64_t p, unsigned f, std::uint64_t budget) {
  if (p == 2) throw std::invalid_argument("ExtField: even characteristic is not supported");
  if (!is_prime(p)) throw std::invalid_argument("ExtField: " + std::to_string(p) + " is not prime");
  if (f < 1 || f > kMaxDegree) throw std::invalid_argument("ExtField: unsupported degree " + std::to_string(f));
  std::uint64_t q = 1;
  for (unsigned i = 0; i < f; ++i) {
    if (q > budget / p || q > UINT32_MAX / p) {
      throw BudgetExceeded("ExtField: " + std::to_string(p) + "^" + std::to_string(f) +
                           " exceeds the table budget of " + std::to_string(budget));
    }
    q *= p;
  }

  ExtField K;
  K.p_ = p;
  K.f_ = f;
  K.q_ = q;
  K.chi_.assign(q, 0);

  if (f == 1) {
    K.modulus_ = {0, 1};
    const std::uint64_t g = primitive_root(p);
    K.generator_ = {static_cast<std::uint32_t>(g)};
    std::uint64_t x = 1;
    for (std::uint64_t k = 0; k + 1 < p; ++k) {
      K.chi_[x] = (k % 2 == 0) ? 1 : -1;
      x = x * g % p;
    }
    return K;
  }

  // Smallest monic irreducible of degree f: scan the non-leading coefficients
  // in code order, which matches canonical_less.
  for (std::uint64_t code = 0; code < q; ++code) {
    polymod::Poly cand(f + 1, 0);
    std::uint64_t c = code;
    for (unsigned i = 0; i < f; ++i) {
      cand[i] = c % p;
      c /= p;
    }
    cand[f] = 1;
    if (polymod::is_irreducible(cand, p)) {
      K.modulus_ = std::move(cand);
      break;
    }
  }

  const auto order_factors = distinct_prime_factors(q - 1);
  Digits gen{};
  for (std::uint64_t code = 2; code < q; ++code) {
    const Digits cand = decode(code, p, f);
    bool ok = true;
    for (std::uint64_t r : order_factors) {
      const Digits t = slow_pow(cand, (q - 1) / r, K.modulus_, p, f);
      if (encode(t, p, f) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen = cand;
      K.generator_ = {static_cast<std::uint32_t>(code)};
      break;
    }
  }

  K.log_.assign(q, 0);
  K.exp_.assign(q - 1, 0);
  Digits x{};
  x[0] = 1;
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    const auto code = static_cast<std::uint32_t>(encode(x, p, f));
    K.exp_[k] = code;
    K.log_[code] = static_cast<std::uint32_t>(k);
    K.chi_[code] = (k % 2 == 0) ? 1 : -1;
    x = slow_mul(x, gen, K.modulus_, p, f);
  }
  return K;
}

FieldElem ExtField::from_int(std::int64_t n) const {
  std::int64_t r = n % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  return {static_cast<std::uint32_t>(r)};
}

FieldElem ExtField::from_coeffs(std::span<const std::uint64_t> coeffs) const {
  Digits d{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i < f_) {
      d[i] = (d[i] + coeffs[i] % p_) % p_;
    } else if (coeffs[i] % p_ != 0) {
      throw std::invalid_argument("from_coeffs: too many coefficients for the field degree");
    }
  }
  return {static_cast<std::uint32_t>(encode(d, p_, f_))};
}

std::vector<std::uint64_t> ExtField::coeffs(FieldElem x) const {
  const Digits d = decode(x.code, p_, f_);
  return {d.begin(), d.begin() + f_};
}

FieldElem ExtField::add_digits(FieldElem a, FieldElem b) const {
  std::uint64_t ca = a.code, cb = b.code, out = 0, scale = 1;
  for (unsigned i = 0; i < f_; ++i) {
    std::uint64_t s = ca % p_ + cb % p_;
    if (s >= p_) s -= p_;
    out += s * scale;
    scale *= p_;
    ca /= p_;
    cb /= p_;
  }
  return {static_cast<std::uint32_t>(out)};
}

FieldElem ExtField::neg(FieldElem a) const {
  if (f_ == 1) return {static_cast<std::uint32_t>(a.code == 0 ? 0 : p_ - a.code)};
  std::uint64_t ca = a.code, out = 0, scale = 1;
  for (unsigned i = 0; i < f_; ++i) {
    const std::uint64_t d = ca % p_;
    out += (d == 0 ? 0 : p_ - d) * scale;
    scale *= p_;
    ca /= p_;
  }
  return {static_cast<std::uint32_t>(out)};
}

FieldElem ExtField::inv(FieldElem a) const {
  if (a.code == 0) throw std::domain_error("ExtField::inv of zero");
  if (f_ == 1) return {static_cast<std::uint32_t>(inv_mod(a.code, p_))};
  const std::uint64_t l = log_[a.code];
  return {exp_[l == 0 ? 0 : q_ - 1 - l]};
}

FieldElem ExtField::pow(FieldElem a, std::uint64_t e) const {
  if (e == 0) return one();
  if (a.code == 0) return zero();
  if (f_ == 1) return {static_cast<std::uint32_t>(pow_mod(a.code, e, p_))};
  const auto l = static_cast<std::uint64_t>(log_[a.code]);
  return {exp_[static_cast<std::uint64_t>((static_cast<unsigned __int128>(l) * e) % (q_ - 1))]};
}

}  // namespace k3lab::ffield
