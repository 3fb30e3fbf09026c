#include "k3lab/polymod.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "k3lab/ffield.hpp"

namespace k3lab::polymod {

using ffield::mul_mod;
using ffield::pow_mod;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly from_signed(const std::vector<std::int64_t>& coeffs, std::uint64_t p) {
  Poly f(coeffs.size());
  const auto sp = static_cast<std::int64_t>(p);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::int64_t r = coeffs[i] % sp;
    if (r < 0) r += sp;
    f[i] = static_cast<std::uint64_t>(r);
  }
  trim(f);
  return f;
}

Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t s = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    r[i] = s >= p ? s - p : s;
  }
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0;
    std::uint64_t y = i < b.size() ? b[i] : 0;
    r[i] = x >= y ? x - y : x + p - y;
  }
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + mul_mod(a[i], b[j], p)) % p;
    }
  }
  trim(r);
  return r;
}

void divrem(const Poly& a, const Poly& b, std::uint64_t p, Poly& quot, Poly& rem) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  rem = a;
  trim(rem);
  const int db = degree(b);
  quot.assign(std::max(0, degree(rem) - db + 1), 0);
  const std::uint64_t lead_inv = ffield::inv_mod(b.back(), p);
  while (degree(rem) >= db) {
    const int shift = degree(rem) - db;
    const std::uint64_t c = mul_mod(rem.back(), lead_inv, p);
    quot[shift] = c;
    for (int j = 0; j <= db; ++j) {
      const std::uint64_t t = mul_mod(c, b[j], p);
      std::uint64_t& slot = rem[shift + j];
      slot = slot >= t ? slot - t : slot + p - t;
    }
    trim(rem);
  }
  trim(quot);
}

Poly mod(const Poly& a, const Poly& m, std::uint64_t p) {
  Poly q, r;
  divrem(a, m, p, q, r);
  return r;
}

Poly make_monic(const Poly& f, std::uint64_t p) {
  if (f.empty()) return f;
  const std::uint64_t inv = ffield::inv_mod(f.back(), p);
  Poly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = mul_mod(f[i], inv, p);
  return r;
}

Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

Poly derivative(const Poly& f, std::uint64_t p) {
  if (f.size() <= 1) return {};
  Poly d(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i) d[i - 1] = mul_mod(f[i], i % p, p);
  trim(d);
  return d;
}

std::uint64_t eval(const Poly& f, std::uint64_t x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (mul_mod(acc, x, p) + *it) % p;
  return acc;
}

Poly powmod(const Poly& base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly result{1};
  result = mod(result, m, p);
  Poly b = mod(base, m, p);
  while (e > 0) {
    if (e & 1U) result = mod(mul(result, b, p), m, p);
    e >>= 1U;
    if (e > 0) b = mod(mul(b, b, p), m, p);
  }
  return result;
}

namespace {

// x^(p^k) mod m, by k successive p-th powers.
Poly frobenius_power(const Poly& m, std::uint64_t p, unsigned k) {
  Poly x{0, 1};
  Poly r = mod(x, m, p);
  for (unsigned i = 0; i < k; ++i) r = powmod(r, p, m, p);
  return r;
}

std::uint64_t checked_power(std::uint64_t p, unsigned k) {
  std::uint64_t q = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (q > (std::uint64_t{1} << 62) / p) throw std::overflow_error("p^k exceeds 62 bits");
    q *= p;
  }
  return q;
}

// Splits a product of distinct monic irreducibles of common degree d.
void split_equal_degree(const Poly& f, unsigned d, std::uint64_t p, std::mt19937_64& rng,
                        std::vector<Poly>& out) {
  const int n = degree(f);
  if (n <= static_cast<int>(d)) {
    out.push_back(f);
    return;
  }
  const std::uint64_t e = (checked_power(p, d) - 1) / 2;
  std::uniform_int_distribution<std::uint64_t> coeff(0, p - 1);
  for (;;) {
    Poly a(n);
    for (auto& c : a) c = coeff(rng);
    trim(a);
    if (degree(a) < 1) continue;
    Poly g = gcd(a, f, p);
    if (degree(g) > 0 && degree(g) < n) {
      Poly q, r;
      divrem(f, g, p, q, r);
      split_equal_degree(g, d, p, rng, out);
      split_equal_degree(make_monic(q, p), d, p, rng, out);
      return;
    }
    Poly h = powmod(a, e, f, p);
    h = sub(h, Poly{1}, p);
    g = gcd(h, f, p);
    if (degree(g) > 0 && degree(g) < n) {
      Poly q, r;
      divrem(f, g, p, q, r);
      split_equal_degree(g, d, p, rng, out);
      split_equal_degree(make_monic(q, p), d, p, rng, out);
      return;
    }
  }
}

}  // namespace

bool is_squarefree(const Poly& f, std::uint64_t p) {
  if (degree(f) <= 0) return true;
  return degree(gcd(f, derivative(f, p), p)) == 0;
}

bool is_irreducible(const Poly& f, std::uint64_t p) {
  const int n = degree(f);
  if (n <= 0) return false;
  if (n == 1) return true;
  const Poly x{0, 1};
  const Poly m = make_monic(f, p);
  // Ben-Or: no factor of degree <= n/2.
  Poly r = mod(x, m, p);
  for (int i = 1; i <= n / 2; ++i) {
    r = powmod(r, p, m, p);
    if (degree(gcd(sub(r, x, p), m, p)) > 0) return false;
  }
  return true;
}

int count_roots(const Poly& f, std::uint64_t p, unsigned k) {
  if (f.empty()) throw std::domain_error("count_roots of the zero polynomial");
  if (degree(f) == 0) return 0;
  const Poly m = make_monic(f, p);
  const Poly x{0, 1};
  const Poly xq = frobenius_power(m, p, k);
  return degree(gcd(sub(xq, x, p), m, p));
}

bool canonical_less(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::vector<Poly> factor_squarefree(const Poly& f, std::uint64_t p) {
  if (degree(f) < 1) return {};
  if (!is_squarefree(f, p)) throw std::domain_error("factor_squarefree: input has repeated factors");
  Poly rest = make_monic(f, p);
  const Poly x{0, 1};
  std::vector<Poly> factors;
  std::mt19937_64 rng(0x6b336c6162ULL);
  Poly xp = mod(x, rest, p);
  for (unsigned d = 1; degree(rest) >= static_cast<int>(2 * d); ++d) {
    xp = powmod(xp, p, rest, p);
    Poly g = gcd(sub(xp, x, p), rest, p);
    if (degree(g) > 0) {
      split_equal_degree(g, d, p, rng, factors);
      Poly q, r;
      divrem(rest, g, p, q, r);
      rest = make_monic(q, p);
      xp = mod(xp, rest, p);
    }
  }
  if (degree(rest) > 0) factors.push_back(rest);
  std::sort(factors.begin(), factors.end(), canonical_less);
  return factors;
}

}  // namespace k3lab::polymod
