#pragma once

// Dense univariate polynomials over a prime field F_p.
//
// Coefficients are stored lowest degree first and kept trimmed (no trailing
// zeros); the zero polynomial is the empty vector. All routines assume p is
// an odd prime below 2^32 so products fit into 64 bits.

#include <cstdint>
#include <vector>

namespace k3lab::polymod {

using Poly = std::vector<std::uint64_t>;

void trim(Poly& f);
int degree(const Poly& f);  // -1 for the zero polynomial

/// Reduces arbitrary signed integer coefficients mod p.
Poly from_signed(const std::vector<std::int64_t>& coeffs, std::uint64_t p);

Poly add(const Poly& a, const Poly& b, std::uint64_t p);
Poly sub(const Poly& a, const Poly& b, std::uint64_t p);
Poly mul(const Poly& a, const Poly& b, std::uint64_t p);
Poly mod(const Poly& a, const Poly& m, std::uint64_t p);
void divrem(const Poly& a, const Poly& b, std::uint64_t p, Poly& quot, Poly& rem);
Poly make_monic(const Poly& f, std::uint64_t p);
Poly gcd(Poly a, Poly b, std::uint64_t p);  // monic, gcd(0,0) = 0
Poly derivative(const Poly& f, std::uint64_t p);
std::uint64_t eval(const Poly& f, std::uint64_t x, std::uint64_t p);

/// base^e mod (m, p); m must have positive degree.
Poly powmod(const Poly& base, std::uint64_t e, const Poly& m, std::uint64_t p);

bool is_squarefree(const Poly& f, std::uint64_t p);
bool is_irreducible(const Poly& f, std::uint64_t p);

/// Number of distinct roots of f in F_q, q = p^k, i.e. deg gcd(x^q - x, f).
int count_roots(const Poly& f, std::uint64_t p, unsigned k = 1);

/// Canonical order on monic polynomials: by degree, then coefficients
/// compared from the highest non-leading one down.
bool canonical_less(const Poly& a, const Poly& b);

/// Complete factorization of a squarefree polynomial into monic irreducible
/// factors (distinct-degree, then equal-degree splitting), sorted by
/// canonical_less. Deterministic.
std::vector<Poly> factor_squarefree(const Poly& f, std::uint64_t p);

}  // namespace k3lab::polymod
