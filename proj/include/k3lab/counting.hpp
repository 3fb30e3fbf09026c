#pragma once

// Point counts over finite fields: double covers of P^2 branched along a
// sextic, odd-degree hyperelliptic curves, elliptic a_p, and the node
// correction that turns a raw double-cover count into a K3 count.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "k3lab/ffield.hpp"
#include "k3lab/models.hpp"
#include "k3lab/numfield.hpp"

namespace k3lab::counting {

using ffield::ExtField;
using ffield::FieldElem;

struct ReducedForm {
  std::vector<std::pair<std::array<int, 3>, FieldElem>> terms;
};

/// A branch sextic scalar * prod(factors) with coefficients in a finite field.
struct ReducedSextic {
  FieldElem scalar;
  std::vector<ReducedForm> factors;
};

/// Reduces the catalog branch into the residue field; throws
/// numfield::BadPrime when a denominator vanishes.
ReducedSextic reduce_branch(const models::BranchSextic& branch, const numfield::ResidueField& rf);

FieldElem evaluate(const ReducedSextic& f, const ExtField& K, FieldElem x, FieldElem y, FieldElem z);

struct RawCount {
  std::uint64_t q = 0;
  std::uint64_t value = 0;
};

/// sum over P in P^2(F_q) of 1 + chi(f(P)). Throws std::invalid_argument
/// unless every factor is homogeneous and the total degree is 6.
RawCount count_double_cover_raw(const ReducedSextic& f, const ExtField& K);

/// sum over x in F_q of chi(g(x)), g with integer coefficients, lowest first.
std::int64_t character_sum(const std::vector<std::int64_t>& g, const ExtField& K);

/// 1 + sum_x (1 + chi(g(x))) for deg g odd. Throws numfield::BadPrime when g
/// is not squarefree of full degree mod p.
std::uint64_t count_hyperelliptic_odd(const std::vector<std::int64_t>& g, const ExtField& K);

/// The same sum and count over F_{p^2}, given F_p: x = a + b w runs over
/// rows b, and chi(g(x)) is the F_p character of the norm, a polynomial in
/// a. Needs no F_{p^2} tables. Degree of g at most 6.
std::int64_t character_sum_over_square(const std::vector<std::int64_t>& g, const ExtField& Fp);
std::uint64_t count_hyperelliptic_odd_over_square(const std::vector<std::int64_t>& g, const ExtField& Fp);

/// a_p = p + 1 - #E(F_p) for y^2 = g(x), g cubic. Throws numfield::BadPrime
/// at bad primes.
std::int64_t ap_elliptic(const std::vector<std::int64_t>& g, std::uint64_t p);
std::int64_t ap_elliptic(const std::vector<std::int64_t>& g, const ExtField& Fp);

/// Frobenius-fixed nodes at the slot: the rational ones plus the roots of
/// the eliminant factors in the residue field.
std::uint64_t fixed_node_count(const models::NodeCensus& census, const numfield::PrimeSlot& slot);

struct ResolvedCount {
  std::uint64_t q = 0;
  std::uint64_t raw = 0;
  std::uint64_t fixed_nodes = 0;
  std::uint64_t resolved = 0;  // raw + q * fixed_nodes
};

/// Point count of the minimal resolution. Each fixed node is replaced by a
/// smooth conic with q + 1 points. Throws numfield::BadPrime if the slot is
/// not good for the surface.
ResolvedCount count_resolved(const models::SurfaceSpec& spec, const numfield::PrimeSlot& slot,
                             std::uint64_t budget = ffield::kDefaultTableBudget);

}  // namespace k3lab::counting
