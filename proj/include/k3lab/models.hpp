#pragma once

// Catalog of the K3 surfaces and auxiliary curves, with bad-prime detection
// and node data for the double-cover models.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "k3lab/monodromy.hpp"
#include "k3lab/numfield.hpp"

namespace k3lab::models {

using numfield::NfElem;

enum class ModelKind { DoubleCover, KummerProduct, KummerJacobian, Twist };

struct Term {
  std::array<int, 3> exp;  // exponents of x, y, z
  NfElem coeff;
};

/// Homogeneous polynomial in x, y, z with coefficients in the base field.
struct HomPoly {
  std::vector<Term> terms;

  int degree() const;
  bool is_homogeneous() const;
  bool is_linear() const { return degree() == 1 && is_homogeneous(); }
};

/// Linear form a x + b y + c z.
HomPoly linear_form(NfElem a, NfElem b, NfElem c);

/// Branch sextic scalar * prod(factors).
struct BranchSextic {
  NfElem scalar = 1;
  std::vector<HomPoly> factors;

  int degree() const;
  bool is_line_arrangement() const;
  /// Full expansion; base field Q only (all coefficients integral).
  std::vector<std::pair<std::array<int, 3>, std::int64_t>> expand_rational() const;
};

struct NodeCensus {
  int rational_node_count = 0;
  /// Eliminant of the remaining nodes, stored as its irreducible integer
  /// factors (lowest degree first); fixed nodes mod p = sum of root counts.
  std::vector<std::vector<std::int64_t>> eliminant;

  int eliminant_degree() const;
};

enum class AlgTraceKind { RationalNodes16, NodeClasses, Experimental, NotApplicable };

/// Frobenius trace on the algebraic classes, divided by q.
///   RationalNodes16: 16.
///   NodeClasses:     1 + (number of Frobenius-fixed nodes).
///   Experimental:    base_constant + eliminant_weight * (fixed eliminant roots).
struct AlgTraceModel {
  AlgTraceKind kind = AlgTraceKind::NotApplicable;
  int base_constant = 0;
  int eliminant_weight = 0;
};

struct SurfaceSpec {
  std::string name;
  ModelKind kind = ModelKind::DoubleCover;
  numfield::NumberFieldDesc base_field = numfield::NumberFieldDesc::rationals();
  std::string equation;

  BranchSextic branch;                    // DoubleCover, Twist (already scaled)
  std::string curve1, curve2;             // KummerProduct
  std::string curve;                      // KummerJacobian
  std::string twist_base;                 // Twist
  std::int64_t twist_disc = 0;            // Twist

  int picard_rank = 16;
  monodromy::EndoFieldDesc endo;
  std::uint64_t kE_over_k_degree = 1;
  AlgTraceModel alg;
  std::optional<NodeCensus> census;
  /// Prime divisors of the model's degeneracy integer beyond those detected
  /// per slot (denominators, line determinants, curve squarefreeness).
  std::vector<std::uint64_t> bad_primes;

  int dim_T() const { return 22 - picard_rank; }
};

/// y^2 = g(x) or w^2 = g(x), g given lowest degree first.
struct CurveSpec {
  std::string name;
  std::vector<std::int64_t> g;
  std::string equation;
  int genus() const { return (static_cast<int>(g.size()) - 2) / 2; }
};

const std::vector<SurfaceSpec>& surfaces();
const std::vector<CurveSpec>& curves();
/// Throws std::out_of_range for unknown names.
const SurfaceSpec& find_surface(const std::string& name);
const CurveSpec& find_curve(const std::string& name);

/// Curve has good reduction at the odd prime p (g squarefree of full degree mod p).
bool good_prime(const CurveSpec& curve, std::uint64_t p);
bool good_prime(const SurfaceSpec& spec, const numfield::PrimeSlot& slot);

/// Throws std::invalid_argument("no node model") for non-double-cover specs.
NodeCensus node_census(const SurfaceSpec& spec);

/// Residue-field coordinates of the 15 pairwise intersections of a six-line
/// arrangement, normalized so the last nonzero coordinate is 1.
std::vector<std::array<ffield::FieldElem, 3>> arrangement_nodes(const SurfaceSpec& spec,
                                                                 const numfield::ResidueField& rf);

std::string kind_name(ModelKind kind);
std::string alg_model_name(AlgTraceKind kind);

}  // namespace k3lab::models
