#include "k3lab/models.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "k3lab/ffield.hpp"
#include "k3lab/polymod.hpp"

namespace k3lab::models {

using ffield::FieldElem;
using monodromy::EndoFieldDesc;
using monodromy::EndoKind;
using monodromy::GaloisAction;
using monodromy::SignedPermutation;

int HomPoly::degree() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.exp[0] + t.exp[1] + t.exp[2]);
  return d;
}

bool HomPoly::is_homogeneous() const {
  const int d = degree();
  return std::all_of(terms.begin(), terms.end(),
                     [d](const Term& t) { return t.exp[0] + t.exp[1] + t.exp[2] == d; });
}

HomPoly linear_form(NfElem a, NfElem b, NfElem c) {
  HomPoly h;
  if (!a.is_zero()) h.terms.push_back({{1, 0, 0}, std::move(a)});
  if (!b.is_zero()) h.terms.push_back({{0, 1, 0}, std::move(b)});
  if (!c.is_zero()) h.terms.push_back({{0, 0, 1}, std::move(c)});
  return h;
}

int BranchSextic::degree() const {
  int d = 0;
  for (const auto& f : factors) d += f.degree();
  return d;
}

bool BranchSextic::is_line_arrangement() const {
  return std::all_of(factors.begin(), factors.end(), [](const HomPoly& h) { return h.is_linear(); });
}

std::vector<std::pair<std::array<int, 3>, std::int64_t>> BranchSextic::expand_rational() const {
  auto rational = [](const NfElem& c) {
    if (c.denominator() != 1 || c.numerator().size() > 1) {
      throw std::invalid_argument("expand_rational: coefficient is not a rational integer");
    }
    return c.is_zero() ? std::int64_t{0} : c.numerator()[0];
  };
  std::map<std::array<int, 3>, std::int64_t> acc{{{0, 0, 0}, rational(scalar)}};
  for (const auto& f : factors) {
    std::map<std::array<int, 3>, std::int64_t> next;
    for (const auto& [e, c] : acc) {
      for (const auto& t : f.terms) {
        const std::array<int, 3> ne{e[0] + t.exp[0], e[1] + t.exp[1], e[2] + t.exp[2]};
        next[ne] += c * rational(t.coeff);
      }
    }
    acc = std::move(next);
  }
  std::vector<std::pair<std::array<int, 3>, std::int64_t>> out;
  for (const auto& [e, c] : acc) {
    if (c != 0) out.emplace_back(e, c);
  }
  return out;
}

int NodeCensus::eliminant_degree() const {
  int d = 0;
  for (const auto& f : eliminant) d += static_cast<int>(f.size()) - 1;
  return d;
}

namespace {

HomPoly int_line(std::int64_t a, std::int64_t b, std::int64_t c) { return linear_form(a, b, c); }

HomPoly int_form(std::initializer_list<std::pair<std::array<int, 3>, std::int64_t>> terms) {
  HomPoly h;
  for (const auto& [e, c] : terms) h.terms.push_back({e, NfElem(c)});
  return h;
}

const HomPoly& x4_cubic() {
  static const HomPoly h = int_form({{{3, 0, 0}, 1},
                                     {{2, 0, 1}, -3},
                                     {{1, 2, 0}, -3},
                                     {{1, 1, 1}, -3},
                                     {{0, 3, 0}, 1},
                                     {{0, 2, 1}, 9},
                                     {{0, 1, 2}, 6},
                                     {{0, 0, 3}, 1}});
  return h;
}

const HomPoly& x6_cubic() {
  static const HomPoly h = int_form({{{3, 0, 0}, 1},
                                     {{2, 0, 1}, -14},
                                     {{1, 2, 0}, 11},
                                     {{1, 0, 2}, -1},
                                     {{0, 3, 0}, 12},
                                     {{0, 2, 1}, -14},
                                     {{0, 1, 2}, -12},
                                     {{0, 0, 3}, 14}});
  return h;
}

EndoFieldDesc cyclotomic_like(EndoKind kind, std::string name, int degree, std::uint64_t conductor,
                              std::vector<std::uint64_t> kernel) {
  EndoFieldDesc E;
  E.kind = kind;
  E.name = std::move(name);
  E.degree = degree;
  E.action = std::make_shared<const GaloisAction>(GaloisAction::abelian(conductor, std::move(kernel)));
  return E;
}

EndoFieldDesc real_quadratic(std::int64_t D) {
  EndoFieldDesc E;
  E.kind = EndoKind::RmRealQuadratic;
  E.name = "Q(sqrt(" + std::to_string(D) + "))";
  E.degree = 2;
  E.rm_disc = D;
  E.conjectural = true;
  return E;
}

std::vector<SurfaceSpec> build_surfaces() {
  std::vector<SurfaceSpec> out;

  {
    SurfaceSpec s;
    s.name = "X1";
    s.equation = "w^2 = xyz(x+y+z)(x+2y+3z)(5x+8y+20z)";
    s.branch.factors = {int_line(1, 0, 0), int_line(0, 1, 0), int_line(0, 0, 1),
                        int_line(1, 1, 1), int_line(1, 2, 3), int_line(5, 8, 20)};
    s.picard_rank = 16;
    s.endo = monodromy::imag_quadratic(1);
    s.kE_over_k_degree = 2;
    s.alg = {AlgTraceKind::RationalNodes16, 16, 0};
    s.census = NodeCensus{15, {}};
    s.bad_primes = {2};
    out.push_back(std::move(s));
  }
  {
    SurfaceSpec s;
    s.name = "X2";
    s.kind = ModelKind::KummerJacobian;
    s.equation = "Kummer surface of Jac(C), C: w^2 = x^5 - 1";
    s.curve = "C";
    s.picard_rank = 18;
    s.endo = cyclotomic_like(EndoKind::CmCyclic, "Q(zeta_5)", 4, 5, {1});
    s.endo.quadratic_subfield = 5;
    s.kE_over_k_degree = 4;
    s.bad_primes = {2, 5};
    out.push_back(std::move(s));
  }
  {
    SurfaceSpec s;
    s.name = "X3";
    s.kind = ModelKind::KummerProduct;
    s.equation = "Kummer surface of E1 x E2";
    s.curve1 = "E1";
    s.curve2 = "E2";
    s.picard_rank = 18;
    s.endo = cyclotomic_like(EndoKind::CmGeneral, "Q(sqrt(2), i)", 4, 8, {1});
    s.kE_over_k_degree = 4;
    s.bad_primes = {2};
    out.push_back(std::move(s));
  }
  {
    SurfaceSpec s;
    s.name = "X4";
    s.equation = "w^2 = xyz(x^3 - 3x^2z - 3xy^2 - 3xyz + y^3 + 9y^2z + 6yz^2 + z^3)";
    s.branch.factors = {int_line(1, 0, 0), int_line(0, 1, 0), int_line(0, 0, 1), x4_cubic()};
    s.picard_rank = 16;
    s.endo = cyclotomic_like(EndoKind::CmCyclic, "Q(zeta_9 + zeta_9^-1, i)", 6, 36, {1, 17});
    s.endo.quadratic_subfield = -1;
    s.endo.conjectural = true;
    s.kE_over_k_degree = 6;
    s.alg = {AlgTraceKind::NodeClasses, 1, 1};
    // The cubic splits into three conjugate lines over the cubic field of
    // t^3 - 3t + 1; three nodes are rational, the other twelve come in
    // orbits of size three (one per eliminant factor).
    s.census = NodeCensus{3, {{1, -3, 0, 1}, {1, 0, -3, 1}, {1, 6, 9, 1}, {-1, -3, 0, 1}}};
    s.bad_primes = {2, 3};
    out.push_back(std::move(s));
  }
  {
    SurfaceSpec s;
    s.name = "X5";
    s.base_field = {"Q[t]/(t^3 - t^2 - 4t + 1)", {1, -4, -1, 1}};
    s.equation =
        "w^2 = xyz(x+y+z)(x+a y+b z)(x+c y+d z), a = (-26t^2-23t+16)/9, b = (-61t^2+125t+95)/121, "
        "c = (-t^2-4t+11)/9, d = (-46t^2+5t+149)/121";
    const NfElem alpha({16, -23, -26}, 9);
    const NfElem beta({95, 125, -61}, 121);
    const NfElem gamma({11, -4, -1}, 9);
    const NfElem delta({149, 5, -46}, 121);
    s.branch.factors = {int_line(1, 0, 0), int_line(0, 1, 0), int_line(0, 0, 1), int_line(1, 1, 1),
                        linear_form(1, alpha, beta), linear_form(1, gamma, delta)};
    s.picard_rank = 16;
    s.endo.kind = EndoKind::CmGeneral;
    s.endo.name = "k(i)";
    s.endo.degree = 6;
    s.endo.conjectural = true;
    // Galois group of k acting on the three conjugate pairs of E = k(i):
    // complex conjugation and the swap of the two non-identity embeddings.
    s.endo.action = std::make_shared<const GaloisAction>(GaloisAction::relative_flip(
        3, -1, {SignedPermutation::flip_all(3), SignedPermutation({0, 2, 1}, {0, 0, 0})}));
    s.kE_over_k_degree = 2;
    s.alg = {AlgTraceKind::RationalNodes16, 16, 0};
    s.census = NodeCensus{15, {}};
    s.bad_primes = {2, 3, 11};
    out.push_back(std::move(s));
  }
  SurfaceSpec base;
  {
    base.name = "X6~";
    base.equation = "w^2 = xyz(x^3 - 14x^2z + 11xy^2 - xz^2 + 12y^3 - 14y^2z - 12yz^2 + 14z^3)";
    base.branch.factors = {int_line(1, 0, 0), int_line(0, 1, 0), int_line(0, 0, 1), x6_cubic()};
    base.picard_rank = 16;
    base.endo = real_quadratic(3);
    base.kE_over_k_degree = 2;
    // Hyperplane + 10 rational nodes + 3 further classes assumed Frobenius
    // fixed; the conjugate node pair over Q(sqrt(-47)) counts when split.
    base.alg = {AlgTraceKind::Experimental, 14, 1};
    base.census = NodeCensus{10, {{12, -1, 1}}};
    base.bad_primes = {2, 3, 5, 7, 11, 13, 17, 47};
  }
  {
    SurfaceSpec s = base;
    s.name = "X6";
    s.kind = ModelKind::Twist;
    s.equation = "w^2 = -1974 xyz(x^3 - 14x^2z + 11xy^2 - xz^2 + 12y^3 - 14y^2z - 12yz^2 + 14z^3)";
    s.twist_base = "X6~";
    s.twist_disc = -1974;
    s.branch.scalar = NfElem(-1974);
    out.push_back(std::move(s));
  }
  out.push_back(std::move(base));
  return out;
}

std::vector<CurveSpec> build_curves() {
  return {
      {"C", {-1, 0, 0, 0, 0, 1}, "w^2 = x^5 - 1"},
      {"E1", {0, 1, 0, 1}, "y^2 = x^3 + x"},
      {"E2", {0, 2, 4, 1}, "y^2 = x^3 + 4x^2 + 2x"},
  };
}

std::optional<std::vector<std::array<FieldElem, 3>>> reduce_lines(const SurfaceSpec& spec,
                                                                 const numfield::ResidueField& rf) {
  std::vector<std::array<FieldElem, 3>> lines;
  for (const auto& f : spec.branch.factors) {
    if (!f.is_linear()) return std::nullopt;
    std::array<FieldElem, 3> v{rf.field->zero(), rf.field->zero(), rf.field->zero()};
    for (const auto& t : f.terms) {
      const int slot = t.exp[0] == 1 ? 0 : (t.exp[1] == 1 ? 1 : 2);
      v[slot] = numfield::residue_reduce(t.coeff, rf);
    }
    lines.push_back(v);
  }
  return lines;
}

std::array<FieldElem, 3> cross(const ffield::ExtField& K, const std::array<FieldElem, 3>& u,
                               const std::array<FieldElem, 3>& v) {
  return {K.sub(K.mul(u[1], v[2]), K.mul(u[2], v[1])), K.sub(K.mul(u[2], v[0]), K.mul(u[0], v[2])),
          K.sub(K.mul(u[0], v[1]), K.mul(u[1], v[0]))};
}

FieldElem dot(const ffield::ExtField& K, const std::array<FieldElem, 3>& u, const std::array<FieldElem, 3>& v) {
  return K.add(K.add(K.mul(u[0], v[0]), K.mul(u[1], v[1])), K.mul(u[2], v[2]));
}

bool eliminant_good(const NodeCensus& census, std::uint64_t p) {
  for (const auto& fac : census.eliminant) {
    const polymod::Poly g = polymod::from_signed(fac, p);
    if (polymod::degree(g) != static_cast<int>(fac.size()) - 1) return false;
    if (!polymod::is_squarefree(g, p)) return false;
  }
  return true;
}

}  // namespace

const std::vector<SurfaceSpec>& surfaces() {
  static const std::vector<SurfaceSpec> all = build_surfaces();
  return all;
}

const std::vector<CurveSpec>& curves() {
  static const std::vector<CurveSpec> all = build_curves();
  return all;
}

const SurfaceSpec& find_surface(const std::string& name) {
  for (const auto& s : surfaces()) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("unknown surface '" + name + "'");
}

const CurveSpec& find_curve(const std::string& name) {
  for (const auto& c : curves()) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("unknown curve '" + name + "'");
}

bool good_prime(const CurveSpec& curve, std::uint64_t p) {
  if (p == 2 || !ffield::is_prime(p)) return false;
  const polymod::Poly g = polymod::from_signed(curve.g, p);
  if (polymod::degree(g) != static_cast<int>(curve.g.size()) - 1) return false;
  return polymod::is_squarefree(g, p);
}

bool good_prime(const SurfaceSpec& spec, const numfield::PrimeSlot& slot) {
  const std::uint64_t p = slot.p;
  if (p == 2 || !ffield::is_prime(p)) return false;
  if (std::find(spec.bad_primes.begin(), spec.bad_primes.end(), p) != spec.bad_primes.end()) return false;
  const std::int64_t disc = spec.base_field.discriminant();
  if (disc % static_cast<std::int64_t>(p) == 0) return false;

  switch (spec.kind) {
    case ModelKind::KummerProduct:
      return good_prime(find_curve(spec.curve1), p) && good_prime(find_curve(spec.curve2), p);
    case ModelKind::KummerJacobian:
      return good_prime(find_curve(spec.curve), p);
    case ModelKind::Twist:
      if (spec.twist_disc % static_cast<std::int64_t>(p) == 0) return false;
      if (!good_prime(find_surface(spec.twist_base), slot)) return false;
      break;
    case ModelKind::DoubleCover:
      break;
  }

  // Denominators and a vanishing scalar.
  for (const auto& f : spec.branch.factors) {
    for (const auto& t : f.terms) {
      if (t.coeff.denominator() % static_cast<std::int64_t>(p) == 0) return false;
    }
  }
  if (spec.branch.scalar.denominator() % static_cast<std::int64_t>(p) == 0) return false;
  for (auto c : spec.branch.scalar.numerator()) {
    if (spec.base_field.degree() == 1 && c % static_cast<std::int64_t>(p) == 0) return false;
  }
  if (spec.census && !eliminant_good(*spec.census, p)) return false;

  if (spec.branch.is_line_arrangement()) {
    const numfield::ResidueField rf = numfield::open_residue_field(spec.base_field, slot);
    const auto& K = *rf.field;
    const auto lines = *reduce_lines(spec, rf);
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (std::size_t j = i + 1; j < lines.size(); ++j)
        for (std::size_t k = j + 1; k < lines.size(); ++k) {
          if (dot(K, cross(K, lines[i], lines[j]), lines[k]) == K.zero()) return false;
        }
  }
  return true;
}

NodeCensus node_census(const SurfaceSpec& spec) {
  if (spec.kind != ModelKind::DoubleCover && spec.kind != ModelKind::Twist) {
    throw std::invalid_argument("no node model for " + spec.name);
  }
  if (spec.branch.is_line_arrangement() && spec.branch.factors.size() == 6) return NodeCensus{15, {}};
  if (spec.census) return *spec.census;
  throw std::invalid_argument("no node model for " + spec.name);
}

std::vector<std::array<FieldElem, 3>> arrangement_nodes(const SurfaceSpec& spec, const numfield::ResidueField& rf) {
  const auto lines = reduce_lines(spec, rf);
  if (!lines) throw std::invalid_argument("arrangement_nodes: " + spec.name + " is not a line arrangement");
  const auto& K = *rf.field;
  std::vector<std::array<FieldElem, 3>> nodes;
  for (std::size_t i = 0; i < lines->size(); ++i) {
    for (std::size_t j = i + 1; j < lines->size(); ++j) {
      auto v = cross(K, (*lines)[i], (*lines)[j]);
      int last = 2;
      while (last >= 0 && v[last] == K.zero()) --last;
      if (last < 0) throw numfield::BadPrime("arrangement_nodes: coincident lines");
      const FieldElem s = K.inv(v[last]);
      for (auto& c : v) c = K.mul(c, s);
      nodes.push_back(v);
    }
  }
  return nodes;
}

std::string kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::DoubleCover:
      return "DOUBLE_COVER";
    case ModelKind::KummerProduct:
      return "KUMMER_PRODUCT";
    case ModelKind::KummerJacobian:
      return "KUMMER_JACOBIAN";
    case ModelKind::Twist:
      return "TWIST";
  }
  return "?";
}

std::string alg_model_name(AlgTraceKind kind) {
  switch (kind) {
    case AlgTraceKind::RationalNodes16:
      return "RATIONAL_NODES_16";
    case AlgTraceKind::NodeClasses:
      return "NODE_CLASSES";
    case AlgTraceKind::Experimental:
      return "EXPERIMENTAL";
    case AlgTraceKind::NotApplicable:
      return "NOT_APPLICABLE";
  }
  return "?";
}

}  // namespace k3lab::models
