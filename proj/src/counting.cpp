#include "k3lab/counting.hpp"

#include <string>

#include "k3lab/polymod.hpp"

namespace k3lab::counting {

namespace {

using UPoly = std::vector<FieldElem>;  // coefficients in x, lowest first

constexpr int kMaxDegree = 6;
constexpr int kMaxRowDegree = 2 * kMaxDegree;  // norms of degree-6 polynomials

UPoly poly_mul(const UPoly& a, const UPoly& b, const ExtField& K) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1, K.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == K.zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = K.add(out[i + j], K.mul(a[i], b[j]));
  }
  return out;
}

// f(x, y, z) as a polynomial in x for fixed y, z.
UPoly row_poly(const ReducedSextic& f, const ExtField& K, FieldElem y, FieldElem z) {
  std::array<FieldElem, kMaxDegree + 1> yp{}, zp{};
  yp[0] = zp[0] = K.one();
  for (int i = 1; i <= kMaxDegree; ++i) {
    yp[i] = K.mul(yp[i - 1], y);
    zp[i] = K.mul(zp[i - 1], z);
  }
  UPoly acc{f.scalar};
  for (const auto& factor : f.factors) {
    UPoly row;
    for (const auto& [e, c] : factor.terms) {
      if (static_cast<std::size_t>(e[0]) >= row.size()) row.resize(e[0] + 1, K.zero());
      row[e[0]] = K.add(row[e[0]], K.mul(c, K.mul(yp[e[1]], zp[e[2]])));
    }
    acc = poly_mul(acc, row, K);
  }
  while (!acc.empty() && acc.back() == K.zero()) acc.pop_back();
  return acc;
}

FieldElem horner(const UPoly& P, const ExtField& K, FieldElem x) {
  FieldElem acc = K.zero();
  for (auto it = P.rbegin(); it != P.rend(); ++it) acc = K.add(K.mul(acc, x), *it);
  return acc;
}

// sum over x in F_p of chi(P(x)), by forward differences: one addition per
// degree per point, no multiplications.
std::int64_t prime_field_row_sum(const UPoly& P, const ExtField& K) {
  if (P.empty()) return 0;
  const std::uint64_t p = K.characteristic();
  const auto chi = K.char_table();
  const int D = static_cast<int>(P.size()) - 1;
  std::array<std::uint64_t, kMaxRowDegree + 2> d{};
  for (int i = 0; i <= D; ++i) d[i] = horner(P, K, K.from_int(i)).code;
  for (int level = 1; level <= D; ++level) {
    for (int i = D; i >= level; --i) d[i] = d[i] >= d[i - 1] ? d[i] - d[i - 1] : d[i] + p - d[i - 1];
  }
  std::int64_t sum = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    sum += chi[d[0]];
    for (int i = 0; i < D; ++i) {
      std::uint64_t s = d[i] + d[i + 1];
      d[i] = s >= p ? s - p : s;
    }
  }
  return sum;
}

std::int64_t row_sum(const UPoly& P, const ExtField& K) {
  if (K.degree() == 1 && P.size() <= kMaxRowDegree + 1) return prime_field_row_sum(P, K);
  const auto chi = K.char_table();
  std::int64_t sum = 0;
  for (std::uint64_t code = 0; code < K.size(); ++code) sum += chi[horner(P, K, K.element(code)).code];
  return sum;
}

UPoly reduce_integer_poly(const std::vector<std::int64_t>& g, const ExtField& K) {
  UPoly P;
  for (auto c : g) P.push_back(K.from_int(c));
  while (!P.empty() && P.back() == K.zero()) P.pop_back();
  return P;
}

void require_good_curve(const std::vector<std::int64_t>& g, std::uint64_t p) {
  const polymod::Poly red = polymod::from_signed(g, p);
  if (polymod::degree(red) != static_cast<int>(g.size()) - 1 || !polymod::is_squarefree(red, p)) {
    throw numfield::BadPrime("bad prime " + std::to_string(p) + ": curve polynomial is not squarefree mod p");
  }
}

}  // namespace

ReducedSextic reduce_branch(const models::BranchSextic& branch, const numfield::ResidueField& rf) {
  ReducedSextic out;
  out.scalar = numfield::residue_reduce(branch.scalar, rf);
  for (const auto& f : branch.factors) {
    ReducedForm r;
    for (const auto& t : f.terms) r.terms.emplace_back(t.exp, numfield::residue_reduce(t.coeff, rf));
    out.factors.push_back(std::move(r));
  }
  return out;
}

FieldElem evaluate(const ReducedSextic& f, const ExtField& K, FieldElem x, FieldElem y, FieldElem z) {
  FieldElem acc = f.scalar;
  for (const auto& factor : f.factors) {
    FieldElem v = K.zero();
    for (const auto& [e, c] : factor.terms) {
      v = K.add(v, K.mul(c, K.mul(K.pow(x, e[0]), K.mul(K.pow(y, e[1]), K.pow(z, e[2])))));
    }
    acc = K.mul(acc, v);
  }
  return acc;
}

RawCount count_double_cover_raw(const ReducedSextic& f, const ExtField& K) {
  int total = 0;
  for (const auto& factor : f.factors) {
    int deg = -1;
    for (const auto& [e, c] : factor.terms) {
      const int d = e[0] + e[1] + e[2];
      if (deg != -1 && d != deg) throw std::invalid_argument("count_double_cover_raw: non-homogeneous factor");
      if (d > kMaxDegree) throw std::invalid_argument("count_double_cover_raw: factor degree exceeds 6");
      deg = d;
    }
    total += std::max(deg, 0);
  }
  if (total != 6) throw std::invalid_argument("count_double_cover_raw: branch curve is not a sextic");

  const std::uint64_t q = K.size();
  std::int64_t chi_sum = 0;
  // affine chart z = 1
  for (std::uint64_t code = 0; code < q; ++code) chi_sum += row_sum(row_poly(f, K, K.element(code), K.one()), K);
  // line at infinity: (x : 1 : 0) and (1 : 0 : 0)
  chi_sum += row_sum(row_poly(f, K, K.one(), K.zero()), K);
  chi_sum += K.quad_char(evaluate(f, K, K.one(), K.zero(), K.zero()));
  const auto points = static_cast<std::int64_t>(q * q + q + 1);
  return {q, static_cast<std::uint64_t>(points + chi_sum)};
}

std::int64_t character_sum(const std::vector<std::int64_t>& g, const ExtField& K) {
  const UPoly P = reduce_integer_poly(g, K);
  if (P.empty()) return 0;
  if (K.degree() == 1) return row_sum(P, K);

  // Walk x = gen^k; each monomial c_i x^i is gen^(log c_i + i k).
  const auto chi = K.char_table();
  const std::uint64_t order = K.size() - 1;
  std::vector<std::uint64_t> power, index;
  FieldElem constant = P[0];
  for (std::size_t i = 1; i < P.size(); ++i) {
    if (P[i] == K.zero()) continue;
    power.push_back(i % order);
    index.push_back(K.log_index(P[i]));
  }
  std::int64_t sum = chi[constant.code];  // x = 0
  for (std::uint64_t k = 0; k < order; ++k) {
    FieldElem v = constant;
    for (std::size_t t = 0; t < power.size(); ++t) {
      v = K.add(v, K.exp_index(index[t]));
      index[t] += power[t];
      if (index[t] >= order) index[t] -= order;
    }
    sum += chi[v.code];
  }
  return sum;
}

std::int64_t character_sum_over_square(const std::vector<std::int64_t>& g, const ExtField& Fp) {
  if (Fp.degree() != 1) throw std::invalid_argument("character_sum_over_square: expected a prime field");
  if (g.size() > kMaxDegree + 1) throw std::invalid_argument("character_sum_over_square: degree above 6");
  const std::uint64_t p = Fp.characteristic();
  const auto chi = Fp.char_table();
  std::uint64_t n = 2;
  while (chi[n % p] != -1) ++n;
  const UPoly G = reduce_integer_poly(g, Fp);
  if (G.empty()) return 0;
  const FieldElem nonres = Fp.from_int(static_cast<std::int64_t>(n));

  // For x = a + b w with w^2 = n, g(x) = R(a) + I(a) w and its norm
  // R^2 - n I^2 is a polynomial in a over F_p; chi over F_{p^2} is chi(norm).
  std::int64_t sum = 0;
  for (std::uint64_t code = 0; code < p; ++code) {
    const FieldElem b = Fp.element(code);
    UPoly R, I;
    for (auto it = G.rbegin(); it != G.rend(); ++it) {
      // (R + I w)(a + b w) = (a R + n b I) + (a I + b R) w
      UPoly R2(R.size() + 1, Fp.zero()), I2(std::max(R.size(), I.size()) + 1, Fp.zero());
      for (std::size_t i = 0; i < R.size(); ++i) {
        R2[i + 1] = Fp.add(R2[i + 1], R[i]);
        I2[i] = Fp.add(I2[i], Fp.mul(b, R[i]));
      }
      for (std::size_t i = 0; i < I.size(); ++i) {
        I2[i + 1] = Fp.add(I2[i + 1], I[i]);
        R2[i] = Fp.add(R2[i], Fp.mul(nonres, Fp.mul(b, I[i])));
      }
      if (R2.empty()) R2.push_back(Fp.zero());
      R2[0] = Fp.add(R2[0], *it);
      R = std::move(R2);
      I = std::move(I2);
    }
    UPoly N = poly_mul(R, R, Fp);
    const UPoly I2 = poly_mul(I, I, Fp);
    if (N.size() < I2.size()) N.resize(I2.size(), Fp.zero());
    for (std::size_t i = 0; i < I2.size(); ++i) N[i] = Fp.sub(N[i], Fp.mul(nonres, I2[i]));
    while (!N.empty() && N.back() == Fp.zero()) N.pop_back();
    sum += row_sum(N, Fp);
  }
  return sum;
}

std::uint64_t count_hyperelliptic_odd_over_square(const std::vector<std::int64_t>& g, const ExtField& Fp) {
  if (g.size() < 2 || g.size() % 2 != 0) throw std::invalid_argument("count_hyperelliptic_odd: degree must be odd");
  require_good_curve(g, Fp.characteristic());
  const auto q = static_cast<std::int64_t>(Fp.size() * Fp.size());
  return static_cast<std::uint64_t>(1 + q + character_sum_over_square(g, Fp));
}

std::uint64_t count_hyperelliptic_odd(const std::vector<std::int64_t>& g, const ExtField& K) {
  if (g.size() < 2 || g.size() % 2 != 0) throw std::invalid_argument("count_hyperelliptic_odd: degree must be odd");
  require_good_curve(g, K.characteristic());
  return static_cast<std::uint64_t>(1 + static_cast<std::int64_t>(K.size()) + character_sum(g, K));
}

std::int64_t ap_elliptic(const std::vector<std::int64_t>& g, const ExtField& Fp) {
  if (g.size() != 4) throw std::invalid_argument("ap_elliptic: expected a cubic");
  if (Fp.degree() != 1) throw std::invalid_argument("ap_elliptic: expected a prime field");
  require_good_curve(g, Fp.characteristic());
  // #E = p + 1 + sum chi, so a_p = -sum chi
  return -character_sum(g, Fp);
}

std::int64_t ap_elliptic(const std::vector<std::int64_t>& g, std::uint64_t p) {
  if (p == 2) throw numfield::BadPrime("bad prime 2 for a curve y^2 = g(x)");
  return ap_elliptic(g, ExtField::build(p, 1));
}

std::uint64_t fixed_node_count(const models::NodeCensus& census, const numfield::PrimeSlot& slot) {
  std::uint64_t n = static_cast<std::uint64_t>(census.rational_node_count);
  for (const auto& fac : census.eliminant) {
    n += static_cast<std::uint64_t>(polymod::count_roots(polymod::from_signed(fac, slot.p), slot.p, slot.f));
  }
  return n;
}

ResolvedCount count_resolved(const models::SurfaceSpec& spec, const numfield::PrimeSlot& slot,
                             std::uint64_t budget) {
  if (!models::good_prime(spec, slot)) {
    throw numfield::BadPrime("bad prime for " + spec.name + ": " + std::to_string(slot.p));
  }
  if (slot.norm > budget) {
    throw ffield::BudgetExceeded("count_resolved: norm " + std::to_string(slot.norm) + " exceeds the table budget");
  }
  const models::NodeCensus census = models::node_census(spec);
  const numfield::ResidueField rf = numfield::open_residue_field(spec.base_field, slot);
  ResolvedCount out;
  out.q = slot.norm;
  out.raw = count_double_cover_raw(reduce_branch(spec.branch, rf), *rf.field).value;
  out.fixed_nodes = fixed_node_count(census, slot);
  out.resolved = out.raw + out.q * out.fixed_nodes;
  return out;
}

}  // namespace k3lab::counting
