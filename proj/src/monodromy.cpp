#include "k3lab/monodromy.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "k3lab/numfield.hpp"

namespace k3lab::monodromy {

SignedPermutation::SignedPermutation(std::vector<int> pi, std::vector<std::uint8_t> a)
    : pi_(std::move(pi)), a_(std::move(a)) {
  if (pi_.size() != a_.size()) throw std::invalid_argument("SignedPermutation: size mismatch");
  std::vector<bool> seen(pi_.size(), false);
  for (int v : pi_) {
    if (v < 0 || static_cast<std::size_t>(v) >= pi_.size() || seen[v]) {
      throw std::invalid_argument("SignedPermutation: pi is not a bijection");
    }
    seen[v] = true;
  }
  for (auto& bit : a_) bit &= 1U;
}

SignedPermutation SignedPermutation::identity(int d) {
  std::vector<int> pi(d);
  std::iota(pi.begin(), pi.end(), 0);
  return {pi, std::vector<std::uint8_t>(d, 0)};
}

SignedPermutation SignedPermutation::flip_all(int d) {
  std::vector<int> pi(d);
  std::iota(pi.begin(), pi.end(), 0);
  return {pi, std::vector<std::uint8_t>(d, 1)};
}

std::vector<SignedPermutation> SignedPermutation::enumerate(int d) {
  std::vector<SignedPermutation> out;
  std::vector<int> pi(d);
  std::iota(pi.begin(), pi.end(), 0);
  do {
    for (unsigned mask = 0; mask < (1U << d); ++mask) {
      std::vector<std::uint8_t> a(d);
      for (int i = 0; i < d; ++i) a[i] = (mask >> i) & 1U;
      out.emplace_back(pi, a);
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  return out;
}

SignedPermutation operator*(const SignedPermutation& s, const SignedPermutation& t) {
  const int d = s.pairs();
  if (t.pairs() != d) throw std::invalid_argument("SignedPermutation: composing different sizes");
  std::vector<int> pi(d);
  std::vector<std::uint8_t> a(d);
  for (int i = 0; i < d; ++i) {
    pi[i] = s.pi_[t.pi_[i]];
    a[i] = t.a_[i] ^ s.a_[t.pi_[i]];
  }
  return {pi, a};
}

SignedPermutation SignedPermutation::inverse() const {
  const int d = pairs();
  std::vector<int> pi(d);
  std::vector<std::uint8_t> a(d);
  for (int i = 0; i < d; ++i) {
    pi[pi_[i]] = i;
    a[pi_[i]] = a_[i];
  }
  return {pi, a};
}

std::vector<int> SignedPermutation::to_s2d() const {
  std::vector<int> img(2 * pi_.size());
  for (std::size_t i = 0; i < pi_.size(); ++i) {
    for (int e = 0; e < 2; ++e) img[2 * i + e] = 2 * pi_[i] + (e ^ a_[i]);
  }
  return img;
}

int sgn_2d(const SignedPermutation& s) {
  // A lifted pair permutation moves both members of each pair along equal
  // cycles, so it is even; only the flips contribute.
  int flips = 0;
  for (auto bit : s.flips()) flips += bit;
  return flips % 2 == 0 ? 1 : -1;
}

Matrix<std::int64_t> block_matrix(const SignedPermutation& s, int b) {
  if (b < 1) throw std::invalid_argument("block_matrix: block dimension must be positive");
  const int d = s.pairs();
  const auto n = static_cast<std::size_t>(2 * d * b);
  Matrix<std::int64_t> m(n, n);
  auto index = [b](int pair, int member, int j) { return static_cast<std::size_t>(pair * 2 * b + member * b + j); };
  for (int i = 0; i < d; ++i) {
    for (int e = 0; e < 2; ++e) {
      for (int j = 0; j < b; ++j) m(index(s.pi()[i], e ^ s.flips()[i], j), index(i, e, j)) = 1;
    }
  }
  return m;
}

Matrix<std::int64_t> block_gram(int d, int b) {
  const auto n = static_cast<std::size_t>(2 * d * b);
  Matrix<std::int64_t> g(n, n);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < b; ++j) {
      const auto v = static_cast<std::size_t>(i * 2 * b + j);
      const auto w = v + static_cast<std::size_t>(b);
      g(v, w) = 1;
      g(w, v) = 1;
    }
  }
  return g;
}

BigInt det_exact(const Matrix<BigInt>& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("det_exact: matrix is not square");
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  Matrix<BigInt> a = input;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(swap_row, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

BigInt det_exact(const Matrix<std::int64_t>& m) { return det_exact(matrix_cast<BigInt>(m)); }

Rational det_exact(const Matrix<Rational>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det_exact: matrix is not square");
  Matrix<BigInt> scaled(m.rows(), m.cols());
  BigInt scale = 1;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    BigInt row_lcm = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      row_lcm = boost::multiprecision::lcm(row_lcm, boost::multiprecision::denominator(m(r, c)));
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
      scaled(r, c) = boost::multiprecision::numerator(m(r, c)) * (row_lcm / boost::multiprecision::denominator(m(r, c)));
    }
    scale *= row_lcm;
  }
  return Rational(det_exact(scaled), scale);
}

Matrix<Rational> inverse(const Matrix<Rational>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix is not square");
  const std::size_t n = m.rows();
  Matrix<Rational> a = m;
  Matrix<Rational> inv = Matrix<Rational>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col) == 0) ++piv;
    if (piv == n) throw std::domain_error("inverse: matrix is singular");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    }
    const Rational scale = 1 / a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) *= scale;
      inv(col, c) *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const Rational factor = a(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= factor * a(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  return inv;
}

namespace {

std::string describe(const SignedPermutation& s) {
  std::ostringstream os;
  os << "pi=(";
  for (std::size_t i = 0; i < s.pi().size(); ++i) os << (i ? " " : "") << s.pi()[i] + 1;
  os << ") a=(";
  for (std::size_t i = 0; i < s.flips().size(); ++i) os << (i ? " " : "") << int{s.flips()[i]};
  os << ")";
  return os.str();
}

}  // namespace

NormalizerReport verify_normalizer_det(int d, int b) {
  if (d < 1 || b < 1) throw std::invalid_argument("verify_normalizer_det: d and b must be positive");
  NormalizerReport report;
  report.pairs = d;
  report.block_dim = b;
  const Matrix<BigInt> gram = matrix_cast<BigInt>(block_gram(d, b));
  for (const auto& s : SignedPermutation::enumerate(d)) {
    ++report.elements_checked;
    const Matrix<BigInt> m = matrix_cast<BigInt>(block_matrix(s, b));
    if (!(m.transpose() * gram * m == gram)) {
      report.violations.push_back(describe(s) + ": block matrix does not preserve the form");
    }
    const BigInt det = det_exact(m);
    const int expected = (b % 2 == 0) ? 1 : sgn_2d(s);
    if (det != expected) {
      report.violations.push_back(describe(s) + ": det " + det.str() + " != sgn^b = " + std::to_string(expected));
    }
  }
  return report;
}

CentralizerReport verify_centralizer(int d, int b, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("verify_centralizer: trials must be positive");
  CentralizerReport report;
  report.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(-5, 5);
  const auto n = static_cast<std::size_t>(2 * d * b);
  const Matrix<Rational> gram = matrix_cast<Rational>(block_gram(d, b));
  for (int t = 0; t < trials; ++t) {
    Matrix<Rational> s(n, n);
    Matrix<Rational> perturbed(n, n);
    for (int i = 0; i < d; ++i) {
      Matrix<Rational> block(b, b);
      for (;;) {
        for (int r = 0; r < b; ++r)
          for (int c = 0; c < b; ++c) block(r, c) = Rational(entry(rng), 1 + (entry(rng) + 5) % 3);
        if (det_exact(block) != 0) break;
        ++report.resampled_singular;
      }
      const Matrix<Rational> partner = inverse(block.transpose());
      const std::size_t base = static_cast<std::size_t>(i) * 2 * b;
      for (int r = 0; r < b; ++r) {
        for (int c = 0; c < b; ++c) {
          s(base + r, base + c) = block(r, c);
          s(base + b + r, base + b + c) = partner(r, c);
          perturbed(base + r, base + c) = block(r, c);
          perturbed(base + b + r, base + b + c) = partner(r, c);
        }
      }
    }
    perturbed(static_cast<std::size_t>(b), static_cast<std::size_t>(b)) += 1;
    if (s.transpose() * gram * s == gram) ++report.orthogonal_passes;
    if (!(perturbed.transpose() * gram * perturbed == gram)) ++report.perturbed_rejections;
  }
  return report;
}

GaloisAction GaloisAction::abelian(std::uint64_t conductor, std::vector<std::uint64_t> kernel) {
  if (conductor < 3) throw std::invalid_argument("GaloisAction::abelian: conductor too small");
  std::vector<std::uint64_t> units;
  for (std::uint64_t r = 1; r < conductor; ++r) {
    if (std::gcd(r, conductor) == 1) units.push_back(r);
  }
  if (std::find(kernel.begin(), kernel.end(), 1) == kernel.end()) kernel.push_back(1);
  // cosets r*H, identified by their smallest member
  std::vector<std::uint64_t> coset_of(conductor, 0);
  std::vector<std::uint64_t> reps;
  for (std::uint64_t r : units) {
    if (coset_of[r] != 0) continue;
    reps.push_back(r);
    for (std::uint64_t h : kernel) coset_of[r * h % conductor] = reps.size();
  }
  const std::size_t n = reps.size();
  if (n % 2 != 0) throw std::invalid_argument("GaloisAction::abelian: complex conjugation lies in the kernel");
  // pair index and member for each coset (1-based coset ids)
  std::vector<int> pair_of(n + 1, -1), member_of(n + 1, 0);
  int pairs = 0;
  for (std::size_t c = 1; c <= n; ++c) {
    if (pair_of[c] != -1) continue;
    const std::uint64_t conj = coset_of[(conductor - reps[c - 1]) % conductor];
    if (conj == c) throw std::invalid_argument("GaloisAction::abelian: complex conjugation lies in the kernel");
    pair_of[c] = pairs;
    member_of[c] = 0;
    pair_of[conj] = pairs;
    member_of[conj] = 1;
    ++pairs;
  }
  std::vector<std::uint64_t> first_member(pairs);
  for (std::size_t c = 1; c <= n; ++c) {
    if (member_of[c] == 0) first_member[pair_of[c]] = reps[c - 1];
  }

  GaloisAction act;
  act.pairs_ = pairs;
  act.conductor_ = conductor;
  std::set<SignedPermutation> distinct;
  for (std::uint64_t r : units) {
    std::vector<int> pi(pairs);
    std::vector<std::uint8_t> a(pairs);
    for (int i = 0; i < pairs; ++i) {
      const std::uint64_t img = coset_of[first_member[i] * r % conductor];
      pi[i] = pair_of[img];
      a[i] = static_cast<std::uint8_t>(member_of[img]);
    }
    SignedPermutation s(pi, a);
    act.residue_table_.emplace_back(r, s);
    if (distinct.insert(s).second) act.generators_.push_back(s);
  }
  return act;
}

GaloisAction GaloisAction::relative_flip(int pairs, std::int64_t flip_disc,
                                         std::vector<SignedPermutation> generators) {
  GaloisAction act;
  act.pairs_ = pairs;
  act.flip_disc_ = flip_disc;
  act.generators_ = std::move(generators);
  return act;
}

std::size_t GaloisAction::group_order() const {
  std::set<SignedPermutation> group{SignedPermutation::identity(pairs_)};
  std::vector<SignedPermutation> frontier{SignedPermutation::identity(pairs_)};
  while (!frontier.empty()) {
    std::vector<SignedPermutation> next;
    for (const auto& g : frontier) {
      for (const auto& s : generators_) {
        SignedPermutation h = s * g;
        if (group.insert(h).second) next.push_back(h);
      }
    }
    frontier = std::move(next);
  }
  return group.size();
}

SignedPermutation GaloisAction::frobenius(std::uint64_t p, unsigned f) const {
  if (conductor_ != 0) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < f; ++i) r = r * (p % conductor_) % conductor_;
    for (const auto& [res, s] : residue_table_) {
      if (res == r) return s;
    }
    throw std::domain_error("GaloisAction::frobenius: prime " + std::to_string(p) + " is ramified in E");
  }
  int value = numfield::kronecker(flip_disc_, p);
  if (value == 0) throw std::domain_error("GaloisAction::frobenius: prime " + std::to_string(p) + " is ramified");
  if (f % 2 == 0) value = 1;
  return value == 1 ? SignedPermutation::identity(pairs_) : SignedPermutation::flip_all(pairs_);
}

EndoFieldDesc imag_quadratic(std::int64_t delta) {
  if (delta <= 0) throw std::invalid_argument("imag_quadratic: delta must be positive");
  EndoFieldDesc E;
  E.kind = EndoKind::CmImagQuadratic;
  E.name = delta == 1 ? "Q(i)" : "Q(sqrt(-" + std::to_string(delta) + "))";
  E.degree = 2;
  E.delta = delta;
  E.action = std::make_shared<const GaloisAction>(
      GaloisAction::relative_flip(1, -delta, {SignedPermutation::flip_all(1)}));
  return E;
}

int CharacterDesc::evaluate(std::uint64_t p, unsigned f) const {
  switch (kind) {
    case Kind::Trivial:
      return 1;
    case Kind::Kronecker: {
      const int v = numfield::kronecker(D, p);
      return (f % 2 == 0 && v != 0) ? 1 : v;
    }
    case Kind::QuadraticSubfield:
    case Kind::SignOfAction:
      if (!action) throw std::logic_error("CharacterDesc: no Galois action attached");
      return sgn_2d(action->frobenius(p, f));
  }
  return 1;
}

std::string CharacterDesc::to_string() const {
  switch (kind) {
    case Kind::Trivial:
      return "trivial";
    case Kind::Kronecker:
      return "(" + std::to_string(D) + "/.)";
    case Kind::QuadraticSubfield:
      return "quadratic character of " + description;
    case Kind::SignOfAction:
      return "sign of the Galois action on " + description;
  }
  return "";
}

CharacterDesc jump_character_predict(const EndoFieldDesc& E, int rho) {
  if (!E.is_cm()) throw PredictorScopeError("jump character predictor applies to CM endomorphism fields only (" + E.name + ")");
  const int r = 22 - rho;
  if (r <= 0 || r % E.degree != 0) {
    throw std::invalid_argument("jump_character_predict: [E:Q] = " + std::to_string(E.degree) +
                                " does not divide 22 - rho = " + std::to_string(r));
  }
  CharacterDesc chi;
  if ((r / E.degree) % 2 == 0) return chi;
  switch (E.kind) {
    case EndoKind::CmImagQuadratic:
      chi.kind = CharacterDesc::Kind::Kronecker;
      chi.D = -E.delta;
      return chi;
    case EndoKind::CmCyclic:
      if (E.quadratic_subfield) {
        chi.kind = CharacterDesc::Kind::Kronecker;
        chi.D = *E.quadratic_subfield;
      } else {
        chi.kind = CharacterDesc::Kind::QuadraticSubfield;
        chi.description = "the quadratic subfield of " + E.name;
        chi.action = E.action;
      }
      return chi;
    case EndoKind::CmGeneral: {
      if (!E.action) throw std::invalid_argument("jump_character_predict: CM field without Galois action");
      const bool all_even = std::all_of(E.action->generators().begin(), E.action->generators().end(),
                                        [](const SignedPermutation& s) { return sgn_2d(s) == 1; });
      if (all_even) return chi;
      chi.kind = CharacterDesc::Kind::SignOfAction;
      chi.description = "the embeddings of " + E.name;
      chi.action = E.action;
      return chi;
    }
    default:
      break;
  }
  throw PredictorScopeError("jump character predictor applies to CM endomorphism fields only");
}

ComponentOrder component_group_order(const EndoFieldDesc& E, std::uint64_t kE_over_k_degree) {
  ComponentOrder out;
  out.order = kE_over_k_degree;
  out.exact = E.is_cm();
  return out;
}

}  // namespace k3lab::monodromy
