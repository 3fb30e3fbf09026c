#pragma once

// Exact model of the component group of the algebraic monodromy group in the
// CM case: signed permutations of d eigenspace pairs, their block matrices
// against the hyperbolic Gram form, and the jump-character predictor.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace k3lab::monodromy {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (x == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += x * b(k, j);
      }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <typename To, typename From>
Matrix<To> matrix_cast(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = To(m(r, c));
  return out;
}

/// An element (pi, a) of (Z/2Z)^d x| S_d acting on the 2d points
/// {(i, e)}: (i, e) -> (pi(i), e + a_i). Indices are zero based.
class SignedPermutation {
 public:
  SignedPermutation() = default;
  SignedPermutation(std::vector<int> pi, std::vector<std::uint8_t> a);

  static SignedPermutation identity(int d);
  /// pi = id, a = (1, ..., 1): swaps the members of every pair.
  static SignedPermutation flip_all(int d);
  /// All 2^d d! elements, in a fixed order.
  static std::vector<SignedPermutation> enumerate(int d);

  int pairs() const { return static_cast<int>(pi_.size()); }
  const std::vector<int>& pi() const { return pi_; }
  const std::vector<std::uint8_t>& flips() const { return a_; }

  /// Composition as maps, s * t = s o t: (pi o pi', a' + a o pi').
  friend SignedPermutation operator*(const SignedPermutation& s, const SignedPermutation& t);
  SignedPermutation inverse() const;

  /// Image in S_{2d}: point 2i + e goes to 2 pi(i) + (e xor a_i).
  std::vector<int> to_s2d() const;

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
  friend bool operator<(const SignedPermutation& x, const SignedPermutation& y) {
    return std::tie(x.pi_, x.a_) < std::tie(y.pi_, y.a_);
  }

 private:
  std::vector<int> pi_;
  std::vector<std::uint8_t> a_;
};

/// Sign of the image of s in S_{2d}.
int sgn_2d(const SignedPermutation& s);

/// The 0/1 matrix sending v_{i,j} to v_{pi(i),j} or v*_{pi(i),j} (as a_i is 0
/// or 1) and v*_{i,j} correspondingly, in the basis ordered pair by pair as
/// (v_{i,1..b}, v*_{i,1..b}).
Matrix<std::int64_t> block_matrix(const SignedPermutation& s, int b);

/// Block diagonal form with d blocks [[0, I_b], [I_b, 0]].
Matrix<std::int64_t> block_gram(int d, int b);

/// Exact determinant by fraction-free (Bareiss) elimination.
BigInt det_exact(const Matrix<BigInt>& m);
BigInt det_exact(const Matrix<std::int64_t>& m);
Rational det_exact(const Matrix<Rational>& m);

/// Inverse over Q; throws std::domain_error when singular.
Matrix<Rational> inverse(const Matrix<Rational>& m);

struct NormalizerReport {
  int pairs = 0;
  int block_dim = 0;
  std::size_t elements_checked = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
};

/// For every signed permutation s of d pairs, checks that block_matrix(s, b)
/// preserves block_gram(d, b) and has determinant sgn_2d(s)^b.
NormalizerReport verify_normalizer_det(int d, int b);

struct CentralizerReport {
  int trials = 0;
  int orthogonal_passes = 0;     // inverse-transpose partners that preserve the form
  int perturbed_rejections = 0;  // perturbed partners that were correctly rejected
  int resampled_singular = 0;
  bool passed() const { return orthogonal_passes == trials && perturbed_rejections == trials; }
};

/// Random invertible rational blocks G_i with partners (G_i^t)^{-1} must be
/// orthogonal for block_gram; a perturbed partner must not be.
CentralizerReport verify_centralizer(int d, int b, int trials, std::uint64_t seed = 1);

/// Action of the Galois group of the base field on the 2d conjugates of a
/// primitive element of E, organised into complex-conjugate pairs, together
/// with a rule giving the Frobenius class at an unramified prime.
class GaloisAction {
 public:
  /// E abelian over Q, the fixed field of the subgroup `kernel` of
  /// (Z/N)^*. Conjugates correspond to cosets; pairs are {g, -g}.
  static GaloisAction abelian(std::uint64_t conductor, std::vector<std::uint64_t> kernel);
  /// Relative action over a base field: Frobenius at a slot of residue
  /// degree f flips every pair iff (D/p)^f = -1. Pair permutations are not
  /// tracked by the rule (they do not affect the sign).
  static GaloisAction relative_flip(int pairs, std::int64_t flip_disc,
                                    std::vector<SignedPermutation> generators);

  int pairs() const { return pairs_; }
  const std::vector<SignedPermutation>& generators() const { return generators_; }
  std::uint64_t conductor() const { return conductor_; }
  /// D of a relative_flip action, 0 for abelian ones.
  std::int64_t flip_disc() const { return flip_disc_; }
  /// Order of the group generated by the generators.
  std::size_t group_order() const;
  SignedPermutation frobenius(std::uint64_t p, unsigned f = 1) const;

 private:
  int pairs_ = 0;
  std::vector<SignedPermutation> generators_;
  std::uint64_t conductor_ = 0;
  std::vector<std::pair<std::uint64_t, SignedPermutation>> residue_table_;
  std::int64_t flip_disc_ = 0;
};

enum class EndoKind { Rational, CmImagQuadratic, CmCyclic, CmGeneral, RmRealQuadratic };

struct EndoFieldDesc {
  EndoKind kind = EndoKind::Rational;
  std::string name = "Q";
  int degree = 1;  // [E:Q]
  std::int64_t delta = 0;  // CmImagQuadratic: E = Q(sqrt(-delta))
  std::optional<std::int64_t> quadratic_subfield;  // CmCyclic: D with (D/.) cutting out the quadratic subfield
  std::int64_t rm_disc = 0;  // RmRealQuadratic: E = Q(sqrt(rm_disc))
  std::shared_ptr<const GaloisAction> action;
  bool conjectural = false;

  bool is_cm() const {
    return kind == EndoKind::CmImagQuadratic || kind == EndoKind::CmCyclic || kind == EndoKind::CmGeneral;
  }
};

EndoFieldDesc imag_quadratic(std::int64_t delta);

/// A +-1 valued character of the absolute Galois group of the base field,
/// kept symbolic so it can be printed and evaluated at primes.
struct CharacterDesc {
  enum class Kind { Trivial, Kronecker, QuadraticSubfield, SignOfAction };
  Kind kind = Kind::Trivial;
  std::int64_t D = 1;  // Kronecker
  std::string description;
  std::shared_ptr<const GaloisAction> action;

  /// Value at a prime of residue degree f above p.
  int evaluate(std::uint64_t p, unsigned f = 1) const;
  std::string to_string() const;
};

class PredictorScopeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Jump character: trivial if (22 - rho)/[E:Q] is even, else the sign of
/// the Galois action on the conjugates, resolved to a Kronecker symbol or
/// to the trivial character when possible. CM fields only.
CharacterDesc jump_character_predict(const EndoFieldDesc& E, int rho);

struct ComponentOrder {
  std::uint64_t order = 1;
  bool exact = false;
  std::string flag() const { return exact ? "exact" : "lower-bound-divisor"; }
};

ComponentOrder component_group_order(const EndoFieldDesc& E, std::uint64_t kE_over_k_degree);

}  // namespace k3lab::monodromy
