#pragma once

#include "k3pic/ratfunc.hpp"

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace k3pic {

/// Exponent vector of a basis monomial zeta12^a beta0^b beta1^c beta2^d c0^e.
struct MonoExp {
  int a = 0, b = 0, c = 0, d = 0, e = 0;
};

constexpr int kSymDim = 96;

constexpr int mono_index(int a, int b, int c, int d, int e) { return (((a * 2 + b) * 2 + c) * 2 + d) * 3 + e; }
MonoExp mono_exp(int index);
std::string mono_name(int index);

enum class SymGen { Zeta12, Beta0, Beta1, Beta2, C0 };

/// Element of L = Q(t)(zeta12, beta0, beta1, beta2, c0) in normal form.
///
/// Relations: zeta12^4 = zeta12^2 - 1, beta_i^2 = t + 3 zeta3^i with
/// zeta3 = zeta12^4, c0^3 = -t c0^2 - 4.  Stored as a common monic
/// denominator in Q[t] together with 96 numerator polynomials; the
/// denominator is coprime to the gcd of the numerators.
class SymElem {
 public:
  SymElem();
  SymElem(const Rational& v);  // NOLINT
  SymElem(const RatFunc& v);   // NOLINT

  static SymElem gen(SymGen g);
  static SymElem t();
  static SymElem monomial(int index, const RatFunc& coeff = RatFunc(Rational(1)));

  bool is_zero() const;
  /// True iff the element lies in Q(t).
  bool is_scalar() const;
  /// True iff the element lies in Q.
  bool is_rational() const;
  RatFunc coeff(int index) const;
  const QPoly& num(int index) const { return num_[static_cast<std::size_t>(index)]; }
  const QPoly& den() const { return den_; }
  int support_size() const;

  SymElem operator+(const SymElem& o) const;
  SymElem operator-(const SymElem& o) const;
  SymElem operator-() const;
  SymElem operator*(const SymElem& o) const;
  SymElem operator*(const RatFunc& s) const;
  SymElem operator*(const Rational& s) const;
  SymElem& operator+=(const SymElem& o) { return *this = *this + o; }
  SymElem& operator-=(const SymElem& o) { return *this = *this - o; }
  SymElem& operator*=(const SymElem& o) { return *this = *this * o; }
  bool operator==(const SymElem& o) const { return den_ == o.den_ && num_ == o.num_; }
  bool operator!=(const SymElem& o) const { return !(*this == o); }

  SymElem pow(unsigned n) const;
  /// Multiplicative inverse via successive relative norms down the tower.
  SymElem inverse() const;
  SymElem operator/(const SymElem& o) const { return *this * o.inverse(); }

  /// Conjugations that flip the sign of one generator; each is a field automorphism.
  SymElem flip_beta(int i) const;
  SymElem flip_zeta() const;

  std::string format() const;
  /// Total order used for hashing/sorting; not meaningful mathematically.
  bool operator<(const SymElem& o) const;

 private:
  void normalize();
  QPoly den_;
  std::array<QPoly, kSymDim> num_;
};

/// Named derived elements of L.
namespace sym {
SymElem zeta(int n);  // zeta_n = zeta12^(12/n) for n | 12
SymElem beta(int i);
SymElem c(int j);     // roots c0, c1, c2 of h(x) = x^3 + t x^2 + 4
SymElem delta();      // 4 zeta4 beta0 beta1 beta2
SymElem eps();        // delta / (c0 (3 c0 + 2 t))
}  // namespace sym

/// Parses an expression in t, zeta3/4/6/12, beta0..2, c0..2, delta, eps
/// and rationals with + - * ^ and parentheses.  Division is accepted only by
/// elements of Q(t); anything else raises DivisionRequested.
SymElem sym_parse(const std::string& text);

class DivisionRequested : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Automorphism of L over Q(t), stored by generator images:
/// zeta12 -> zeta12^k, beta0 -> s0 beta0, (beta1, beta2) -> (s1 beta_{pi 1}, s2 beta_{pi 2})
/// with pi the swap exactly when zeta3 is inverted, c0 -> c_j.
struct GaloisSig {
  int k = 1;
  int s0 = 1, s1 = 1, s2 = 1;
  int j = 0;
  auto operator<=>(const GaloisSig&) const = default;
};

class GaloisAut {
 public:
  GaloisAut() : GaloisAut(GaloisSig{}) {}
  explicit GaloisAut(const GaloisSig& sig);

  /// tau1..tau5 of the standard generating set.
  static GaloisAut tau(int i);

  const GaloisSig& sig() const { return sig_; }
  SymElem apply(const SymElem& e) const;
  /// (this o other)(x) = this(other(x)).
  GaloisAut compose(const GaloisAut& other) const;
  GaloisAut inverse() const;
  bool operator==(const GaloisAut& o) const { return sig_ == o.sig_; }
  bool operator<(const GaloisAut& o) const { return sig_ < o.sig_; }
  std::string format() const;

 private:
  GaloisSig sig_;
  std::shared_ptr<const std::vector<SymElem>> images_;  // images of the 96 monomials
};

/// Image of the five generators (and t) in a finite field.
struct Embedding {
  FiniteField field;
  Rational t0;
  FiniteField::value_type t0_image = 0;
  FiniteField::value_type zeta12 = 0, beta0 = 0, beta1 = 0, beta2 = 0, c0 = 0;
  std::vector<FiniteField::value_type> mono;  // images of the 96 monomials

  std::string describe() const;
};

/// Builds the embedding over F_{p^m} with the smallest roots in encoding order.
/// Throws BadReduction when p is a bad prime for t0, UsageError if some
/// generator has no image in F_{p^m}.
Embedding make_embedding(const Rational& t0, std::uint64_t p, int m);
/// Smallest good prime p >= p_min with an embedding over F_p or F_{p^2}.
Embedding embedding_search(const Rational& t0, std::uint64_t p_min, std::uint64_t p_max = 100000);
/// Checks the defining relations on the generator images.
bool embedding_valid(const Embedding& emb);

FiniteField::value_type sym_embed(const SymElem& e, const Embedding& emb);

}  // namespace k3pic
