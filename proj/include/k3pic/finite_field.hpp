#pragma once

#include "k3pic/field.hpp"
#include "k3pic/upoly.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace k3pic {

/// The finite field F_{p^m} = F_p[x]/(modulus).
///
/// Elements are encoded as integers a_0 + a_1 p + ... + a_{m-1} p^{m-1}
/// (the coefficient vector of the residue polynomial), so the encoding is
/// also the fixed total order used for deterministic root choices.
/// Multiplication goes through discrete-log tables when q is small enough.
class FiniteField {
 public:
  using value_type = std::uint32_t;

  /// Builds F_{p^m} with the smallest monic irreducible modulus, where
  /// polynomials are ordered by the integer code of their lower coefficients.
  static FiniteField make(std::uint64_t p, int m);
  /// Builds F_{p^m} over an explicitly given monic modulus (low to high).
  static FiniteField with_modulus(std::uint64_t p, std::vector<std::uint32_t> modulus);

  std::uint32_t characteristic() const { return p_; }
  int degree() const { return m_; }
  std::uint64_t order() const { return q_; }
  /// Monic modulus, coefficients low to high (degree m).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type add(value_type a, value_type b) const;
  value_type sub(value_type a, value_type b) const { return add(a, neg(b)); }
  value_type neg(value_type a) const;
  value_type mul(value_type a, value_type b) const;
  value_type inv(value_type a) const;
  value_type pow(value_type a, std::uint64_t e) const;
  bool is_zero(value_type a) const { return a == 0; }
  bool equal(value_type a, value_type b) const { return a == b; }

  value_type from_integer(const Integer& v) const;
  value_type from_int(std::int64_t v) const;
  /// Image of a rational; throws BadReduction if p divides the denominator.
  value_type from_rational(const Rational& v) const;
  /// The class of x in F_p[x]/(modulus) (the generator of the extension).
  value_type generator() const;
  /// Multiplicative order of a nonzero element.
  std::uint64_t element_order(value_type a) const;
  /// Digit vector of an element (length m).
  std::vector<std::uint32_t> digits(value_type a) const;
  value_type from_digits(const std::vector<std::uint32_t>& d) const;
  std::string format(value_type a) const;
  bool operator==(const FiniteField& o) const { return p_ == o.p_ && modulus_ == o.modulus_; }
  std::string describe() const;

 private:
  FiniteField() = default;
  value_type mul_slow(value_type a, value_type b) const;
  void build_tables();

  std::uint32_t p_ = 2;
  int m_ = 1;
  std::uint64_t q_ = 2;
  std::vector<std::uint32_t> modulus_;
  struct Tables {
    std::vector<std::uint32_t> exp;  // exp[i] = g^i, i < q-1
    std::vector<std::uint32_t> log;  // log[a] for a != 0
  };
  std::shared_ptr<const Tables> tables_;
};

static_assert(FieldPolicy<FiniteField>);

using FieldDesc = FiniteField;

/// Polynomial over F_{p^m}.
using FqPoly = UPoly<FiniteField::value_type>;

class BadReduction : public VerificationError {
 public:
  using VerificationError::VerificationError;
};

/// Irreducibility of a monic polynomial over the prime field F_p (Ben-Or).
bool is_irreducible_mod_p(std::uint64_t p, const std::vector<std::uint32_t>& monic_poly);

/// All roots of f in F_q with multiplicity, found by exhaustive scan.
std::vector<FiniteField::value_type> poly_roots(const FiniteField& f, const FqPoly& poly);

}  // namespace k3pic
