#pragma once

#include "k3pic/integer.hpp"

#include <concepts>

namespace k3pic {

/// Coefficient-field policy: a (possibly stateful) object doing arithmetic
/// on its value_type. Polynomial and Gröbner code is written against this.
template <typename F>
concept FieldPolicy = requires(const F& f, const typename F::value_type& a) {
  { f.zero() } -> std::convertible_to<typename F::value_type>;
  { f.one() } -> std::convertible_to<typename F::value_type>;
  { f.add(a, a) } -> std::convertible_to<typename F::value_type>;
  { f.sub(a, a) } -> std::convertible_to<typename F::value_type>;
  { f.mul(a, a) } -> std::convertible_to<typename F::value_type>;
  { f.neg(a) } -> std::convertible_to<typename F::value_type>;
  { f.inv(a) } -> std::convertible_to<typename F::value_type>;
  { f.is_zero(a) } -> std::convertible_to<bool>;
  { f.equal(a, a) } -> std::convertible_to<bool>;
};

struct RationalField {
  using value_type = Rational;
  Rational zero() const { return Rational(0); }
  Rational one() const { return Rational(1); }
  Rational add(const Rational& a, const Rational& b) const { return a + b; }
  Rational sub(const Rational& a, const Rational& b) const { return a - b; }
  Rational mul(const Rational& a, const Rational& b) const { return a * b; }
  Rational neg(const Rational& a) const { return -a; }
  Rational inv(const Rational& a) const {
    if (a == 0) throw std::domain_error("division by zero in Q");
    return 1 / a;
  }
  bool is_zero(const Rational& a) const { return sgn(a) == 0; }
  bool equal(const Rational& a, const Rational& b) const { return a == b; }
  Rational from_integer(const Integer& v) const { return Rational(v); }
  std::string format(const Rational& a) const { return a.get_str(); }
};

}  // namespace k3pic
