#pragma once

#include "k3pic/finite_field.hpp"
#include "k3pic/upoly.hpp"

#include <string>

namespace k3pic {

/// Element of Q(t): num/den, coprime, den monic.
class RatFunc {
 public:
  RatFunc() : den_(qpoly_const(1)) {}
  RatFunc(const Rational& v) : num_(qpoly_const(v)), den_(qpoly_const(1)) {}  // NOLINT
  RatFunc(QPoly num) : num_(std::move(num)), den_(qpoly_const(1)) {}          // NOLINT
  RatFunc(QPoly num, QPoly den);

  static RatFunc t() { return RatFunc(qpoly_t()); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc inverse() const;
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

  /// Value at t = t0 in F_q; throws BadReduction if the denominator vanishes.
  FiniteField::value_type eval(const FiniteField& f, const Rational& t0) const;
  Rational eval(const Rational& t0) const;
  std::string format() const;

 private:
  QPoly num_;
  QPoly den_;
};

/// Monic gcd over Q[t]: a modular coprimality test first, then a primitive
/// pseudo-remainder sequence over Z.
QPoly qpoly_gcd(const QPoly& a, const QPoly& b);
/// Exact quotient a / b (b must divide a).
QPoly qpoly_exact_div(const QPoly& a, const QPoly& b);

/// Rational value of a Q-polynomial at a rational point.
Rational eval_qpoly(const QPoly& p, const Rational& x);
/// Value of a Q-polynomial at t0 in F_q.
FiniteField::value_type eval_qpoly(const FiniteField& f, const QPoly& p, FiniteField::value_type t0);

}  // namespace k3pic
