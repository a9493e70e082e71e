#pragma once

#include "k3pic/field.hpp"

#include <utility>
#include <vector>

namespace k3pic {

/// Dense univariate polynomial, coefficients from low to high degree.
/// The zero polynomial has no coefficients; the top coefficient is nonzero.
template <typename Elem>
struct UPoly {
  std::vector<Elem> c;

  UPoly() = default;
  explicit UPoly(std::vector<Elem> coeffs) : c(std::move(coeffs)) {}

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Elem& lead() const { return c.back(); }
  bool operator==(const UPoly&) const = default;
};

namespace upoly {

template <FieldPolicy F>
void trim(const F& f, UPoly<typename F::value_type>& p) {
  while (!p.c.empty() && f.is_zero(p.c.back())) p.c.pop_back();
}

template <FieldPolicy F>
UPoly<typename F::value_type> constant(const F& f, const typename F::value_type& v) {
  UPoly<typename F::value_type> p;
  if (!f.is_zero(v)) p.c.push_back(v);
  return p;
}

/// x^n scaled by v.
template <FieldPolicy F>
UPoly<typename F::value_type> monomial(const F& f, const typename F::value_type& v, int n) {
  UPoly<typename F::value_type> p;
  if (f.is_zero(v)) return p;
  p.c.assign(static_cast<std::size_t>(n) + 1, f.zero());
  p.c.back() = v;
  return p;
}

template <FieldPolicy F>
UPoly<typename F::value_type> add(const F& f, const UPoly<typename F::value_type>& a,
                                  const UPoly<typename F::value_type>& b) {
  UPoly<typename F::value_type> r;
  const std::size_t n = std::max(a.c.size(), b.c.size());
  r.c.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= a.c.size())
      r.c.push_back(b.c[i]);
    else if (i >= b.c.size())
      r.c.push_back(a.c[i]);
    else
      r.c.push_back(f.add(a.c[i], b.c[i]));
  }
  trim(f, r);
  return r;
}

template <FieldPolicy F>
UPoly<typename F::value_type> neg(const F& f, const UPoly<typename F::value_type>& a) {
  UPoly<typename F::value_type> r = a;
  for (auto& v : r.c) v = f.neg(v);
  return r;
}

template <FieldPolicy F>
UPoly<typename F::value_type> sub(const F& f, const UPoly<typename F::value_type>& a,
                                  const UPoly<typename F::value_type>& b) {
  return add(f, a, neg(f, b));
}

template <FieldPolicy F>
UPoly<typename F::value_type> scale(const F& f, const UPoly<typename F::value_type>& a,
                                    const typename F::value_type& s) {
  if (f.is_zero(s)) return {};
  UPoly<typename F::value_type> r = a;
  for (auto& v : r.c) v = f.mul(v, s);
  trim(f, r);
  return r;
}

template <FieldPolicy F>
UPoly<typename F::value_type> mul(const F& f, const UPoly<typename F::value_type>& a,
                                  const UPoly<typename F::value_type>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  UPoly<typename F::value_type> r;
  r.c.assign(a.c.size() + b.c.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (f.is_zero(a.c[i])) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = f.add(r.c[i + j], f.mul(a.c[i], b.c[j]));
  }
  trim(f, r);
  return r;
}

/// Euclidean division: a = quot * b + rem with deg rem < deg b.
template <FieldPolicy F>
std::pair<UPoly<typename F::value_type>, UPoly<typename F::value_type>> divmod(
    const F& f, const UPoly<typename F::value_type>& a, const UPoly<typename F::value_type>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  UPoly<typename F::value_type> rem = a;
  UPoly<typename F::value_type> quot;
  if (a.degree() < b.degree()) return {quot, rem};
  quot.c.assign(static_cast<std::size_t>(a.degree() - b.degree()) + 1, f.zero());
  const auto lead_inv = f.inv(b.lead());
  while (!rem.is_zero() && rem.degree() >= b.degree()) {
    const int shift = rem.degree() - b.degree();
    const auto factor = f.mul(rem.lead(), lead_inv);
    quot.c[static_cast<std::size_t>(shift)] = factor;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      auto& slot = rem.c[j + static_cast<std::size_t>(shift)];
      slot = f.sub(slot, f.mul(factor, b.c[j]));
    }
    // the top coefficient cancels exactly; drop it even if the field
    // representation would not compare it to zero
    rem.c.pop_back();
    trim(f, rem);
  }
  trim(f, quot);
  return {quot, rem};
}

template <FieldPolicy F>
UPoly<typename F::value_type> rem(const F& f, const UPoly<typename F::value_type>& a,
                                  const UPoly<typename F::value_type>& b) {
  return divmod(f, a, b).second;
}

template <FieldPolicy F>
UPoly<typename F::value_type> monic(const F& f, const UPoly<typename F::value_type>& a) {
  if (a.is_zero()) return a;
  return scale(f, a, f.inv(a.lead()));
}

/// Monic greatest common divisor (zero only when both inputs are zero).
template <FieldPolicy F>
UPoly<typename F::value_type> gcd(const F& f, UPoly<typename F::value_type> a,
                                  UPoly<typename F::value_type> b) {
  while (!b.is_zero()) {
    auto r = rem(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(f, a);
}

template <FieldPolicy F>
UPoly<typename F::value_type> derivative(const F& f, const UPoly<typename F::value_type>& a) {
  UPoly<typename F::value_type> r;
  if (a.c.size() <= 1) return r;
  r.c.reserve(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i) {
    auto k = f.zero();
    for (std::size_t j = 0; j < i; ++j) k = f.add(k, a.c[i]);
    r.c.push_back(k);
  }
  trim(f, r);
  return r;
}

template <FieldPolicy F>
typename F::value_type eval(const F& f, const UPoly<typename F::value_type>& a,
                            const typename F::value_type& x) {
  auto acc = f.zero();
  for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = f.add(f.mul(acc, x), *it);
  return acc;
}

/// (a^e) mod m, by square-and-multiply.
template <FieldPolicy F>
UPoly<typename F::value_type> powmod(const F& f, UPoly<typename F::value_type> a, Integer e,
                                     const UPoly<typename F::value_type>& m) {
  UPoly<typename F::value_type> result = constant(f, f.one());
  a = rem(f, a, m);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = rem(f, mul(f, result, a), m);
    e >>= 1;
    if (e > 0) a = rem(f, mul(f, a, a), m);
  }
  return result;
}

}  // namespace upoly

using QPoly = UPoly<Rational>;

inline QPoly operator+(const QPoly& a, const QPoly& b) { return upoly::add(RationalField{}, a, b); }
inline QPoly operator-(const QPoly& a, const QPoly& b) { return upoly::sub(RationalField{}, a, b); }
inline QPoly operator-(const QPoly& a) { return upoly::neg(RationalField{}, a); }
inline QPoly operator*(const QPoly& a, const QPoly& b) { return upoly::mul(RationalField{}, a, b); }
inline QPoly operator*(const QPoly& a, const Rational& s) { return upoly::scale(RationalField{}, a, s); }

/// The polynomial t (the family parameter) in Q[t].
inline QPoly qpoly_t() { return QPoly({Rational(0), Rational(1)}); }
inline QPoly qpoly_const(const Rational& v) { return upoly::constant(RationalField{}, v); }

std::string format_qpoly(const QPoly& p, const char* var = "t");

}  // namespace k3pic
