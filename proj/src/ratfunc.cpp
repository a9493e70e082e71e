#include "k3pic/ratfunc.hpp"

#include <sstream>

namespace k3pic {

namespace {

const RationalField kQ{};

using ZPoly = std::vector<Integer>;

// Primitive integer polynomial proportional to a nonzero rational one.
ZPoly primitive_part(const QPoly& a) {
  Integer l = 1;
  for (const auto& c : a.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  ZPoly z;
  z.reserve(a.c.size());
  Integer g = 0;
  for (const auto& c : a.c) {
    Integer v = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    z.push_back(std::move(v));
  }
  if (g != 1)
    for (auto& v : z) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  return z;
}

void make_primitive(ZPoly& z) {
  Integer g = 0;
  for (const auto& v : z) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& v : z) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

// Degree of gcd(a, b) mod p, or -1 if p divides a leading coefficient.
int modular_gcd_degree(const ZPoly& a, const ZPoly& b, std::uint64_t p) {
  if (mod_u64(a.back(), p) == 0 || mod_u64(b.back(), p) == 0) return -1;
  const FiniteField f = FiniteField::make(p, 1);
  auto reduce = [&](const ZPoly& z) {
    FqPoly r;
    for (const auto& v : z) r.c.push_back(static_cast<std::uint32_t>(mod_u64(v, p)));
    upoly::trim(f, r);
    return r;
  };
  return upoly::gcd(f, reduce(a), reduce(b)).degree();
}

}  // namespace

QPoly qpoly_gcd(const QPoly& a, const QPoly& b) {
  if (a.is_zero()) return upoly::monic(kQ, b);
  if (b.is_zero()) return upoly::monic(kQ, a);
  if (a.degree() == 0 || b.degree() == 0) return qpoly_const(1);
  ZPoly x = primitive_part(a), y = primitive_part(b);
  for (std::uint64_t p : {2147483647ULL, 2147483629ULL, 2147483587ULL}) {
    const int d = modular_gcd_degree(x, y, p);
    if (d == 0) return qpoly_const(1);
    if (d > 0) break;
  }
  if (x.size() < y.size()) std::swap(x, y);
  // primitive PRS
  while (!y.empty()) {
    ZPoly r = x;
    const Integer& ly = y.back();
    while (r.size() >= y.size()) {
      const Integer lr = r.back();
      const std::size_t shift = r.size() - y.size();
      for (auto& v : r) v *= ly;
      for (std::size_t j = 0; j < y.size(); ++j) r[j + shift] -= lr * y[j];
      r.pop_back();
      while (!r.empty() && sgn(r.back()) == 0) r.pop_back();
    }
    if (!r.empty()) make_primitive(r);
    x = std::move(y);
    y = std::move(r);
  }
  QPoly g;
  for (const auto& v : x) g.c.emplace_back(v);
  return upoly::monic(kQ, g);
}

QPoly qpoly_exact_div(const QPoly& a, const QPoly& b) { return upoly::divmod(kQ, a, b).first; }

std::string format_qpoly(const QPoly& p, const char* var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const Rational& c = p.c[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    Rational mag = abs(c);
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    const bool unit = (mag == 1);
    if (i == 0) {
      os << mag.get_str();
    } else {
      if (!unit) os << mag.get_str() << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

RatFunc::RatFunc(QPoly num, QPoly den) {
  if (den.is_zero()) throw std::domain_error("RatFunc with zero denominator");
  if (num.is_zero()) {
    den_ = qpoly_const(1);
    return;
  }
  if (den.degree() > 0) {
    QPoly g = qpoly_gcd(num, den);
    if (g.degree() > 0) {
      num = qpoly_exact_div(num, g);
      den = qpoly_exact_div(den, g);
    }
  }
  const Rational lc = den.lead();
  if (lc != 1) {
    const Rational s = 1 / lc;
    num = num * s;
    den = den * s;
  }
  num_ = std::move(num);
  den_ = std::move(den);
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (den_ == o.den_) {
    if (den_.degree() == 0) {
      RatFunc r;
      r.num_ = num_ + o.num_;
      return r;
    }
    return RatFunc(num_ + o.num_, den_);
  }
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (is_zero() || o.is_zero()) return RatFunc();
  if (den_.degree() == 0 && o.den_.degree() == 0) {
    RatFunc r;
    r.num_ = num_ * o.num_;
    return r;
  }
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero in Q(t)");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inverse(); }

Rational eval_qpoly(const QPoly& p, const Rational& x) { return upoly::eval(kQ, p, x); }

FiniteField::value_type eval_qpoly(const FiniteField& f, const QPoly& p, FiniteField::value_type t0) {
  FiniteField::value_type acc = 0;
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = f.add(f.mul(acc, t0), f.from_rational(*it));
  return acc;
}

FiniteField::value_type RatFunc::eval(const FiniteField& f, const Rational& t0) const {
  const auto x = f.from_rational(t0);
  const auto d = eval_qpoly(f, den_, x);
  if (d == 0) throw BadReduction("denominator " + format_qpoly(den_) + " vanishes at t0 mod p");
  return f.mul(eval_qpoly(f, num_, x), f.inv(d));
}

Rational RatFunc::eval(const Rational& t0) const {
  const Rational d = eval_qpoly(den_, t0);
  if (d == 0) throw std::domain_error("pole of rational function");
  return eval_qpoly(num_, t0) / d;
}

std::string RatFunc::format() const {
  if (den_.degree() == 0) return format_qpoly(num_);
  return "(" + format_qpoly(num_) + ")/(" + format_qpoly(den_) + ")";
}

}  // namespace k3pic
