#pragma once

#include "k3pic/field.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace k3pic {

enum class MonoOrder { GrevLex, Lex };

/// Exponent vector packed one byte per variable (at most 7 variables,
/// exponents below 128), plus a precomputed key whose unsigned order is the
/// monomial order.
struct Monomial {
  std::uint64_t exps = 0;
  std::uint64_t key = 0;

  int exp(int i) const { return static_cast<int>((exps >> (8 * i)) & 0xFF); }
  int degree() const {
    int d = 0;
    for (std::uint64_t e = exps; e; e >>= 8) d += static_cast<int>(e & 0xFF);
    return d;
  }
  bool is_one() const { return exps == 0; }
  bool operator==(const Monomial& o) const { return exps == o.exps; }
};

class MonoContext {
 public:
  MonoContext(int nvars, MonoOrder order) : n_(nvars), order_(order) {
    if (nvars < 1 || nvars > 7) throw UsageError("1..7 variables supported");
  }
  int nvars() const { return n_; }
  MonoOrder order() const { return order_; }

  Monomial make(const std::vector<int>& e) const {
    Monomial m;
    for (int i = 0; i < n_; ++i) {
      const int v = i < static_cast<int>(e.size()) ? e[static_cast<std::size_t>(i)] : 0;
      if (v < 0 || v > 127) throw UsageError("exponent out of range");
      m.exps |= static_cast<std::uint64_t>(v) << (8 * i);
    }
    m.key = key(m.exps);
    return m;
  }
  Monomial one() const { return make({}); }
  Monomial var(int i, int power = 1) const {
    std::vector<int> e(static_cast<std::size_t>(n_), 0);
    e[static_cast<std::size_t>(i)] = power;
    return make(e);
  }
  Monomial mul(const Monomial& a, const Monomial& b) const {
    Monomial m;
    m.exps = a.exps + b.exps;
    if ((m.exps & kHigh) != 0) throw UsageError("exponent overflow");
    m.key = key(m.exps);
    return m;
  }
  /// a | b
  static bool divides(const Monomial& a, const Monomial& b) { return (((b.exps | kHigh) - a.exps) & kHigh) == kHigh; }
  Monomial div(const Monomial& b, const Monomial& a) const {
    Monomial m;
    m.exps = b.exps - a.exps;
    m.key = key(m.exps);
    return m;
  }
  Monomial lcm(const Monomial& a, const Monomial& b) const {
    Monomial m;
    for (int i = 0; i < n_; ++i) m.exps |= static_cast<std::uint64_t>(std::max(a.exp(i), b.exp(i))) << (8 * i);
    m.key = key(m.exps);
    return m;
  }
  static bool coprime(const Monomial& a, const Monomial& b) {
    for (std::uint64_t x = a.exps, y = b.exps; x && y; x >>= 8, y >>= 8)
      if ((x & 0xFF) && (y & 0xFF)) return false;
    return true;
  }

 private:
  static constexpr std::uint64_t kHigh = 0x8080808080808080ULL;

  std::uint64_t key(std::uint64_t exps) const {
    std::uint64_t k = 0;
    if (order_ == MonoOrder::Lex) {
      for (int i = 0; i < n_; ++i) k = (k << 8) | ((exps >> (8 * i)) & 0xFF);
      return k << (8 * (8 - n_));
    }
    std::uint64_t deg = 0;
    for (int i = 0; i < n_; ++i) deg += (exps >> (8 * i)) & 0xFF;
    k = deg;
    for (int i = n_ - 1; i >= 0; --i) k = (k << 8) | (0xFF - ((exps >> (8 * i)) & 0xFF));
    return k << (8 * (7 - n_));
  }

  int n_;
  MonoOrder order_;
};

template <typename E>
struct Term {
  Monomial m;
  E c;
};

/// Sparse polynomial; terms strictly decreasing in the ring's monomial order.
template <typename E>
struct MPoly {
  std::vector<Term<E>> terms;
  bool is_zero() const { return terms.empty(); }
  const Term<E>& lead() const { return terms.front(); }
};

/// Polynomial ring F[x_0, ..., x_{n-1}] with a fixed monomial order.
template <FieldPolicy F>
class PolyRing {
 public:
  using E = typename F::value_type;
  using Poly = MPoly<E>;

  PolyRing(F field, int nvars, MonoOrder order = MonoOrder::GrevLex) : f_(std::move(field)), mc_(nvars, order) {}

  const F& field() const { return f_; }
  const MonoContext& mono() const { return mc_; }
  int nvars() const { return mc_.nvars(); }

  Poly zero() const { return {}; }
  Poly constant(const E& c) const {
    Poly p;
    if (!f_.is_zero(c)) p.terms.push_back({mc_.one(), c});
    return p;
  }
  Poly var(int i) const { return term(mc_.var(i), f_.one()); }
  Poly term(const Monomial& m, const E& c) const {
    Poly p;
    if (!f_.is_zero(c)) p.terms.push_back({m, c});
    return p;
  }
  /// Builds a polynomial from (exponents, coefficient) pairs in any order.
  Poly from_terms(const std::vector<std::pair<std::vector<int>, E>>& ts) const {
    Poly p;
    for (const auto& [e, c] : ts) p = add(p, term(mc_.make(e), c));
    return p;
  }

  Poly add(const Poly& a, const Poly& b) const { return combine(a, b, false); }
  Poly sub(const Poly& a, const Poly& b) const { return combine(a, b, true); }
  Poly neg(const Poly& a) const {
    Poly r = a;
    for (auto& t : r.terms) t.c = f_.neg(t.c);
    return r;
  }
  Poly scale(const Poly& a, const E& s) const {
    if (f_.is_zero(s)) return {};
    Poly r = a;
    for (auto& t : r.terms) t.c = f_.mul(t.c, s);
    return r;
  }
  Poly mul_term(const Poly& a, const Monomial& m, const E& c) const {
    Poly r;
    if (f_.is_zero(c)) return r;
    r.terms.reserve(a.terms.size());
    for (const auto& t : a.terms) r.terms.push_back({mc_.mul(t.m, m), f_.mul(t.c, c)});
    return r;
  }
  Poly mul(const Poly& a, const Poly& b) const {
    Poly r;
    for (const auto& t : b.terms) r = add(r, mul_term(a, t.m, t.c));
    return r;
  }
  Poly pow(const Poly& a, unsigned e) const {
    Poly r = constant(f_.one());
    for (unsigned i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }
  Poly monic(const Poly& a) const {
    if (a.is_zero()) return a;
    return scale(a, f_.inv(a.lead().c));
  }
  bool equal(const Poly& a, const Poly& b) const {
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
      if (!(a.terms[i].m == b.terms[i].m) || !f_.equal(a.terms[i].c, b.terms[i].c)) return false;
    return true;
  }
  int total_degree(const Poly& a) const {
    int d = -1;
    for (const auto& t : a.terms) d = std::max(d, t.m.degree());
    return d;
  }

  /// Full normal form of p modulo the list g (any divisor order).
  Poly reduce(Poly p, const std::vector<Poly>& g) const {
    Poly rem;
    while (!p.is_zero()) {
      const Term<E> lt = p.lead();
      bool divided = false;
      for (const auto& gi : g) {
        if (gi.is_zero() || !MonoContext::divides(gi.lead().m, lt.m)) continue;
        const E factor = f_.neg(f_.mul(lt.c, f_.inv(gi.lead().c)));
        p = add_scaled_tail(p, gi, mc_.div(lt.m, gi.lead().m), factor);
        divided = true;
        break;
      }
      if (!divided) {
        rem.terms.push_back(lt);
        p.terms.erase(p.terms.begin());
      }
    }
    return rem;
  }

  /// Replaces variable i by the polynomial s (all other variables unchanged).
  Poly substitute(const Poly& a, int i, const Poly& s) const {
    Poly r;
    std::vector<Poly> powers{constant(f_.one())};
    for (const auto& t : a.terms) {
      const int e = t.m.exp(i);
      while (static_cast<int>(powers.size()) <= e) powers.push_back(mul(powers.back(), s));
      const Monomial rest = mc_.div(t.m, mc_.var(i, e));
      r = add(r, mul_term(powers[static_cast<std::size_t>(e)], rest, t.c));
    }
    return r;
  }

  std::string format(const Poly& a, const std::vector<std::string>& names = {}) const {
    if (a.is_zero()) return "0";
    std::string s;
    for (const auto& t : a.terms) {
      if (!s.empty()) s += " + ";
      s += "(" + f_.format(t.c) + ")";
      for (int i = 0; i < nvars(); ++i) {
        const int e = t.m.exp(i);
        if (e == 0) continue;
        s += "*" + (i < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(i)] : "x" + std::to_string(i));
        if (e > 1) s += "^" + std::to_string(e);
      }
    }
    return s;
  }

 private:
  Poly combine(const Poly& a, const Poly& b, bool subtract) const {
    Poly r;
    r.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
      if (j >= b.terms.size() || (i < a.terms.size() && a.terms[i].m.key > b.terms[j].m.key)) {
        r.terms.push_back(a.terms[i++]);
      } else if (i >= a.terms.size() || b.terms[j].m.key > a.terms[i].m.key) {
        r.terms.push_back({b.terms[j].m, subtract ? f_.neg(b.terms[j].c) : b.terms[j].c});
        ++j;
      } else {
        E c = subtract ? f_.sub(a.terms[i].c, b.terms[j].c) : f_.add(a.terms[i].c, b.terms[j].c);
        if (!f_.is_zero(c)) r.terms.push_back({a.terms[i].m, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  // p + factor * m * g, where the leading terms are known to cancel.
  Poly add_scaled_tail(const Poly& p, const Poly& g, const Monomial& m, const E& factor) const {
    Poly r;
    r.terms.reserve(p.terms.size() + g.terms.size());
    std::size_t i = 1, j = 1;
    while (i < p.terms.size() || j < g.terms.size()) {
      if (j >= g.terms.size()) {
        r.terms.push_back(p.terms[i++]);
        continue;
      }
      const Monomial gm = mc_.mul(g.terms[j].m, m);
      if (i < p.terms.size() && p.terms[i].m.key > gm.key) {
        r.terms.push_back(p.terms[i++]);
      } else if (i >= p.terms.size() || gm.key > p.terms[i].m.key) {
        r.terms.push_back({gm, f_.mul(g.terms[j].c, factor)});
        ++j;
      } else {
        E c = f_.add(p.terms[i].c, f_.mul(g.terms[j].c, factor));
        if (!f_.is_zero(c)) r.terms.push_back({gm, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  F f_;
  MonoContext mc_;
};

}  // namespace k3pic
