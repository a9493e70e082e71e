#include "k3pic/symelem.hpp"

#include <cctype>
#include <mutex>
#include <sstream>

namespace k3pic {

namespace {

const RationalField kQ{};

// Polynomial in zeta12 of degree < 4 with Q[t] coefficients.
using ZPoly = std::array<QPoly, 4>;

ZPoly zpoly_mul(const ZPoly& a, const ZPoly& b) {
  std::array<QPoly, 7> prod;
  for (int i = 0; i < 4; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < 4; ++j) {
      if (b[j].is_zero()) continue;
      prod[i + j] = prod[i + j] + a[i] * b[j];
    }
  }
  // zeta^k = zeta^(k-2) - zeta^(k-4)
  for (int k = 6; k >= 4; --k) {
    if (prod[k].is_zero()) continue;
    prod[k - 2] = prod[k - 2] + prod[k];
    prod[k - 4] = prod[k - 4] - prod[k];
    prod[k] = QPoly();
  }
  return {prod[0], prod[1], prod[2], prod[3]};
}

ZPoly zeta_power(int n) {
  ZPoly r;
  r[0] = qpoly_const(1);
  ZPoly z;
  z[1] = qpoly_const(1);
  for (int i = 0; i < n; ++i) r = zpoly_mul(r, z);
  return r;
}

// c0^n for n <= 4 in the basis 1, c0, c0^2.
std::array<QPoly, 3> c_power(int n) {
  const QPoly t = qpoly_t();
  switch (n) {
    case 0: return {qpoly_const(1), QPoly(), QPoly()};
    case 1: return {QPoly(), qpoly_const(1), QPoly()};
    case 2: return {QPoly(), QPoly(), qpoly_const(1)};
    case 3: return {qpoly_const(-4), QPoly(), -t};
    case 4: return {t * Rational(4), qpoly_const(-4), t * t};
    default: throw std::logic_error("c_power");
  }
}

using Table = std::vector<std::vector<std::pair<int, QPoly>>>;

Table build_table() {
  Table tab(static_cast<std::size_t>(kSymDim) * kSymDim);
  const QPoly t = qpoly_t();
  ZPoly beta1_sq, beta2_sq;
  beta1_sq[0] = t - qpoly_const(3);  // t + 3 zeta3, zeta3 = zeta^2 - 1
  beta1_sq[2] = qpoly_const(3);
  beta2_sq[0] = t;  // t + 3 zeta3^2, zeta3^2 = -zeta^2
  beta2_sq[2] = qpoly_const(-3);
  for (int i = 0; i < kSymDim; ++i) {
    const MonoExp x = mono_exp(i);
    for (int j = 0; j < kSymDim; ++j) {
      const MonoExp y = mono_exp(j);
      ZPoly z = zeta_power(x.a + y.a);
      int b = x.b + y.b, c = x.c + y.c, d = x.d + y.d;
      if (b == 2) {
        for (auto& q : z) q = q * (t + qpoly_const(3));
        b = 0;
      }
      if (c == 2) {
        z = zpoly_mul(z, beta1_sq);
        c = 0;
      }
      if (d == 2) {
        z = zpoly_mul(z, beta2_sq);
        d = 0;
      }
      const auto cp = c_power(x.e + y.e);
      auto& entry = tab[static_cast<std::size_t>(i) * kSymDim + j];
      for (int a = 0; a < 4; ++a) {
        if (z[a].is_zero()) continue;
        for (int e = 0; e < 3; ++e) {
          if (cp[e].is_zero()) continue;
          entry.emplace_back(mono_index(a, b, c, d, e), z[a] * cp[e]);
        }
      }
    }
  }
  return tab;
}

const Table& mul_table() {
  static const Table tab = build_table();
  return tab;
}

bool qpoly_less(const QPoly& a, const QPoly& b) {
  if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
  for (std::size_t i = 0; i < a.c.size(); ++i)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

}  // namespace

MonoExp mono_exp(int index) {
  MonoExp m;
  m.e = index % 3;
  index /= 3;
  m.d = index % 2;
  index /= 2;
  m.c = index % 2;
  index /= 2;
  m.b = index % 2;
  m.a = index / 2;
  return m;
}

std::string mono_name(int index) {
  const MonoExp m = mono_exp(index);
  std::string s;
  auto add = [&s](const std::string& f) { s += (s.empty() ? "" : "*") + f; };
  if (m.a == 1) add("zeta12");
  if (m.a > 1) add("zeta12^" + std::to_string(m.a));
  if (m.b) add("beta0");
  if (m.c) add("beta1");
  if (m.d) add("beta2");
  if (m.e == 1) add("c0");
  if (m.e == 2) add("c0^2");
  return s.empty() ? "1" : s;
}

SymElem::SymElem() : den_(qpoly_const(1)) {}

SymElem::SymElem(const Rational& v) : den_(qpoly_const(1)) { num_[0] = qpoly_const(v); }

SymElem::SymElem(const RatFunc& v) : den_(v.den()) { num_[0] = v.num(); }

SymElem SymElem::gen(SymGen g) {
  switch (g) {
    case SymGen::Zeta12: return monomial(mono_index(1, 0, 0, 0, 0));
    case SymGen::Beta0: return monomial(mono_index(0, 1, 0, 0, 0));
    case SymGen::Beta1: return monomial(mono_index(0, 0, 1, 0, 0));
    case SymGen::Beta2: return monomial(mono_index(0, 0, 0, 1, 0));
    case SymGen::C0: return monomial(mono_index(0, 0, 0, 0, 1));
  }
  throw std::logic_error("unknown generator");
}

SymElem SymElem::t() { return SymElem(RatFunc::t()); }

SymElem SymElem::monomial(int index, const RatFunc& coeff) {
  SymElem r;
  r.den_ = coeff.den();
  r.num_[static_cast<std::size_t>(index)] = coeff.num();
  if (coeff.is_zero()) r.den_ = qpoly_const(1);
  return r;
}

bool SymElem::is_zero() const {
  for (const auto& n : num_)
    if (!n.is_zero()) return false;
  return true;
}

bool SymElem::is_scalar() const {
  for (int i = 1; i < kSymDim; ++i)
    if (!num_[static_cast<std::size_t>(i)].is_zero()) return false;
  return true;
}

bool SymElem::is_rational() const { return is_scalar() && den_.degree() == 0 && num_[0].degree() <= 0; }

RatFunc SymElem::coeff(int index) const { return RatFunc(num_[static_cast<std::size_t>(index)], den_); }

int SymElem::support_size() const {
  int n = 0;
  for (const auto& p : num_) n += p.is_zero() ? 0 : 1;
  return n;
}

void SymElem::normalize() {
  bool zero = true;
  for (const auto& n : num_)
    if (!n.is_zero()) zero = false;
  if (zero) {
    den_ = qpoly_const(1);
    return;
  }
  if (den_.degree() > 0) {
    QPoly g = den_;
    for (const auto& n : num_) {
      if (n.is_zero()) continue;
      g = qpoly_gcd(g, n);
      if (g.degree() == 0) break;
    }
    if (g.degree() > 0) {
      den_ = qpoly_exact_div(den_, g);
      for (auto& n : num_)
        if (!n.is_zero()) n = qpoly_exact_div(n, g);
    }
  }
  const Rational lc = den_.lead();
  if (lc != 1) {
    const Rational s = 1 / lc;
    den_ = den_ * s;
    for (auto& n : num_) n = n * s;
  }
}

SymElem SymElem::operator+(const SymElem& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  SymElem r;
  if (den_ == o.den_) {
    r.den_ = den_;
    for (std::size_t i = 0; i < kSymDim; ++i) r.num_[i] = num_[i] + o.num_[i];
  } else {
    const QPoly g = qpoly_gcd(den_, o.den_);
    const QPoly f1 = qpoly_exact_div(o.den_, g);  // multiplies this
    const QPoly f2 = qpoly_exact_div(den_, g);    // multiplies o
    r.den_ = den_ * f1;
    for (std::size_t i = 0; i < kSymDim; ++i) r.num_[i] = num_[i] * f1 + o.num_[i] * f2;
  }
  r.normalize();
  return r;
}

SymElem SymElem::operator-() const {
  SymElem r = *this;
  for (auto& n : r.num_) n = -n;
  return r;
}

SymElem SymElem::operator-(const SymElem& o) const { return *this + (-o); }

SymElem SymElem::operator*(const SymElem& o) const {
  const Table& tab = mul_table();
  SymElem r;
  std::vector<int> lhs, rhs;
  for (int i = 0; i < kSymDim; ++i) {
    if (!num_[static_cast<std::size_t>(i)].is_zero()) lhs.push_back(i);
    if (!o.num_[static_cast<std::size_t>(i)].is_zero()) rhs.push_back(i);
  }
  if (lhs.empty() || rhs.empty()) return r;
  for (int i : lhs) {
    for (int j : rhs) {
      const QPoly prod = num_[static_cast<std::size_t>(i)] * o.num_[static_cast<std::size_t>(j)];
      for (const auto& [k, coeff] : tab[static_cast<std::size_t>(i) * kSymDim + j]) {
        auto& slot = r.num_[static_cast<std::size_t>(k)];
        slot = slot + (coeff.degree() == 0 ? prod * coeff.c[0] : prod * coeff);
      }
    }
  }
  r.den_ = den_ * o.den_;
  if (r.den_.degree() > 0) r.normalize();
  else if (r.is_zero()) r.den_ = qpoly_const(1);
  return r;
}

SymElem SymElem::operator*(const RatFunc& s) const { return *this * SymElem(s); }

SymElem SymElem::operator*(const Rational& s) const {
  if (s == 0) return SymElem();
  SymElem r = *this;
  for (auto& n : r.num_) n = n * s;
  return r;
}

SymElem SymElem::pow(unsigned n) const {
  SymElem result(Rational(1)), base = *this;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n) base = base * base;
  }
  return result;
}

SymElem SymElem::flip_beta(int i) const {
  SymElem r = *this;
  for (int k = 0; k < kSymDim; ++k) {
    const MonoExp m = mono_exp(k);
    const int bit = i == 0 ? m.b : i == 1 ? m.c : m.d;
    if (bit) r.num_[static_cast<std::size_t>(k)] = -r.num_[static_cast<std::size_t>(k)];
  }
  return r;
}

SymElem SymElem::flip_zeta() const {
  SymElem r = *this;
  for (int k = 0; k < kSymDim; ++k)
    if (mono_exp(k).a % 2 == 1) r.num_[static_cast<std::size_t>(k)] = -r.num_[static_cast<std::size_t>(k)];
  return r;
}

namespace {

bool has_term(const SymElem& x, bool (*pred)(const MonoExp&)) {
  for (int k = 0; k < kSymDim; ++k)
    if (!x.num(k).is_zero() && pred(mono_exp(k))) return true;
  return false;
}

// Coefficient of c0^e as an element with no c0 terms.
SymElem c_part(const SymElem& x, int e) {
  SymElem r;
  for (int k = 0; k < kSymDim; ++k) {
    const MonoExp m = mono_exp(k);
    if (m.e != e || x.num(k).is_zero()) continue;
    r += SymElem::monomial(mono_index(m.a, m.b, m.c, m.d, 0), x.coeff(k));
  }
  return r;
}

// x has denominator 1; returns (P, D) with x^-1 = P / D, P denominator 1.
std::pair<SymElem, QPoly> inverse_rec(const SymElem& x) {
  if (x.is_zero()) throw VerificationError("NotInvertible: zero element of L");
  if (x.is_scalar()) return {SymElem(Rational(1)), x.num(0)};
  if (has_term(x, [](const MonoExp& m) { return m.e > 0; })) {
    const SymElem c0 = SymElem::gen(SymGen::C0);
    SymElem m[3][3];
    SymElem col = x;
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) m[i][j] = c_part(col, i);
      col = col * c0;
    }
    const SymElem cof0 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const SymElem cof1 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    const SymElem cof2 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    const SymElem det = m[0][0] * cof0 + m[0][1] * cof1 + m[0][2] * cof2;
    auto [p, d] = inverse_rec(det);
    return {(cof0 + cof1 * c0 + cof2 * c0 * c0) * p, d};
  }
  for (int i = 2; i >= 0; --i) {
    bool present = false;
    for (int k = 0; k < kSymDim && !present; ++k) {
      const MonoExp m = mono_exp(k);
      const int bit = i == 0 ? m.b : i == 1 ? m.c : m.d;
      present = bit && !x.num(k).is_zero();
    }
    if (present) {
      const SymElem y = x.flip_beta(i);
      auto [p, d] = inverse_rec(x * y);
      return {y * p, d};
    }
  }
  if (has_term(x, [](const MonoExp& m) { return m.a % 2 == 1; })) {
    const SymElem y = x.flip_zeta();
    auto [p, d] = inverse_rec(x * y);
    return {y * p, d};
  }
  // x = u + v zeta6 with zeta6 = zeta12^2; the norm is u^2 + uv + v^2
  const QPoly& u = x.num(0);
  const QPoly& v = x.num(mono_index(2, 0, 0, 0, 0));
  const QPoly norm = u * u + u * v + v * v;
  SymElem conj = SymElem(RatFunc(u + v)) - SymElem::monomial(mono_index(2, 0, 0, 0, 0), RatFunc(v));
  return {conj, norm};
}

}  // namespace

SymElem SymElem::inverse() const {
  SymElem numer = *this;
  numer.den_ = qpoly_const(1);
  auto [p, d] = inverse_rec(numer);
  // this^-1 = den * p / d
  SymElem r = p;
  for (auto& n : r.num_) n = n * den_;
  r.den_ = d;
  r.normalize();
  if (*this * r != SymElem(Rational(1))) throw VerificationError("NotInvertible: inverse check failed");
  return r;
}

std::string SymElem::format() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < kSymDim; ++k) {
    const auto& n = num_[static_cast<std::size_t>(k)];
    if (n.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << format_qpoly(n) << ")";
    if (k != 0) os << "*" << mono_name(k);
  }
  if (den_.degree() == 0) return os.str();
  return "(" + os.str() + ")/(" + format_qpoly(den_) + ")";
}

bool SymElem::operator<(const SymElem& o) const {
  if (den_ != o.den_) return qpoly_less(den_, o.den_);
  for (std::size_t i = 0; i < kSymDim; ++i)
    if (num_[i] != o.num_[i]) return qpoly_less(num_[i], o.num_[i]);
  return false;
}

namespace sym {

SymElem zeta(int n) {
  if (n <= 0 || 12 % n != 0) throw UsageError("zeta_n needs n | 12");
  return SymElem::gen(SymGen::Zeta12).pow(static_cast<unsigned>(12 / n));
}

SymElem beta(int i) {
  if (i < 0 || i > 2) throw UsageError("beta index out of range");
  return SymElem::gen(i == 0 ? SymGen::Beta0 : i == 1 ? SymGen::Beta1 : SymGen::Beta2);
}

SymElem delta() {
  return zeta(4) * beta(0) * beta(1) * beta(2) * Rational(4);
}

SymElem eps() {
  static const SymElem value = [] {
    const SymElem c0 = SymElem::gen(SymGen::C0);
    return delta() * (c0 * (c0 * Rational(3) + SymElem::t() * Rational(2))).inverse();
  }();
  return value;
}

SymElem c(int j) {
  static const std::array<SymElem, 3> roots = [] {
    const SymElem c0 = SymElem::gen(SymGen::C0);
    const SymElem base = (-SymElem::t() - c0) * Rational(1, 2);
    const SymElem half_eps = eps() * Rational(1, 2);
    return std::array<SymElem, 3>{c0, base + half_eps, base - half_eps};
  }();
  if (j < 0 || j > 2) throw UsageError("c index out of range");
  return roots[static_cast<std::size_t>(j)];
}

}  // namespace sym

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  SymElem parse() {
    SymElem r = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw UsageError("parse error at " + std::to_string(pos_) + ": " + msg);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  SymElem expr() {
    SymElem r = term();
    for (;;) {
      if (eat('+')) r = r + term();
      else if (eat('-')) r = r - term();
      else return r;
    }
  }
  SymElem term() {
    SymElem r = unary();
    for (;;) {
      if (eat('*')) {
        r = r * unary();
      } else if (eat('/')) {
        const SymElem d = unary();
        if (!d.is_scalar()) throw DivisionRequested("DivisionRequested: divisor is not in Q(t)");
        if (d.is_zero()) fail("division by zero");
        r = r * d.coeff(0).inverse();
      } else {
        return r;
      }
    }
  }
  SymElem unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  SymElem power() {
    SymElem base = atom();
    if (eat('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
    }
    return base;
  }
  SymElem atom() {
    skip_ws();
    if (eat('(')) {
      SymElem r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return SymElem(Rational(Integer(s_.substr(start, pos_ - start))));
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (id.empty()) fail("expected operand");
    if (id == "t") return SymElem::t();
    if (id == "zeta12") return sym::zeta(12);
    if (id == "zeta6") return sym::zeta(6);
    if (id == "zeta4") return sym::zeta(4);
    if (id == "zeta3") return sym::zeta(3);
    if (id == "beta0") return sym::beta(0);
    if (id == "beta1") return sym::beta(1);
    if (id == "beta2") return sym::beta(2);
    if (id == "c0") return sym::c(0);
    if (id == "c1") return sym::c(1);
    if (id == "c2") return sym::c(2);
    if (id == "delta") return sym::delta();
    if (id == "eps" || id == "epsilon") return sym::eps();
    fail("unknown symbol '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

SymElem sym_parse(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Galois automorphisms

namespace {

bool swaps_beta(int k) { return k % 3 == 2; }

std::shared_ptr<const std::vector<SymElem>> monomial_images(const GaloisSig& s) {
  static std::map<GaloisSig, std::shared_ptr<const std::vector<SymElem>>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
  }
  const SymElem z = SymElem::gen(SymGen::Zeta12).pow(static_cast<unsigned>(s.k));
  const SymElem b0 = sym::beta(0) * Rational(s.s0);
  const SymElem b1 = sym::beta(swaps_beta(s.k) ? 2 : 1) * Rational(s.s1);
  const SymElem b2 = sym::beta(swaps_beta(s.k) ? 1 : 2) * Rational(s.s2);
  const SymElem cj = sym::c(s.j);
  std::array<SymElem, 4> zp{SymElem(Rational(1)), z, z * z, z * z * z};
  std::array<SymElem, 3> cp{SymElem(Rational(1)), cj, cj * cj};
  auto images = std::make_shared<std::vector<SymElem>>(kSymDim);
  for (int idx = 0; idx < kSymDim; ++idx) {
    const MonoExp m = mono_exp(idx);
    SymElem v = zp[static_cast<std::size_t>(m.a)];
    if (m.b) v = v * b0;
    if (m.c) v = v * b1;
    if (m.d) v = v * b2;
    if (m.e) v = v * cp[static_cast<std::size_t>(m.e)];
    (*images)[static_cast<std::size_t>(idx)] = v;
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(s, images);
  return images;
}

}  // namespace

GaloisAut::GaloisAut(const GaloisSig& sig) : sig_(sig) {
  if (sig.k != 1 && sig.k != 5 && sig.k != 7 && sig.k != 11) throw UsageError("zeta exponent must be a unit mod 12");
  for (int s : {sig.s0, sig.s1, sig.s2})
    if (s != 1 && s != -1) throw UsageError("beta signs must be +-1");
  if (sig.j < 0 || sig.j > 2) throw UsageError("c index out of range");
  images_ = monomial_images(sig);
}

GaloisAut GaloisAut::tau(int i) {
  GaloisSig s;
  switch (i) {
    case 1: s.k = 7; break;
    case 2: s.j = 1; break;
    case 3: s.k = 7; s.s0 = -1; break;
    case 4: s.k = 11; s.s1 = -1; break;
    case 5: s.k = 7; s.s2 = -1; break;
    default: throw UsageError("tau index must be 1..5");
  }
  return GaloisAut(s);
}

SymElem GaloisAut::apply(const SymElem& e) const {
  SymElem r;
  for (int k = 0; k < kSymDim; ++k) {
    if (e.num(k).is_zero()) continue;
    r += (*images_)[static_cast<std::size_t>(k)] * e.coeff(k);
  }
  return r;
}

GaloisAut GaloisAut::compose(const GaloisAut& other) const {
  GaloisSig r;
  const GaloisSig& a = sig_;
  const GaloisSig& b = other.sig_;
  r.k = (a.k * b.k) % 12;
  r.s0 = a.s0 * b.s0;
  // other sends beta1 to s1' beta_{pi'(1)}; then this acts on beta_{pi'(1)}
  const bool swap_b = swaps_beta(b.k);
  const int a_sign_of[3] = {a.s0, a.s1, a.s2};
  r.s1 = b.s1 * a_sign_of[swap_b ? 2 : 1];
  r.s2 = b.s2 * a_sign_of[swap_b ? 1 : 2];
  const SymElem img = apply(sym::c(b.j));
  r.j = -1;
  for (int j = 0; j < 3; ++j)
    if (img == sym::c(j)) r.j = j;
  if (r.j < 0) throw VerificationError("image of c0 is not a root of h");
  return GaloisAut(r);
}

GaloisAut GaloisAut::inverse() const {
  GaloisAut prev, cur = *this;
  while (!(cur == GaloisAut())) {
    prev = cur;
    cur = compose(cur);
  }
  // cur = this^n = id, prev = this^(n-1) unless this is the identity
  return *this == GaloisAut() ? GaloisAut() : prev;
}

std::string GaloisAut::format() const {
  std::ostringstream os;
  os << "zeta12->zeta12^" << sig_.k << ", beta0->" << (sig_.s0 < 0 ? "-" : "") << "beta0, beta1->"
     << (sig_.s1 < 0 ? "-" : "") << (swaps_beta(sig_.k) ? "beta2" : "beta1") << ", beta2->"
     << (sig_.s2 < 0 ? "-" : "") << (swaps_beta(sig_.k) ? "beta1" : "beta2") << ", c0->c" << sig_.j;
  return os.str();
}

// ---------------------------------------------------------------------------
// embeddings

std::string Embedding::describe() const {
  std::ostringstream os;
  os << field.describe() << ", t0=" << t0.get_str() << ", zeta12=" << field.format(zeta12)
     << ", beta0=" << field.format(beta0) << ", beta1=" << field.format(beta1) << ", beta2=" << field.format(beta2)
     << ", c0=" << field.format(c0);
  return os.str();
}

namespace {

FiniteField::value_type smallest_root(const FiniteField& f, const FqPoly& poly, const char* what) {
  const auto roots = poly_roots(f, poly);
  if (roots.empty()) throw UsageError(std::string("no image of ") + what + " in " + f.describe());
  return *std::min_element(roots.begin(), roots.end());
}

void check_prime_for(const Rational& t0, std::uint64_t p) {
  if (p == 2 || p == 3) throw BadReduction("primes 2 and 3 are always excluded");
  if (mod_u64(t0.get_den(), p) == 0) throw BadReduction("p divides the denominator of t0");
  const Rational s = t0 * t0 * t0 + 27;
  if (s == 0) throw UsageError("SingularFiber: t0^3 = -27");
  if (mod_u64(s.get_num(), p) == 0) throw BadReduction("p divides t0^3 + 27");
}

}  // namespace

Embedding make_embedding(const Rational& t0, std::uint64_t p, int m) {
  check_prime_for(t0, p);
  Embedding emb{FiniteField::make(p, m), t0, 0, 0, 0, 0, 0, 0, {}};
  const FiniteField& f = emb.field;
  emb.t0_image = f.from_rational(t0);
  emb.zeta12 = smallest_root(f, FqPoly({1, 0, f.neg(1), 0, 1}), "zeta12");
  const auto zeta3 = f.pow(emb.zeta12, 4);
  FiniteField::value_type* betas[3] = {&emb.beta0, &emb.beta1, &emb.beta2};
  for (int i = 0; i < 3; ++i) {
    const auto target = f.add(emb.t0_image, f.mul(f.from_int(3), f.pow(zeta3, static_cast<std::uint64_t>(i))));
    *betas[i] = smallest_root(f, FqPoly({f.neg(target), 0, 1}), "beta");
  }
  emb.c0 = smallest_root(f, FqPoly({f.from_int(4), 0, emb.t0_image, 1}), "c0");
  emb.mono.resize(kSymDim);
  for (int idx = 0; idx < kSymDim; ++idx) {
    const MonoExp e = mono_exp(idx);
    auto v = f.pow(emb.zeta12, static_cast<std::uint64_t>(e.a));
    if (e.b) v = f.mul(v, emb.beta0);
    if (e.c) v = f.mul(v, emb.beta1);
    if (e.d) v = f.mul(v, emb.beta2);
    v = f.mul(v, f.pow(emb.c0, static_cast<std::uint64_t>(e.e)));
    emb.mono[static_cast<std::size_t>(idx)] = v;
  }
  return emb;
}

Embedding embedding_search(const Rational& t0, std::uint64_t p_min, std::uint64_t p_max) {
  if (t0 * t0 * t0 == -27) throw UsageError("SingularFiber: t0^3 = -27");
  for (std::uint64_t p = std::max<std::uint64_t>(p_min, 5); p <= p_max; ++p) {
    if (!is_prime(p)) continue;
    for (int m = 1; m <= 2; ++m) {
      try {
        return make_embedding(t0, p, m);
      } catch (const BadReduction&) {
        break;
      } catch (const UsageError&) {
        continue;
      }
    }
  }
  throw UsageError("NoPrimeFound below " + std::to_string(p_max));
}

bool embedding_valid(const Embedding& emb) {
  const FiniteField& f = emb.field;
  if (f.element_order(emb.zeta12) != 12) return false;
  const auto zeta3 = f.pow(emb.zeta12, 4);
  const FiniteField::value_type betas[3] = {emb.beta0, emb.beta1, emb.beta2};
  for (int i = 0; i < 3; ++i) {
    const auto target = f.add(emb.t0_image, f.mul(f.from_int(3), f.pow(zeta3, static_cast<std::uint64_t>(i))));
    if (f.mul(betas[i], betas[i]) != target) return false;
  }
  const auto c = emb.c0;
  const auto h = f.add(f.add(f.pow(c, 3), f.mul(emb.t0_image, f.mul(c, c))), f.from_int(4));
  return h == 0 && emb.t0_image == f.from_rational(emb.t0);
}

FiniteField::value_type sym_embed(const SymElem& e, const Embedding& emb) {
  const FiniteField& f = emb.field;
  const auto den = eval_qpoly(f, e.den(), emb.t0_image);
  if (den == 0) throw BadReduction("denominator " + format_qpoly(e.den()) + " vanishes at t0 mod p");
  FiniteField::value_type acc = 0;
  for (int k = 0; k < kSymDim; ++k) {
    const QPoly& n = e.num(k);
    if (n.is_zero()) continue;
    acc = f.add(acc, f.mul(eval_qpoly(f, n, emb.t0_image), emb.mono[static_cast<std::size_t>(k)]));
  }
  return f.mul(acc, f.inv(den));
}

}  // namespace k3pic
