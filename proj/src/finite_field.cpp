#include "k3pic/finite_field.hpp"

#include <algorithm>
#include <sstream>

namespace k3pic {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % d == 0) return n == d;
  }
  if (n < (1ULL << 40)) {
    for (std::uint64_t d = 17; d * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  }
  Integer z(static_cast<unsigned long>(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

namespace {

constexpr std::uint64_t kTableLimit = 1ULL << 21;

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

FiniteField FiniteField::with_modulus(std::uint64_t p, std::vector<std::uint32_t> modulus) {
  if (!is_prime(p) || p > 0xFFFFFFFFULL) throw UsageError("not a prime: " + std::to_string(p));
  if (modulus.size() < 2 || modulus.back() != 1) throw UsageError("modulus must be monic of degree >= 1");
  FiniteField f;
  f.p_ = static_cast<std::uint32_t>(p);
  f.m_ = static_cast<int>(modulus.size()) - 1;
  std::uint64_t q = 1;
  for (int i = 0; i < f.m_; ++i) {
    if (q > 0xFFFFFFFFULL / p) throw UsageError("field too large (p^m must be < 2^32)");
    q *= p;
  }
  f.q_ = q;
  f.modulus_ = std::move(modulus);
  for (auto& c : f.modulus_) c %= f.p_;
  if (f.m_ > 1 && !is_irreducible_mod_p(p, f.modulus_)) throw UsageError("modulus is reducible");
  if (f.q_ <= kTableLimit) f.build_tables();
  return f;
}

FiniteField FiniteField::make(std::uint64_t p, int m) {
  if (!is_prime(p)) throw UsageError("NotPrime: " + std::to_string(p));
  if (m < 1) throw UsageError("extension degree must be positive");
  if (m == 1) return with_modulus(p, {0, 1});
  std::uint64_t count = 1;
  for (int i = 0; i < m; ++i) count *= p;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<std::uint32_t> poly(static_cast<std::size_t>(m) + 1, 0);
    std::uint64_t k = code;
    for (int i = 0; i < m; ++i) {
      poly[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(k % p);
      k /= p;
    }
    poly.back() = 1;
    if (poly[0] == 0) continue;  // divisible by x
    if (is_irreducible_mod_p(p, poly)) return with_modulus(p, poly);
  }
  throw std::logic_error("NoIrreducibleFound");
}

std::vector<std::uint32_t> FiniteField::digits(value_type a) const {
  std::vector<std::uint32_t> d(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    d[static_cast<std::size_t>(i)] = a % p_;
    a /= p_;
  }
  return d;
}

FiniteField::value_type FiniteField::from_digits(const std::vector<std::uint32_t>& d) const {
  std::uint64_t v = 0;
  for (int i = m_ - 1; i >= 0; --i) v = v * p_ + d[static_cast<std::size_t>(i)] % p_;
  return static_cast<value_type>(v);
}

FiniteField::value_type FiniteField::add(value_type a, value_type b) const {
  if (m_ == 1) {
    std::uint64_t s = std::uint64_t(a) + b;
    return static_cast<value_type>(s >= p_ ? s - p_ : s);
  }
  if (m_ == 2) {
    std::uint32_t a0 = a % p_, a1 = a / p_, b0 = b % p_, b1 = b / p_;
    std::uint32_t s0 = a0 + b0, s1 = a1 + b1;
    if (s0 >= p_) s0 -= p_;
    if (s1 >= p_) s1 -= p_;
    return s0 + s1 * p_;
  }
  std::uint64_t out = 0, scale = 1;
  for (int i = 0; i < m_; ++i) {
    std::uint32_t s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    out += s * scale;
    scale *= p_;
    a /= p_;
    b /= p_;
  }
  return static_cast<value_type>(out);
}

FiniteField::value_type FiniteField::neg(value_type a) const {
  if (m_ == 1) return a == 0 ? 0 : p_ - a;
  std::uint64_t out = 0, scale = 1;
  for (int i = 0; i < m_; ++i) {
    std::uint32_t d = a % p_;
    out += (d == 0 ? 0 : p_ - d) * scale;
    scale *= p_;
    a /= p_;
  }
  return static_cast<value_type>(out);
}

FiniteField::value_type FiniteField::mul_slow(value_type a, value_type b) const {
  if (m_ == 1) return static_cast<value_type>((std::uint64_t(a) * b) % p_);
  auto da = digits(a), db = digits(b);
  std::vector<std::uint64_t> prod(static_cast<std::size_t>(2 * m_ - 1), 0);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      prod[static_cast<std::size_t>(i + j)] =
          (prod[static_cast<std::size_t>(i + j)] + std::uint64_t(da[i]) * db[j]) % p_;
  for (int k = 2 * m_ - 2; k >= m_; --k) {
    const std::uint64_t c = prod[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    for (int j = 0; j < m_; ++j) {
      auto& slot = prod[static_cast<std::size_t>(k - m_ + j)];
      slot = (slot + (p_ - c) * modulus_[static_cast<std::size_t>(j)]) % p_;
    }
    prod[static_cast<std::size_t>(k)] = 0;
  }
  std::vector<std::uint32_t> out(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(prod[i]);
  return from_digits(out);
}

FiniteField::value_type FiniteField::mul(value_type a, value_type b) const {
  if (a == 0 || b == 0) return 0;
  if (m_ == 1) return static_cast<value_type>((std::uint64_t(a) * b) % p_);
  if (tables_) {
    std::uint64_t e = std::uint64_t(tables_->log[a]) + tables_->log[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return tables_->exp[e];
  }
  return mul_slow(a, b);
}

FiniteField::value_type FiniteField::pow(value_type a, std::uint64_t e) const {
  value_type result = 1;
  while (e > 0) {
    if (e & 1) result = mul(result, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return result;
}

FiniteField::value_type FiniteField::inv(value_type a) const {
  if (a == 0) throw std::domain_error("division by zero in F_q");
  if (tables_) {
    const std::uint64_t l = tables_->log[a];
    return tables_->exp[l == 0 ? 0 : q_ - 1 - l];
  }
  return pow(a, q_ - 2);
}

std::uint64_t FiniteField::element_order(value_type a) const {
  if (a == 0) throw std::domain_error("zero has no multiplicative order");
  std::uint64_t order = q_ - 1;
  for (auto r : prime_factors(q_ - 1)) {
    while (order % r == 0 && pow(a, order / r) == 1) order /= r;
  }
  return order;
}

void FiniteField::build_tables() {
  auto t = std::make_shared<Tables>();
  const auto factors = prime_factors(q_ - 1);
  value_type g = 0;
  for (std::uint64_t cand = 1; cand < q_; ++cand) {
    bool primitive = true;
    for (auto r : factors) {
      value_type acc = 1, base = static_cast<value_type>(cand);
      std::uint64_t e = (q_ - 1) / r;
      while (e > 0) {
        if (e & 1) acc = mul_slow(acc, base);
        e >>= 1;
        if (e) base = mul_slow(base, base);
      }
      if (acc == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      g = static_cast<value_type>(cand);
      break;
    }
  }
  t->exp.resize(q_ - 1);
  t->log.assign(q_, 0);
  value_type x = 1;
  for (std::uint64_t i = 0; i < q_ - 1; ++i) {
    t->exp[i] = x;
    t->log[x] = static_cast<std::uint32_t>(i);
    x = mul_slow(x, g);
  }
  tables_ = std::move(t);
}

FiniteField::value_type FiniteField::from_integer(const Integer& v) const {
  return static_cast<value_type>(mod_u64(v, p_));
}

FiniteField::value_type FiniteField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<value_type>(r);
}

FiniteField::value_type FiniteField::from_rational(const Rational& v) const {
  const auto den = from_integer(v.get_den());
  if (den == 0) throw BadReduction("denominator " + v.get_den().get_str() + " vanishes mod " + std::to_string(p_));
  return mul(from_integer(v.get_num()), inv(den));
}

FiniteField::value_type FiniteField::generator() const { return m_ == 1 ? 0 : p_; }

std::string FiniteField::format(value_type a) const {
  if (m_ == 1) return std::to_string(a);
  auto d = digits(a);
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < m_; ++i) os << (i ? "," : "") << d[static_cast<std::size_t>(i)];
  os << "]";
  return os.str();
}

std::string FiniteField::describe() const {
  std::ostringstream os;
  os << "F_" << p_ << (m_ > 1 ? "^" + std::to_string(m_) : "") << " mod [";
  for (std::size_t i = 0; i < modulus_.size(); ++i) os << (i ? "," : "") << modulus_[i];
  os << "]";
  return os.str();
}

bool is_irreducible_mod_p(std::uint64_t p, const std::vector<std::uint32_t>& monic_poly) {
  const int m = static_cast<int>(monic_poly.size()) - 1;
  if (m < 1) return false;
  if (m == 1) return true;
  const FiniteField fp = FiniteField::with_modulus(p, {0, 1});
  FqPoly f(std::vector<std::uint32_t>(monic_poly.begin(), monic_poly.end()));
  upoly::trim(fp, f);
  const FqPoly x({0, 1});
  // x^(p^i) mod f for i = 1..m
  std::vector<FqPoly> frob;
  FqPoly cur = x;
  for (int i = 1; i <= m; ++i) {
    cur = upoly::powmod(fp, cur, Integer(static_cast<unsigned long>(p)), f);
    frob.push_back(cur);
  }
  if (upoly::sub(fp, frob.back(), upoly::rem(fp, x, f)) != FqPoly{}) return false;
  for (auto r : prime_factors(static_cast<std::uint64_t>(m))) {
    const auto& xp = frob[static_cast<std::size_t>(m / static_cast<int>(r) - 1)];
    auto g = upoly::gcd(fp, upoly::sub(fp, xp, x), f);
    if (g.degree() != 0) return false;
  }
  return true;
}

std::vector<FiniteField::value_type> poly_roots(const FiniteField& f, const FqPoly& poly) {
  if (poly.is_zero()) throw UsageError("ZeroPolynomial");
  std::vector<FiniteField::value_type> roots;
  FqPoly rest = poly;
  for (std::uint64_t a = 0; a < f.order() && rest.degree() > 0; ++a) {
    const auto v = static_cast<FiniteField::value_type>(a);
    while (rest.degree() > 0 && upoly::eval(f, rest, v) == 0) {
      roots.push_back(v);
      rest = upoly::divmod(f, rest, FqPoly({f.neg(v), 1})).first;
    }
  }
  return roots;
}

}  // namespace k3pic
