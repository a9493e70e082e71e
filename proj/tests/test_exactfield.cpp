#include "k3pic/symelem.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace k3pic;

namespace {

// Plain integer evaluation of a polynomial mod p, independent of FiniteField.
std::uint64_t eval_mod(const std::vector<std::int64_t>& coeffs, std::uint64_t x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    std::int64_t c = *it % static_cast<std::int64_t>(p);
    if (c < 0) c += static_cast<std::int64_t>(p);
    acc = (acc * x + static_cast<std::uint64_t>(c)) % p;
  }
  return acc;
}

SymElem random_elem(std::mt19937_64& rng, int terms) {
  std::uniform_int_distribution<int> idx(0, kSymDim - 1), coef(-3, 3), deg(0, 1);
  SymElem r;
  for (int i = 0; i < terms; ++i) {
    QPoly c;
    for (int d = 0; d <= deg(rng); ++d) c = c + upoly::monomial(RationalField{}, Rational(coef(rng)), d);
    r += SymElem::monomial(idx(rng), RatFunc(c));
  }
  return r;
}

}  // namespace

TEST_CASE("finite field construction") {
  const auto f79 = FiniteField::make(79, 1);
  CHECK(f79.order() == 79);
  const auto f79sq = FiniteField::make(79, 2);
  CHECK(f79sq.order() == 6241);
  CHECK(f79sq.degree() == 2);

  const auto f8 = FiniteField::make(2, 3);
  CHECK(f8.order() == 8);
  const auto& mod = f8.modulus();
  REQUIRE(mod.size() == 4);
  // exhaustive root check: a cubic without roots over F_2 is irreducible
  for (std::uint64_t x = 0; x < 2; ++x)
    CHECK(eval_mod({mod[0], mod[1], mod[2], mod[3]}, x, 2) != 0);
  // smallest in lexicographic order: x^3 + x + 1
  CHECK(mod == std::vector<std::uint32_t>{1, 1, 0, 1});

  CHECK_THROWS_AS(FiniteField::make(91, 1), UsageError);
}

TEST_CASE("finite field axioms on F_{79^2}") {
  const auto f = FiniteField::make(79, 2);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint32_t> pick(0, 6240);
  for (int i = 0; i < 200; ++i) {
    const auto a = pick(rng), b = pick(rng), c = pick(rng);
    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
    CHECK(f.add(a, f.neg(a)) == 0);
    if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
    CHECK(f.mul(a, b) == f.mul(b, a));
  }
  // Frobenius is additive
  for (int i = 0; i < 50; ++i) {
    const auto a = pick(rng), b = pick(rng);
    CHECK(f.pow(f.add(a, b), 79) == f.add(f.pow(a, 79), f.pow(b, 79)));
  }
}

TEST_CASE("poly_roots") {
  const auto f = FiniteField::make(79, 1);
  auto r = poly_roots(f, FqPoly({78, 0, 1}));
  std::sort(r.begin(), r.end());
  CHECK(r == std::vector<std::uint32_t>{1, 78});

  // brute-force oracle for x^3 + 7x^2 + 4 over F_79
  std::vector<std::uint32_t> oracle;
  for (std::uint64_t x = 0; x < 79; ++x)
    if (eval_mod({4, 0, 7, 1}, x, 79) == 0) oracle.push_back(static_cast<std::uint32_t>(x));
  auto roots = poly_roots(f, FqPoly({4, 0, 7, 1}));
  std::sort(roots.begin(), roots.end());
  CHECK(roots == oracle);
  CHECK((roots.size() == 0 || roots.size() == 1 || roots.size() == 3));

  const auto f2 = FiniteField::make(79, 2);
  const auto cyc = poly_roots(f2, FqPoly({1, 0, f2.neg(1), 0, 1}));
  CHECK(cyc.size() == 4);
  for (auto z : cyc) {
    // order exactly 12 by repeated multiplication
    std::uint32_t acc = 1;
    int order = 0;
    do {
      acc = f2.mul(acc, z);
      ++order;
    } while (acc != 1);
    CHECK(order == 12);
  }
  CHECK_THROWS_AS(poly_roots(f, FqPoly{}), UsageError);
  // multiplicity
  CHECK(poly_roots(f, FqPoly({1, 2, 1})) == std::vector<std::uint32_t>{78, 78});
}

TEST_CASE("normal form rewriting") {
  const SymElem t = SymElem::t();
  CHECK(sym::beta(0) * sym::beta(0) == t + Rational(3));
  CHECK(sym::beta(1) * sym::beta(1) == t + sym::zeta(3) * Rational(3));
  CHECK(sym::beta(2) * sym::beta(2) == t + sym::zeta(3) * sym::zeta(3) * Rational(3));
  CHECK(sym::zeta(12).pow(12) == SymElem(Rational(1)));
  CHECK(sym::zeta(12).pow(6) == SymElem(Rational(-1)));
  CHECK(sym::zeta(3) == sym::zeta(12) * sym::zeta(12) - Rational(1));
  const SymElem c0 = sym::c(0);
  CHECK(c0.pow(3) == -(t * c0 * c0) - Rational(4));
  // delta^2 = -16 (t^3 + 27)
  CHECK(sym::delta() * sym::delta() == (t.pow(3) + Rational(27)) * Rational(-16));
  // idempotence: reparsing the formatted normal form is stable
  const SymElem e = sym_parse("(zeta12 + beta1*c0)^3 - 2*t*beta2");
  CHECK(sym_parse(e.format()) == e);
}

TEST_CASE("expression parser") {
  CHECK(sym_parse("beta0^2") == SymElem::t() + Rational(3));
  CHECK(sym_parse("zeta12^12") == SymElem(Rational(1)));
  CHECK(sym_parse("delta") == sym::delta());
  CHECK(sym_parse("(1 + t)/(t^3+27)") == SymElem(RatFunc(QPoly({1, 1}), QPoly({27, 0, 0, 1}))));
  CHECK_THROWS_AS(sym_parse("1/beta0"), DivisionRequested);
  CHECK_THROWS_AS(sym_parse("foo"), UsageError);
}

TEST_CASE("inverses") {
  CHECK(SymElem(Rational(1)).inverse() == SymElem(Rational(1)));
  const SymElem z = sym::zeta(12);
  CHECK(z.inverse() == z - z.pow(3));
  CHECK(z.inverse() == z.pow(11));
  const SymElem c0 = sym::c(0), t = SymElem::t();
  CHECK(c0.inverse() == (c0 * c0 + t * c0) * Rational(-1, 4));
  // roots of h
  for (int j = 0; j < 3; ++j) {
    const SymElem c = sym::c(j);
    CHECK((c.pow(3) + t * c * c + Rational(4)).is_zero());
  }
  CHECK(sym::c(1) != sym::c(2));
  CHECK((sym::c(0) + sym::c(1) + sym::c(2) + t).is_zero());

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const SymElem e = random_elem(rng, 1 + i % 4);
    if (e.is_zero()) continue;
    CHECK(e * e.inverse() == SymElem(Rational(1)));
  }
}

TEST_CASE("embeddings") {
  const Embedding emb = make_embedding(Rational(7), 79, 2);
  CHECK(embedding_valid(emb));
  const auto& f = emb.field;
  CHECK(f.mul(emb.beta0, emb.beta0) == f.from_int(10));
  const auto zeta4 = f.pow(emb.zeta12, 3);
  CHECK(sym_embed(sym::delta(), emb) ==
        f.mul(f.from_int(4), f.mul(zeta4, f.mul(emb.beta0, f.mul(emb.beta1, emb.beta2)))));
  const auto c1 = sym_embed(sym::c(1), emb);
  const auto h = [&](std::uint32_t x) { return f.add(f.add(f.pow(x, 3), f.mul(f.from_int(7), f.mul(x, x))), 4); };
  CHECK(h(c1) == 0);
  CHECK(c1 != emb.c0);
  CHECK(h(sym_embed(sym::c(2), emb)) == 0);

  const Embedding found = embedding_search(Rational(7), 2);
  CHECK(embedding_valid(found));
  CHECK(found.field.characteristic() >= 5);
  CHECK(embedding_search(Rational(7), 79).field.characteristic() >= 79);
  CHECK_THROWS_AS(embedding_search(Rational(-3), 2), UsageError);
  CHECK_THROWS_AS(make_embedding(Rational(7), 3, 2), BadReduction);
  CHECK(embedding_valid(embedding_search(Rational(2, 5), 100)));
}

TEST_CASE("sym_embed is a ring homomorphism") {
  const Embedding emb = make_embedding(Rational(7), 79, 2);
  const auto& f = emb.field;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const SymElem a = random_elem(rng, 3), b = random_elem(rng, 3);
    CHECK(sym_embed(a + b, emb) == f.add(sym_embed(a, emb), sym_embed(b, emb)));
    CHECK(sym_embed(a * b, emb) == f.mul(sym_embed(a, emb), sym_embed(b, emb)));
  }
}

TEST_CASE("Galois generators are field automorphisms") {
  std::mt19937_64 rng(5);
  for (int i = 1; i <= 5; ++i) {
    const GaloisAut g = GaloisAut::tau(i);
    for (int k = 0; k < 10; ++k) {
      const SymElem a = random_elem(rng, 2), b = random_elem(rng, 2);
      CHECK(g.apply(a * b) == g.apply(a) * g.apply(b));
      CHECK(g.apply(a + b) == g.apply(a) + g.apply(b));
    }
    CHECK(g.compose(g.inverse()) == GaloisAut());
  }
  CHECK(GaloisAut::tau(2).apply(sym::c(0)) == sym::c(1));
  CHECK(GaloisAut::tau(3).apply(sym::beta(0)) == -sym::beta(0));
  // compose agrees with sequential application
  const GaloisAut g = GaloisAut::tau(4).compose(GaloisAut::tau(2));
  const SymElem x = sym_parse("zeta12*beta1 + c0^2*beta2 - beta0*c0");
  CHECK(g.apply(x) == GaloisAut::tau(4).apply(GaloisAut::tau(2).apply(x)));
}
