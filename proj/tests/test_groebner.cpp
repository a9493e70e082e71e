#include "k3pic/finite_field.hpp"
#include "k3pic/groebner.hpp"

#include <doctest.h>

#include <random>

using namespace k3pic;

namespace {

using FRing = PolyRing<FiniteField>;
using FPoly = FRing::Poly;
using QRing = PolyRing<RationalField>;

// Textbook Buchberger with no criteria, used as an oracle.
std::vector<FPoly> naive_groebner(const FRing& R, std::vector<FPoly> G) {
  const auto& mc = R.mono();
  const auto& F = R.field();
  G.erase(std::remove_if(G.begin(), G.end(), [](const FPoly& p) { return p.is_zero(); }), G.end());
  for (std::size_t i = 0; i < G.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Monomial l = mc.lcm(G[i].lead().m, G[j].lead().m);
      FPoly s = R.sub(R.mul_term(G[i], mc.div(l, G[i].lead().m), F.inv(G[i].lead().c)),
                      R.mul_term(G[j], mc.div(l, G[j].lead().m), F.inv(G[j].lead().c)));
      FPoly h = R.reduce(s, G);
      if (!h.is_zero()) {
        G.push_back(h);
        i = 0;  // restart the sweep
        j = 0;
        break;
      }
    }
  }
  // reduce
  std::vector<FPoly> minimal;
  for (std::size_t a = 0; a < G.size(); ++a) {
    bool red = false;
    for (std::size_t b = 0; b < G.size() && !red; ++b)
      if (a != b && MonoContext::divides(G[b].lead().m, G[a].lead().m))
        red = !(G[b].lead().m == G[a].lead().m) || b < a;
    if (!red) minimal.push_back(G[a]);
  }
  std::vector<FPoly> out;
  for (std::size_t a = 0; a < minimal.size(); ++a) {
    std::vector<FPoly> others;
    for (std::size_t b = 0; b < minimal.size(); ++b)
      if (b != a) others.push_back(minimal[b]);
    FPoly tail = minimal[a];
    auto lead = tail.lead();
    tail.terms.erase(tail.terms.begin());
    FPoly r = R.reduce(tail, others);
    r.terms.insert(r.terms.begin(), lead);
    out.push_back(R.monic(r));
  }
  std::sort(out.begin(), out.end(), [](const FPoly& a, const FPoly& b) { return a.lead().m.key > b.lead().m.key; });
  return out;
}

bool same_basis(const FRing& R, const std::vector<FPoly>& a, const std::vector<FPoly>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!R.equal(a[i], b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("monomial orders") {
  MonoContext grevlex(3, MonoOrder::GrevLex), lex(3, MonoOrder::Lex);
  // x0 > x1 > x2 in both; x0 x2 vs x1^2: grevlex x1^2 > x0 x2
  CHECK(grevlex.make({0, 2, 0}).key > grevlex.make({1, 0, 1}).key);
  CHECK(lex.make({1, 0, 1}).key > lex.make({0, 2, 0}).key);
  CHECK(grevlex.make({0, 0, 2}).key > grevlex.make({1, 0, 0}).key);
  CHECK(lex.make({1, 0, 0}).key > lex.make({0, 0, 5}).key);
  CHECK(MonoContext::divides(grevlex.make({1, 0, 1}), grevlex.make({2, 1, 1})));
  CHECK(!MonoContext::divides(grevlex.make({1, 0, 2}), grevlex.make({2, 1, 1})));
}

TEST_CASE("groebner basics over F_79") {
  const FRing R(FiniteField::make(79, 1), 2);
  const auto x = R.var(0), y = R.var(1);
  const auto one = R.constant(1);
  auto gb = groebner(R, {x, y});
  CHECK(gb.size() == 2);
  CHECK(zerodim_degree(R, {x, y}) == std::optional<std::uint64_t>(1));

  gb = groebner(R, {x, R.sub(x, one)});
  REQUIRE(gb.size() == 1);
  CHECK(R.equal(gb[0], one));
  CHECK(zerodim_degree(R, {x, R.sub(x, one)}) == std::optional<std::uint64_t>(0));

  CHECK(zerodim_degree(R, {R.mul(x, x), y}) == std::optional<std::uint64_t>(2));
  CHECK(!zerodim_degree(R, {R.mul(x, y)}).has_value());

  // (x^2 - 1, y^2 - x): four geometric points; brute-force count over F_{79^2}
  const auto I = std::vector<FPoly>{R.sub(R.mul(x, x), one), R.sub(R.mul(y, y), x)};
  CHECK(zerodim_degree(R, I) == std::optional<std::uint64_t>(4));
  const auto F2 = FiniteField::make(79, 2);
  int points = 0;
  for (std::uint32_t a = 0; a < F2.order(); ++a) {
    if (F2.sub(F2.mul(a, a), 1) != 0) continue;
    for (std::uint32_t b = 0; b < F2.order(); ++b)
      if (F2.mul(b, b) == a) ++points;
  }
  CHECK(points == 4);
}

TEST_CASE("two conics meet in four points") {
  // two members of the pencil spanned by the line pairs L12*L34 and L13*L24
  // through four random points; the brute-force oracle counts common zeros
  // over F_79 and checks transversality
  const FiniteField F = FiniteField::make(79, 1);
  const FRing R(F, 2);
  const auto X = R.var(0), Y = R.var(1);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> pick(0, 78);
  auto line = [&](std::array<std::uint32_t, 2> a, std::array<std::uint32_t, 2> b) {
    return R.sub(R.scale(R.sub(X, R.constant(a[0])), F.sub(b[1], a[1])),
                 R.scale(R.sub(Y, R.constant(a[1])), F.sub(b[0], a[0])));
  };
  auto ev = [&](const FPoly& p, std::uint32_t x, std::uint32_t y) {
    std::uint32_t acc = 0;
    for (const auto& t : p.terms) acc = F.add(acc, F.mul(t.c, F.mul(F.pow(x, t.m.exp(0)), F.pow(y, t.m.exp(1)))));
    return acc;
  };
  auto deriv = [&](const FPoly& p, int v) {
    FPoly d;
    for (const auto& t : p.terms) {
      const int e = t.m.exp(v);
      if (e == 0) continue;
      d = R.add(d, R.term(R.mono().div(t.m, R.mono().var(v)), F.mul(F.from_int(e), t.c)));
    }
    return d;
  };
  int tested = 0;
  while (tested < 5) {
    std::array<std::array<std::uint32_t, 2>, 4> pts;
    for (auto& p : pts) p = {pick(rng), pick(rng)};
    const FPoly A = R.mul(line(pts[0], pts[1]), line(pts[2], pts[3]));
    const FPoly B = R.mul(line(pts[0], pts[2]), line(pts[1], pts[3]));
    const FPoly p1 = R.add(A, R.scale(B, pick(rng))), p2 = R.add(A, R.scale(B, pick(rng)));
    int common = 0;
    bool transversal = true;
    for (std::uint32_t x = 0; x < 79; ++x)
      for (std::uint32_t y = 0; y < 79; ++y) {
        if (ev(p1, x, y) != 0 || ev(p2, x, y) != 0) continue;
        ++common;
        const auto jac = F.sub(F.mul(ev(deriv(p1, 0), x, y), ev(deriv(p2, 1), x, y)),
                               F.mul(ev(deriv(p1, 1), x, y), ev(deriv(p2, 0), x, y)));
        if (jac == 0) transversal = false;
      }
    if (common != 4 || !transversal || R.total_degree(p1) != 2 || R.total_degree(p2) != 2) continue;
    const auto deg = zerodim_degree(R, {p1, p2});
    REQUIRE(deg.has_value());
    CHECK(*deg == 4);
    ++tested;
  }
}

TEST_CASE("agreement with a criterion-free Buchberger") {
  const FiniteField F = FiniteField::make(79, 1);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::uint32_t> pick(0, 78);
  std::uniform_int_distribution<int> e(0, 2);
  for (int nv = 2; nv <= 3; ++nv) {
    for (MonoOrder ord : {MonoOrder::GrevLex, MonoOrder::Lex}) {
      const FRing R(F, nv, ord);
      for (int trial = 0; trial < 15; ++trial) {
        std::vector<FPoly> gens;
        for (int g = 0; g < nv; ++g) {
          std::vector<std::pair<std::vector<int>, std::uint32_t>> ts;
          for (int k = 0; k < 4; ++k) {
            std::vector<int> ex(static_cast<std::size_t>(nv));
            for (auto& v : ex) v = nv == 2 ? e(rng) : e(rng) / 2;
            ts.push_back({ex, pick(rng)});
          }
          gens.push_back(R.from_terms(ts));
        }
        const auto fast = groebner(R, gens);
        const auto slow = naive_groebner(R, gens);
        CHECK(same_basis(R, fast, slow));
        // every generator reduces to zero
        for (const auto& g : gens) CHECK(R.reduce(g, fast).is_zero());
      }
    }
  }
}

TEST_CASE("groebner over Q") {
  const QRing R(RationalField{}, 2, MonoOrder::Lex);
  const auto x = R.var(0), y = R.var(1);
  const auto one = R.constant(Rational(1));
  const auto gb = groebner(R, {R.sub(R.add(R.mul(x, x), R.mul(y, y)), one), R.sub(x, y)});
  REQUIRE(gb.size() == 2);
  CHECK(R.equal(gb[0], R.sub(x, y)));
  CHECK(R.equal(gb[1], R.sub(R.mul(y, y), R.constant(Rational(1, 2)))));
  const QRing G(RationalField{}, 2);
  CHECK(zerodim_degree(G, {R.sub(R.mul(x, x), R.constant(Rational(2))), R.sub(R.mul(y, y), R.constant(Rational(3)))}) ==
        std::optional<std::uint64_t>(4));
}
