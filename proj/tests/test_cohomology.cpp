#include "k3pic/cohomology.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace k3pic;

namespace {

const LatticeBundle& bundle() {
  static const LatticeBundle b = build_lattice_bundle(make_embedding(Rational(7), 79, 2));
  return b;
}

const GroupRep& gal() {
  static const GroupRep G = galois_rep(bundle());
  return G;
}

const std::vector<Subgroup>& subgroups() {
  static const std::vector<Subgroup> s = all_subgroups(gal());
  return s;
}

// v lies in the lattice spanned by the columns of F (F primitive, so
// rational membership is enough)
bool in_span(const IntMatrix& F, const IntVector& v) {
  if (!cokernel(F).torsion.empty()) return false;
  IntMatrix A(F.rows(), F.cols() + 1);
  A << F, v;
  return rank_of(A) == F.cols();
}

}  // namespace

TEST_CASE("Galois image as a group representation") {
  const auto& G = gal();
  CHECK(G.order() == 96);
  CHECK(G.generator_names == std::vector<std::string>{"tau1", "tau2", "tau3", "tau4", "tau5"});
  for (const auto& g : G.elements) CHECK(is_isometry(to_big(g), bundle().gram));
  CHECK(G.word_name(0) == "1");
  // table agrees with matrix products
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 95);
  for (int i = 0; i < 30; ++i) {
    const int a = pick(rng), b = pick(rng);
    CHECK(G.elements[static_cast<std::size_t>(G.table.mul(a, b))] ==
          G.elements[static_cast<std::size_t>(a)] * G.elements[static_cast<std::size_t>(b)]);
  }
  IntMatrix bad = IntMatrix::Identity(19, 19);
  bad(0, 0) = 2;
  CHECK_THROWS_AS(make_group_rep({bad}, {"x"}, bundle().gram), NotIsometry);
}

TEST_CASE("fixed sublattice") {
  const auto& G = gal();
  const FixedLattice F = fixed_sublattice(G, whole_group(G));
  REQUIRE(F.rank == 1);
  const IntVector l = bundle().hyperplane;
  CHECK((F.basis.col(0) == l || F.basis.col(0) == IntVector(-l)));
  const FixedLattice T = fixed_sublattice(G, Subgroup{{0}, {}});
  CHECK(T.rank == 19);
  // every subgroup fixes at least l, and the rank shrinks along inclusions
  for (const auto& S : subgroups()) {
    const FixedLattice FS = fixed_sublattice(G, S);
    CHECK(FS.rank >= 1);
    CHECK(in_span(FS.basis, l));
    for (const auto& g : S.generators) CHECK(G.matrix(g) * FS.basis == FS.basis);
  }
}

TEST_CASE("integer kernel and cokernel") {
  IntMatrix A(2, 3);
  A << 2, 4, 6, 1, 1, 1;
  const IntMatrix K = integer_kernel(A);
  REQUIRE(K.cols() == 1);
  CHECK((A * K).isZero());
  CHECK(cokernel(K).torsion.empty());  // primitive
  IntMatrix B(3, 2);
  B << 2, 0, 0, 6, 0, 0;
  const auto c = cokernel(B);
  CHECK(c.torsion == AbelianInvariants{2, 6});
  CHECK(c.free_rank == 1);
}

TEST_CASE("H^1 of the Galois image") {
  const auto& G = gal();
  const H1Result r = h1(G, whole_group(G));
  CHECK(r.invariants == AbelianInvariants{2, 2, 2});
  CHECK(h1(G, Subgroup{{0}, {}}).invariants.empty());
  // the generating set does not matter
  const Subgroup S2 = subgroup_generated(G, G.table.small_generating_set());
  CHECK(h1(G, S2).invariants == r.invariants);

  // representatives are cocycles; no nonzero combination is a coboundary
  const Subgroup S = whole_group(G);
  REQUIRE(r.cocycles.size() == 3);
  for (int mask = 1; mask < 8; ++mask) {
    IntMatrix c = IntMatrix::Zero(19, static_cast<Eigen::Index>(S.generators.size()));
    for (int i = 0; i < 3; ++i)
      if (mask >> i & 1) c += r.cocycles[static_cast<std::size_t>(i)];
    const auto ext = extend_cocycle(G, S, c);
    CHECK(is_cocycle(G, S, ext));
    CHECK(!restricts_to_coboundary(G, S, ext));
    // twice the class vanishes
    const IntMatrix c2 = 2 * c;
    CHECK(restricts_to_coboundary(G, S, extend_cocycle(G, S, c2)));
  }
}

TEST_CASE("restriction to a Sylow 2-subgroup is injective") {
  const auto& G = gal();
  const Subgroup S = whole_group(G);
  const H1Result r = h1(G, S);
  const Subgroup* P = nullptr;
  for (const auto& T : subgroups())
    if (T.order() == 32) P = &T;
  REQUIRE(P != nullptr);
  for (int mask = 1; mask < 8; ++mask) {
    IntMatrix c = IntMatrix::Zero(19, static_cast<Eigen::Index>(S.generators.size()));
    for (int i = 0; i < 3; ++i)
      if (mask >> i & 1) c += r.cocycles[static_cast<std::size_t>(i)];
    CHECK(!restricts_to_coboundary(G, *P, extend_cocycle(G, S, c)));
  }
}

TEST_CASE("cyclic subgroups agree with the closed formulas") {
  const auto& G = gal();
  std::set<std::vector<int>> seen;
  int checked = 0;
  for (int a = 1; a < G.order(); ++a) {
    const Subgroup C = subgroup_generated(G, {a});
    if (!seen.insert(C.elements).second) continue;
    const IntMatrix g = G.matrix(a);
    const int n = C.order();
    CHECK(h1(G, C).invariants == h1_cyclic(g, n));
    CHECK(h2(G, C).invariants == h2_cyclic(g, n));
    ++checked;
  }
  MESSAGE("cyclic subgroups checked: " << checked);
  CHECK(checked > 10);
}

TEST_CASE("cocycle system agrees on small subgroups") {
  const auto& G = gal();
  std::set<std::vector<int>> classes;
  int checked = 0;
  for (const auto& S : subgroups()) {
    if (S.order() > 8) continue;
    // one subgroup per conjugacy class
    std::vector<int> best;
    for (int g = 0; g < G.order(); ++g) {
      std::vector<int> c;
      for (int s : S.elements) c.push_back(G.table.mul(G.table.mul(g, s), G.table.inv(g)));
      std::sort(c.begin(), c.end());
      if (best.empty() || c < best) best = c;
    }
    if (!classes.insert(best).second) continue;
    CHECK(h1_cocycle_system(G, S) == h1(G, S).invariants);
    ++checked;
  }
  MESSAGE("conjugacy classes checked: " << checked);
  CHECK_THROWS_AS(h1_cocycle_system(G, whole_group(G)), TooLarge);
}

TEST_CASE("local elementary divisors match the Smith form") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> e(-6, 6), dim(2, 9);
  for (int trial = 0; trial < 40; ++trial) {
    const int r = dim(rng), c = dim(rng);
    SparseIntMatrix A;
    A.rows = static_cast<std::size_t>(r);
    A.cols = static_cast<std::size_t>(c);
    // low-rank products make divisible minors likely
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        const int v = e(rng) * (trial % 3 == 0 ? 4 : 1) + (trial % 2 ? 3 * e(rng) : 0);
        if (v) A.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
      }
    const auto diag = smith_normal_form(A.dense()).diagonal();
    for (std::uint64_t p : {2u, 3u}) {
      const int K = p == 2 ? 8 : 5;
      const LocalDivisors L = local_divisors(A, p, K);
      std::vector<int> expect;
      int rank = 0;
      for (const auto& d : diag) {
        if (d == 0) continue;
        Integer x = d;
        int v = 0;
        while (x % static_cast<unsigned long>(p) == 0) x /= static_cast<unsigned long>(p), ++v;
        if (v >= K) continue;
        ++rank;
        if (v > 0) expect.push_back(v);
      }
      std::sort(expect.begin(), expect.end());
      CHECK(L.rank == rank);
      CHECK(L.valuations == expect);
    }
  }
  CHECK_THROWS_AS(local_divisors(SparseIntMatrix{}, 2, 9), TooLarge);
}

TEST_CASE("primary parts combine into invariant factors") {
  CHECK(combine_primary({{2, {1, 1, 3}}, {3, {1}}}) == AbelianInvariants{2, 2, 24});
  CHECK(combine_primary({{2, {}}, {3, {}}}).empty());
  CHECK(combine_primary({{3, {2, 1}}}) == AbelianInvariants{3, 9});
}

TEST_CASE("Shapiro: coinduced modules have no H^1") {
  const auto& G = gal();
  for (const auto& S : subgroups())
    if (S.order() == 6 || S.order() == 8) {
      CHECK(h1_coinduced(G, S).empty());
      break;
    }
  CHECK(h1_coinduced(G, whole_group(G)).empty());
}

TEST_CASE("H^2 of the Galois image") {
  const auto& G = gal();
  const Subgroup S = subgroup_generated(G, G.table.small_generating_set());
  const H2Result r = h2(G, S);
  CHECK(r.invariants == AbelianInvariants(10, 2));
  CHECK(r.quotient_rank == 1805);
  CHECK(r.expected_rank == 1787);
  CHECK(!r.p_primary_only);
  for (const auto& [p, L] : r.local) CHECK(L.rank == 1787);
  CHECK(h2(G, Subgroup{{0}, {}}).invariants.empty());

  CHECK_THROWS_AS(h2(G, S, 1000), ResourceBudgetExceeded);
  const H2Result partial = h2(G, S, 1000, true);
  CHECK(partial.p_primary_only);
  CHECK(partial.skipped_primes == std::vector<std::uint64_t>{2, 3});
}

TEST_CASE("normal subgroup sweep") {
  const SweepSummary s = subgroup_sweep(gal(), SweepMode::Normal);
  CHECK(s.trivial_h1 + s.nontrivial_h1 == 96);
  CHECK(s.trivial_h1 == 49);
  CHECK(s.nontrivial_h1 == 47);
  for (const auto& r : s.reports) {
    CHECK(r.normal);
    for (auto d : r.h1) CHECK(r.order % static_cast<int>(d) == 0);
  }
  const Json j = s.to_json();
  CHECK(j["trivial_h1"] == 49);
  CHECK(j["reports"].size() == 97);
  CHECK(j["reports"][0].contains("h1_invariants"));
}

TEST_CASE("full subgroup sweep") {
  const SweepSummary s = subgroup_sweep(gal(), SweepMode::All);
  CHECK(s.all_exponent_two);
  const std::set<int> allowed{0, 1, 2, 3, 4, 5, 6, 8, 10, 12};
  for (int i : s.h1_ranks) CHECK(allowed.count(i));
  MESSAGE("subgroups: " << s.reports.size());
  // conjugate subgroups have isomorphic H^1
  std::map<int, AbelianInvariants> by_class;
  for (const auto& r : s.reports) {
    auto [it, fresh] = by_class.emplace(r.conjugacy_class, r.h1);
    if (!fresh) CHECK(it->second == r.h1);
  }
  // normal subgroups of the full sweep are the ones of the normal sweep
  int normal = 0;
  for (const auto& r : s.reports) normal += r.normal;
  CHECK(normal == 97);
  CHECK_THROWS_AS(parse_sweep_mode("some"), UsageError);
}

TEST_CASE("report for the whole group") {
  const auto& G = gal();
  CohomologyReport r = cohomology_report(G, subgroup_generated(G, G.table.small_generating_set()), true);
  CHECK(r.order == 96);
  CHECK(r.normal);
  CHECK(r.h0_rank == 1);
  CHECK(r.h1 == AbelianInvariants{2, 2, 2});
  REQUIRE(r.h2.has_value());
  CHECK(*r.h2 == AbelianInvariants(10, 2));
  const Json j = r.to_json();
  CHECK(j["h2_invariants"].size() == 10);
}
