#include "k3pic/latbuild.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace k3pic;

namespace {

const Embedding& emb79() {
  static const Embedding e = make_embedding(Rational(7), 79, 2);
  return e;
}

const OrbitLattice& orbit_lattice() {
  static const OrbitLattice OL = [] {
    const Orbit orb = orbit_generate(divisor_catalog(), h_surf_generators(), emb79());
    return build_orbit_lattice(orb, emb79());
  }();
  return OL;
}

const std::vector<IsometryRep>& gens() {
  static const std::vector<IsometryRep> g = generator_isometries(orbit_lattice(), emb79());
  return g;
}

IntMatrix word_matrix(const std::vector<int>& word) {
  const auto r = static_cast<Eigen::Index>(orbit_lattice().rank());
  IntMatrix A = IntMatrix::Identity(r, r);
  for (int i : word) A = A * gens()[static_cast<std::size_t>(i)].matrix;
  return A;
}

SurfAut word_aut(const std::vector<int>& word) {
  const auto all = g_generators();
  SurfAut a;
  for (int i : word) a = a * all[static_cast<std::size_t>(i)];
  return a;
}

}  // namespace

TEST_CASE("quotient of the orbit matrix") {
  const auto& OL = orbit_lattice();
  CHECK(OL.size() == 132);
  CHECK(OL.rank() == 19);
  const auto inv = invariants(OL.lattice);
  CHECK(inv.det == 864);  // sign (-1)^18
  CHECK(inv.sig == Signature{1, 18, 0});
  CHECK(inv.even);
  CHECK(discriminant_group(OL.lattice).invariants == std::vector<Integer>{6, 12, 12});
  // the class table reproduces every intersection number
  CHECK(OL.classes.transpose() * OL.gram() * OL.classes == OL.M);
  // labels sorted, seeds first
  CHECK(std::is_sorted(OL.labels.begin(), OL.labels.end()));
  CHECK(OL.labels.front() == "B1");
  // basis divisors have unit coordinate vectors
  for (Eigen::Index i = 0; i < OL.basis.cols(); ++i) {
    Eigen::Index nz = 0, at = -1;
    for (Eigen::Index j = 0; j < OL.basis.rows(); ++j)
      if (OL.basis(j, i) != 0) ++nz, at = j;
    if (nz == 1 && OL.basis(at, i) == 1) CHECK(OL.classes.col(at) == IntVector::Unit(19, i));
  }
}

TEST_CASE("radical absorbs duplicate divisors") {
  const auto& OL = orbit_lattice();
  const auto n = OL.M.rows();
  IntMatrix M2(n + 1, n + 1);
  M2.topLeftCorner(n, n) = OL.M;
  M2.row(n).head(n) = OL.M.row(7);
  M2.col(n).head(n) = OL.M.col(7);
  M2(n, n) = OL.M(7, 7);
  auto labels = OL.labels;
  labels.push_back("copy");
  const OrbitLattice Q = quotient_by_radical(M2, labels);
  CHECK(Q.gram() == OL.gram());
  CHECK(Q.classes.col(n) == Q.classes.col(7));

  // a rank-deficient input is refused
  IntMatrix small = OL.M.topLeftCorner(10, 10);
  std::vector<std::string> few(OL.labels.begin(), OL.labels.begin() + 10);
  CHECK_THROWS_AS(quotient_by_radical(small, few), RankMismatch);
}

TEST_CASE("classes of divisors") {
  const auto& OL = orbit_lattice();
  const auto& emb = emb79();
  for (std::size_t j = 0; j < OL.size(); j += 9) {
    const IntVector x = class_of_divisor(OL.divisors[j], OL, emb);
    CHECK(x == OL.classes.col(static_cast<Eigen::Index>(j)));
    CHECK(Integer(x.dot(OL.gram() * x)) == -2);
  }
  // a Galois image outside the orbit still has an integral class
  const auto omega = divisor_catalog();
  const DivisorCurve t1b4 = apply_automorphism(GaloisAut::tau(1), omega[3]);
  const IntVector x = class_of_divisor(t1b4, OL, emb);
  CHECK(Integer(x.dot(OL.gram() * x)) == -2);
}

TEST_CASE("hyperplane class") {
  const auto& OL = orbit_lattice();
  const IntVector l = hyperplane_class(OL);
  CHECK(Integer(l.dot(OL.gram() * l)) == 2);
  for (std::size_t j = 0; j < OL.size(); ++j)
    CHECK(Integer(l.dot(OL.gram() * OL.classes.col(static_cast<Eigen::Index>(j)))) == 2);
  // agrees with the geometric hyperplane section on a few divisors
  for (std::size_t j = 0; j < OL.size(); j += 33)
    CHECK(intersection_with_hyperplane(OL.divisors[j], emb79(), 3 + j) == 2);
  for (const auto& g : gens()) CHECK(g.matrix * l == l);
}

TEST_CASE("generator isometries") {
  const auto& OL = orbit_lattice();
  const auto& G = gens();
  REQUIRE(G.size() == 9);
  const IntMatrix I = IntMatrix::Identity(19, 19);
  CHECK(isometry_matrix(SurfAut{}, OL, emb79()).matrix == I);
  for (const auto& g : G) {
    CHECK(is_isometry(g.matrix, OL.gram()));
    CHECK(g.matrix != I);
  }
  CHECK(!is_isometry(2 * I, OL.gram()));
}

TEST_CASE("representation is a homomorphism") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 8), len(1, 3);
  auto random_word = [&] {
    std::vector<int> w(static_cast<std::size_t>(len(rng)));
    for (auto& x : w) x = pick(rng);
    return w;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_word(), b = random_word();
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const IntMatrix direct = isometry_matrix(word_aut(ab), orbit_lattice(), emb79()).matrix;
    CHECK(direct == word_matrix(a) * word_matrix(b));
  }
}

TEST_CASE("classes are equivariant") {
  const auto& OL = orbit_lattice();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 8);
  std::uniform_int_distribution<std::size_t> pd(0, OL.size() - 1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<int> w{pick(rng), pick(rng)};
    const std::size_t j = pd(rng);
    const IntVector lhs = class_of_divisor(apply_automorphism(word_aut(w), OL.divisors[j]), OL, emb79());
    CHECK(lhs == word_matrix(w) * OL.classes.col(static_cast<Eigen::Index>(j)));
  }
}

TEST_CASE("matrix group closures") {
  std::vector<IntMatrix> h, gal, all;
  for (const auto& g : gens()) {
    all.push_back(g.matrix);
    (g.source.gal == GaloisAut() ? h : gal).push_back(g.matrix);
  }
  REQUIRE(h.size() == 4);
  REQUIRE(gal.size() == 5);

  const MatrixGroup H = matrix_group_closure(h);
  CHECK(H.order() == 144);
  const FiniteGroup Habs = h_group();
  CHECK(find_isomorphism(H.abstract(), Habs).has_value());  // faithful, same structure

  const MatrixGroup Gal = matrix_group_closure(gal);
  CHECK(Gal.order() == 96);
  CHECK(Gal.order() == galois_group().order());
  const FiniteGroup model =
      direct_product(symmetric_group(3), direct_product(cyclic_group(2), dihedral_group(4)));
  CHECK(find_isomorphism(Gal.abstract(), model).has_value());

  const MatrixGroup G = matrix_group_closure(all);
  CHECK(G.order() % 144 == 0);
  CHECK(G.order() % 96 == 0);
  for (const auto& x : H.elements) CHECK(G.contains(x));
  for (const auto& x : Gal.elements) CHECK(G.contains(x));
  MESSAGE("order of <Gal, H> on the lattice: " << G.order());
  CHECK_THROWS_AS(matrix_group_closure(all, 1000), ClosureBudgetExceeded);
}

TEST_CASE("nikulin classification of the orbit lattice") {
  const auto res = nikulin_equivalent(orbit_lattice().lattice, target_lattice());
  CHECK(res.outcome == NikulinOutcome::Equivalent);
  CHECK(res.length == 3);
  CHECK(res.length + 2 < orbit_lattice().rank());
}

TEST_CASE("lattice bundle round trip") {
  const auto& OL = orbit_lattice();
  const LatticeBundle b = make_bundle(OL, gens(), hyperplane_class(OL), emb79());
  CHECK(b.n_h_generators == 4);
  const LatticeBundle c = LatticeBundle::from_json(b.to_json());
  CHECK(c.gram == b.gram);
  CHECK(c.classes == b.classes);
  CHECK(c.hyperplane == b.hyperplane);
  CHECK(c.generators == b.generators);
  CHECK(c.generator_names == b.generator_names);
  CHECK(c.divisor_class("B3") == OL.classes.col(static_cast<Eigen::Index>(OL.index_of("B3"))));
  CHECK_THROWS_AS(LatticeBundle::from_json("{\"t0\": 1}"), UsageError);
}
