#include "k3pic/intersect.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

using namespace k3pic;

namespace {

const Embedding& emb79() {
  static const Embedding e = make_embedding(Rational(7), 79, 2);
  return e;
}

const Orbit& h_orbit() {
  static const Orbit o = orbit_generate(divisor_catalog(), h_surf_generators(), emb79());
  return o;
}

DivisorCurve other_sheet(const DivisorCurve& D) {
  DivisorCurve r = D;
  r.g = -r.g;
  r.label = "i*" + D.label;
  return r;
}

bool same_conic(const EmbeddedCurve& a, const EmbeddedCurve& b, const FiniteField& K) {
  // proportional coefficient vectors
  for (std::size_t i = 0; i < a.q.size(); ++i)
    for (std::size_t j = 0; j < a.q.size(); ++j)
      if (K.mul(a.q[i], b.q[j]) != K.mul(a.q[j], b.q[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("divisor equality") {
  const auto omega = divisor_catalog();
  const auto& emb = emb79();
  CHECK(divisor_equal(omega[0], omega[0], emb));
  CHECK(divisor_equal(omega[0], apply_automorphism(HElem::diagonal(2, 2, 2), omega[0]), emb));
  CHECK(!divisor_equal(omega[0], omega[1], emb));
  CHECK(!divisor_equal(omega[0], other_sheet(omega[0]), emb));
  // rescaling q does not change the curve
  DivisorCurve scaled = omega[2];
  scaled.q = scaled.q * SymElem(Rational(5));
  CHECK(divisor_equal(scaled, omega[2], emb));
}

TEST_CASE("intersection numbers of catalog curves") {
  const auto omega = divisor_catalog();
  const auto& emb = emb79();
  for (const auto& D : omega) CHECK(intersection_number(D, D, emb) == -2);

  const auto b12 = intersection_number(omega[0], omega[1], emb);
  CHECK(b12 >= 0);
  CHECK(b12 <= 4);
  CHECK(b12 == 2);  // golden, confirmed at a second prime below

  // E1 = psi(0,3,0)B3 - B3 has square -8
  const DivisorCurve b3s = apply_automorphism(HElem::diagonal(0, 3, 0), omega[2]);
  const auto x = intersection_number(omega[2], b3s, emb);
  CHECK(x == 2);
  CHECK(-2 + -2 - 2 * x == -8);

  // the two sheets over one conic
  for (const auto& D : omega) CHECK(intersection_number(D, other_sheet(D), emb) == 6);

  const Embedding second = embedding_search(Rational(7), 101);
  CHECK(second.field.characteristic() != 79);
  CHECK(intersection_number(omega[0], omega[1], second) == b12);
  CHECK(intersection_number(omega[2], b3s, second) == x);
}

TEST_CASE("hyperplane class meets every conic half twice") {
  const auto& orb = h_orbit();
  for (std::size_t i = 0; i < orb.curves.size(); i += 11)
    CHECK(intersection_with_hyperplane(orb.curves[i], emb79(), 1 + i) == 2);
  // L.E1 = 2 - 2
  const auto omega = divisor_catalog();
  const DivisorCurve b3s = apply_automorphism(HElem::diagonal(0, 3, 0), omega[2]);
  CHECK(intersection_with_hyperplane(b3s, emb79()) - intersection_with_hyperplane(omega[2], emb79()) == 0);
}

TEST_CASE("H-orbit of the catalog") {
  const auto& orb = h_orbit();
  CHECK(orb.curves.size() == 132);
  for (const auto& [label, n] : orb.orbit_sizes) CHECK(144 % n == 0);
  CHECK(orb.orbit_sizes.at("B4") == 72);
  // labels: seeds keep their names, the rest are op*seed
  for (std::size_t i = 0; i < orb.curves.size(); ++i) {
    CHECK(orb.curves[i].label == orb.embedded[i].label);
    if (orb.via[i].h.is_identity()) CHECK(orb.curves[i].label.rfind("B", 0) == 0);
  }
  // every orbit element is bitangent and reproduced by its recorded source
  const auto omega = divisor_catalog();
  for (std::size_t i = 0; i < orb.curves.size(); i += 7) {
    CHECK(orb.curves[i].bitangent());
    CHECK(same_curve_symbolic(apply_automorphism(orb.via[i], omega[orb.source[i]]), orb.curves[i]));
  }
  // pairwise distinct
  std::set<std::string> keys;
  for (const auto& e : orb.embedded) keys.insert(e.key);
  CHECK(keys.size() == orb.curves.size());
}

TEST_CASE("intersection matrix properties") {
  const auto& orb = h_orbit();
  const auto& emb = emb79();
  const IntMatrix M = intersection_matrix(orb.embedded, emb);
  const auto n = M.rows();
  CHECK(M == M.transpose());
  int bezout_violations = 0, sheet_violations = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(M(i, i) == -2);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& a = orb.embedded[static_cast<std::size_t>(i)];
      const auto& b = orb.embedded[static_cast<std::size_t>(j)];
      if (same_conic(a, b, emb.field)) {
        if (M(i, j) != 6) ++sheet_violations;
      } else if (M(i, j) < 0 || M(i, j) > 4) {
        ++bezout_violations;
      }
    }
  }
  CHECK(bezout_violations == 0);
  CHECK(sheet_violations == 0);

  // D.D' + D.(iD') = C.C' = 4 whenever both sheets of C' are in the orbit
  int sheet_sum_checked = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      if (!same_conic(orb.embedded[static_cast<std::size_t>(j)], orb.embedded[static_cast<std::size_t>(k)], emb.field))
        continue;
      for (Eigen::Index i = 0; i < n; i += 5) {
        if (i == j || i == k) continue;
        if (same_conic(orb.embedded[static_cast<std::size_t>(i)], orb.embedded[static_cast<std::size_t>(j)], emb.field))
          continue;
        CHECK(M(i, j) + M(i, k) == 4);
        ++sheet_sum_checked;
      }
    }
  CHECK(sheet_sum_checked > 100);

  // rank over Q
  Eigen::MatrixXd Md = M.unaryExpr([](const Integer& v) { return v.get_d(); });
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(Md).rank() == 19);
}

TEST_CASE("intersection invariants") {
  const auto& orb = h_orbit();
  const auto& emb = emb79();
  std::vector<HElem> H;
  h_group(&H);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pc(0, orb.curves.size() - 1), ph(0, H.size() - 1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t i = pc(rng), j = pc(rng);
    pairs.push_back({i, j});
    const auto& a = orb.embedded[i];
    const auto& b = orb.embedded[j];
    const auto ab = intersect_embedded(a, b, emb.field);
    // symmetric
    CHECK(intersect_embedded(b, a, emb.field).value == ab.value);
    // chart order does not matter
    CHECK(intersect_embedded(a, b, emb.field, {2, 1, 0}).value == ab.value);
    CHECK(intersect_embedded(a, b, emb.field, {1, 2, 0}).value == ab.value);
    // H acts by isometries
    const HElem h = H[ph(rng)];
    const auto ha = apply_automorphism(h, orb.curves[i]);
    const auto hb = apply_automorphism(h, orb.curves[j]);
    CHECK(intersection_number(ha, hb, emb) == ab.value);
  }
  IntMatrix M = IntMatrix::Zero(static_cast<Eigen::Index>(orb.curves.size()), static_cast<Eigen::Index>(orb.curves.size()));
  for (const auto& [i, j] : pairs)
    M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        Integer(static_cast<long>(intersect_embedded(orb.embedded[i], orb.embedded[j], emb.field).value));
  const Embedding second = embedding_search(Rational(7), 101);
  const PrimeCheck pc2 = second_prime_check(orb.curves, pairs, M, second);
  CHECK(pc2.pairs == 10);
  CHECK(pc2.ok());
  // a wrong entry is caught
  M(static_cast<Eigen::Index>(pairs[0].first), static_cast<Eigen::Index>(pairs[0].second)) += 1;
  CHECK(!second_prime_check(orb.curves, pairs, M, second).ok());
}

TEST_CASE("common components are reported") {
  const auto& K = emb79().field;
  // q = x y, reducible; g - g' = y^3 vanishes on the component y = 0
  EmbeddedCurve a, b;
  a.q.assign(6, 0);
  a.q[static_cast<std::size_t>(Form::index(2, 1, 1))] = 1;
  b.q = a.q;
  a.g.assign(10, 0);
  a.g[static_cast<std::size_t>(Form::index(3, 3, 0))] = 1;
  b.g = a.g;
  b.g[static_cast<std::size_t>(Form::index(3, 0, 3))] = 1;
  a.label = "a";
  b.label = "b";
  a.key = divisor_key(a.q, a.g, K);
  b.key = divisor_key(b.q, b.g, K);
  CHECK(a.key != b.key);
  CHECK_THROWS_AS(intersect_embedded(a, b, K), CommonComponent);
}

TEST_CASE("intersection cache") {
  const auto dir = std::filesystem::temp_directory_path() / "k3pic_cache_test";
  std::filesystem::remove_all(dir);
  const IntersectionCache cache(dir);
  const auto& orb = h_orbit();
  const std::vector<EmbeddedCurve> few(orb.embedded.begin(), orb.embedded.begin() + 8);
  const IntMatrix fresh = intersection_matrix(few, emb79(), &cache);
  CHECK(cache.hits() == 0);
  const IntMatrix again = intersection_matrix(few, emb79(), &cache);
  CHECK(again == fresh);
  CHECK(cache.hits() == 36);
  // key is symmetric in the pair
  CHECK(IntersectionCache::cache_key(few[0], few[1], emb79()) == IntersectionCache::cache_key(few[1], few[0], emb79()));

  // corrupt and tampered entries are recomputed
  const auto key01 = IntersectionCache::cache_key(few[0], few[1], emb79());
  const auto key23 = IntersectionCache::cache_key(few[2], few[3], emb79());
  { std::ofstream(cache.path_for(key01)) << "{not json"; }
  {
    std::ifstream in(cache.path_for(key23));
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto pos = text.find("\"value\"");
    REQUIRE(pos != std::string::npos);
    text.insert(text.find(':', pos) + 1, "1");  // value v becomes 1v
    std::ofstream(cache.path_for(key23)) << text;
  }
  CHECK(!cache.load(key01).has_value());
  CHECK(!cache.load(key23).has_value());
  const IntMatrix repaired = intersection_matrix(few, emb79(), &cache);
  CHECK(repaired == fresh);
  CHECK(cache.load(key01).has_value());

  ::setenv("K3PIC_CACHE_DIR", "/tmp/from_env", 1);
  CHECK(IntersectionCache::resolve_dir(std::nullopt) == std::filesystem::path("/tmp/from_env"));
  CHECK(IntersectionCache::resolve_dir(std::filesystem::path("/tmp/flag")) == std::filesystem::path("/tmp/flag"));
  ::unsetenv("K3PIC_CACHE_DIR");
  CHECK(!IntersectionCache::resolve_dir(std::nullopt).has_value());
  std::filesystem::remove_all(dir);
}
