#include "k3pic/latbuild.hpp"

#include "k3pic/jsonio.hpp"

#include <algorithm>
#include <numeric>

namespace k3pic {

namespace {

Integer gcd_of(const IntVector& v) {
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Integer a = v(i);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  }
  return g;
}

// Rows giving coordinates in Z^r / span(P), P primitive of full column rank.
IntMatrix quotient_coords(const IntMatrix& P, Eigen::Index r) {
  if (P.cols() == 0) return IntMatrix::Identity(r, r);
  const SmithForm s = smith_normal_form(P);
  for (const auto& d : s.diagonal())
    if (d != 1) throw UsageError("quotient_coords: span is not primitive");
  return s.U.bottomRows(r - P.cols());
}

IntVector solve_integral(const IntMatrix& A, const IntVector& b, const char* what) {
  RatMatrix rhs = to_rational(IntMatrix(b));
  RatMatrix x;
  try {
    x = solve_rational(A, rhs);
  } catch (const Degenerate&) {
    throw NoSolution(std::string(what) + ": singular Gram matrix");
  }
  if (!is_integral(x)) throw NonIntegralClass(std::string(what) + ": non-integral solution");
  return to_integer(x).col(0);
}

}  // namespace

// ---------------------------------------------------------------- quotient

std::vector<std::size_t> OrbitLattice::support() const {
  std::vector<std::size_t> s;
  for (Eigen::Index j = 0; j < basis.rows(); ++j)
    for (Eigen::Index i = 0; i < basis.cols(); ++i)
      if (basis(j, i) != 0) {
        s.push_back(static_cast<std::size_t>(j));
        break;
      }
  return s;
}

std::size_t OrbitLattice::index_of(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw UsageError("unknown divisor label: " + label);
  return static_cast<std::size_t>(it - labels.begin());
}

OrbitLattice quotient_by_radical(const IntMatrix& M, std::vector<std::string> labels, int expected_rank) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n || M != M.transpose()) throw UsageError("intersection matrix must be square and symmetric");
  if (static_cast<Eigen::Index>(labels.size()) != n) throw UsageError("label count does not match the matrix");

  const SmithForm snf = smith_normal_form(M);
  const auto diag = snf.diagonal();
  Eigen::Index r = 0;
  while (r < static_cast<Eigen::Index>(diag.size()) && diag[static_cast<std::size_t>(r)] != 0) ++r;
  if (expected_rank > 0 && r != expected_rank)
    throw RankMismatch("intersection matrix has rank " + std::to_string(r) + ", expected " +
                       std::to_string(expected_rank));

  // U M = D V^-1, so the top rows of V^-1 are rows of U M divided by the invariants.
  IntMatrix C0 = (snf.U * M).topRows(r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < n; ++j) mpz_divexact(C0(i, j).get_mpz_t(), C0(i, j).get_mpz_t(), diag[static_cast<std::size_t>(i)].get_mpz_t());

  std::vector<IntVector> chosen;  // divisor combinations, length n
  IntMatrix P(r, 0);              // their classes
  IntMatrix Q = quotient_coords(P, r);
  auto take = [&](const IntVector& combo) {
    chosen.push_back(combo);
    P.conservativeResize(Eigen::NoChange, P.cols() + 1);
    P.col(P.cols() - 1) = C0 * combo;
    Q = quotient_coords(P, r);
  };

  for (Eigen::Index j = 0; j < n && P.cols() < r; ++j) {
    const IntVector q = Q * C0.col(j);
    if (gcd_of(q) == 1) take(IntVector::Unit(n, j));
  }
  // completion by a x_j + b x_k with small coefficients
  while (P.cols() < r) {
    const IntMatrix QC = Q * C0;
    bool found = false;
    for (int bound = 1; bound <= 4 && !found; ++bound)
      for (Eigen::Index j = 0; j < n && !found; ++j)
        for (Eigen::Index k = j + 1; k < n && !found; ++k)
          for (int a = 1; a <= bound && !found; ++a)
            for (int b = -bound; b <= bound && !found; ++b) {
              if (b == 0 || (std::abs(a) < bound && std::abs(b) < bound)) continue;
              const IntVector q = QC.col(j) * Integer(a) + QC.col(k) * Integer(b);
              if (gcd_of(q) != 1) continue;
              IntVector combo = IntVector::Zero(n);
              combo(j) = a;
              combo(k) = b;
              take(combo);
              found = true;
            }
    if (!found) {
      // unimodular completion from the Smith transform of the current span
      const SmithForm sp = smith_normal_form(P);
      const IntMatrix Ui = to_integer(solve_rational(sp.U, to_rational(IntMatrix::Identity(r, r))));
      take(snf.V.leftCols(r) * Ui.col(P.cols()));
    }
  }

  OrbitLattice OL;
  OL.labels = std::move(labels);
  OL.M = M;
  OL.basis = IntMatrix(n, r);
  for (Eigen::Index i = 0; i < r; ++i) OL.basis.col(i) = chosen[static_cast<std::size_t>(i)];
  // P is unimodular; classes in the new basis
  OL.classes = to_integer(solve_rational(P, to_rational(C0)));
  const IntMatrix gram = OL.basis.transpose() * M * OL.basis;
  OL.lattice = IntLattice::from_gram(gram, "Lambda");
  if (OL.classes.transpose() * gram * OL.classes != M)
    throw RankMismatch("class table does not reproduce the intersection matrix");
  return OL;
}

OrbitLattice build_orbit_lattice(const Orbit& orbit, const Embedding& emb, const IntersectionCache* cache) {
  std::vector<std::size_t> order(orbit.curves.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return orbit.curves[a].label < orbit.curves[b].label; });
  std::vector<std::string> labels;
  std::vector<DivisorCurve> divisors;
  std::vector<EmbeddedCurve> embedded;
  for (std::size_t i : order) {
    labels.push_back(orbit.curves[i].label);
    divisors.push_back(orbit.curves[i]);
    embedded.push_back(orbit.embedded[i]);
  }
  const IntMatrix M = intersection_matrix(embedded, emb, cache);
  OrbitLattice OL = quotient_by_radical(M, std::move(labels));
  OL.divisors = std::move(divisors);
  OL.embedded = std::move(embedded);
  return OL;
}

// ---------------------------------------------------------------- classes

IntVector class_of_embedded(const EmbeddedCurve& D, const OrbitLattice& OL, const FiniteField& K) {
  if (OL.embedded.empty()) throw UsageError("orbit lattice carries no curves");
  const auto r = static_cast<Eigen::Index>(OL.rank());
  IntVector v = IntVector::Zero(r);
  for (std::size_t j : OL.support()) {
    const Integer x(static_cast<long>(intersect_embedded(D, OL.embedded[j], K).value));
    for (Eigen::Index i = 0; i < r; ++i) v(i) += OL.basis(static_cast<Eigen::Index>(j), i) * x;
  }
  try {
    return solve_integral(OL.gram(), v, "class_of_divisor");
  } catch (const NonIntegralClass&) {
    throw NonIntegralClass("divisor " + D.label + " has no integral class");
  }
}

IntVector class_of_divisor(const DivisorCurve& D, const OrbitLattice& OL, const Embedding& emb) {
  return class_of_embedded(embed_curve(D, emb), OL, emb.field);
}

IntVector hyperplane_class(const OrbitLattice& OL) {
  const IntVector twos = IntVector::Constant(static_cast<Eigen::Index>(OL.size()), Integer(2));
  const IntVector v = OL.basis.transpose() * twos;
  IntVector l;
  try {
    l = solve_integral(OL.gram(), v, "hyperplane_class");
  } catch (const NonIntegralClass& e) {
    throw NoSolution(e.what());
  }
  if (Integer(l.dot(OL.gram() * l)) != 2) throw NoSolution("hyperplane class does not have square 2");
  const IntVector dots = OL.classes.transpose() * (OL.gram() * l);
  if (dots != twos) throw NoSolution("hyperplane class does not meet every divisor twice");
  return l;
}

// ---------------------------------------------------------------- isometries

bool is_isometry(const IntMatrix& M, const IntMatrix& gram) {
  if (M.rows() != gram.rows() || M.cols() != gram.cols()) return false;
  if (M.transpose() * gram * M != gram) return false;
  const Integer d = det_bareiss(M);
  return d == 1 || d == -1;
}

IsometryRep isometry_matrix(const SurfAut& a, const OrbitLattice& OL, const Embedding& emb) {
  const auto r = static_cast<Eigen::Index>(OL.rank());
  IntMatrix A = IntMatrix::Zero(r, r);
  for (std::size_t j : OL.support()) {
    const IntVector c = class_of_divisor(apply_automorphism(a, OL.divisors[j]), OL, emb);
    for (Eigen::Index i = 0; i < r; ++i) {
      const Integer& coef = OL.basis(static_cast<Eigen::Index>(j), i);
      if (coef != 0) A.col(i) += c * coef;
    }
  }
  if (!is_isometry(A, OL.gram())) throw NotIsometry(a.name() + " does not act as an isometry");
  return {a.name(), a, A};
}

std::vector<SurfAut> g_generators() {
  auto gens = h_surf_generators();
  for (int i = 1; i <= 5; ++i) gens.push_back(SurfAut::tau(i));
  return gens;
}

std::vector<IsometryRep> generator_isometries(const OrbitLattice& OL, const Embedding& emb) {
  std::vector<IsometryRep> r;
  for (const auto& a : g_generators()) r.push_back(isometry_matrix(a, OL, emb));
  return r;
}

SmallMatrix to_small(const IntMatrix& A) {
  SmallMatrix S(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (!A(i, j).fits_slong_p() || abs(A(i, j)) > (Integer(1) << 30)) throw TooLarge("matrix entry too large");
      S(i, j) = A(i, j).get_si();
    }
  return S;
}

IntMatrix to_big(const SmallMatrix& A) {
  return A.unaryExpr([](std::int64_t v) { return Integer(static_cast<long>(v)); });
}

bool SmallMatrixLess::operator()(const SmallMatrix& a, const SmallMatrix& b) const {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

namespace {

SmallMatrix checked_product(const SmallMatrix& a, const SmallMatrix& b) {
  const std::int64_t ma = a.cwiseAbs().maxCoeff(), mb = b.cwiseAbs().maxCoeff();
  if (ma > 0 && mb > 0 && static_cast<double>(ma) * static_cast<double>(mb) * static_cast<double>(a.cols()) > 1e15)
    throw TooLarge("matrix product may overflow");
  return a * b;
}

}  // namespace

MatrixGroup matrix_group_closure(const std::vector<IntMatrix>& generators, std::size_t cap) {
  if (generators.empty()) throw UsageError("matrix_group_closure: no generators");
  MatrixGroup G;
  for (const auto& g : generators) G.generators.push_back(to_small(g));
  const auto n = G.generators[0].rows();
  G.elements.push_back(SmallMatrix::Identity(n, n));
  G.words.push_back({});
  G.index.emplace(G.elements[0], 0);
  for (std::size_t a = 0; a < G.elements.size(); ++a)
    for (std::size_t i = 0; i < G.generators.size(); ++i) {
      SmallMatrix prod = checked_product(G.elements[a], G.generators[i]);
      if (G.index.count(prod)) continue;
      if (G.elements.size() >= cap) throw ClosureBudgetExceeded("matrix group exceeds " + std::to_string(cap) + " elements");
      G.index.emplace(prod, static_cast<int>(G.elements.size()));
      G.elements.push_back(std::move(prod));
      auto w = G.words[a];
      w.push_back(static_cast<int>(i));
      G.words.push_back(std::move(w));
    }
  return G;
}

FiniteGroup MatrixGroup::abstract(int max_order) const {
  if (order() > max_order) throw TooLarge("group too large for a multiplication table");
  auto mul = [](const SmallMatrix& a, const SmallMatrix& b) -> SmallMatrix { return a * b; };
  return FiniteGroup::closure<SmallMatrix, decltype(mul), SmallMatrixLess>(elements[0], generators, mul, nullptr,
                                                                           static_cast<std::size_t>(order()) + 1);
}

// ---------------------------------------------------------------- bundle

std::vector<IntMatrix> LatticeBundle::h_generators() const {
  return {generators.begin(), generators.begin() + n_h_generators};
}

std::vector<IntMatrix> LatticeBundle::gal_generators() const {
  return {generators.begin() + n_h_generators, generators.end()};
}

IntVector LatticeBundle::divisor_class(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw UsageError("unknown divisor label: " + label);
  return classes.col(it - labels.begin());
}

std::string LatticeBundle::to_json() const {
  Json j;
  j["t0"] = t0;
  j["p"] = p;
  j["m"] = m;
  j["labels"] = labels;
  j["gram"] = json_of(gram);
  j["hyperplane"] = json_of(hyperplane);
  j["basis"] = json_of(basis);
  j["classes"] = json_of(classes);
  j["n_h_generators"] = n_h_generators;
  j["psi030"] = json_of(psi030);
  Json gens = Json::array();
  for (std::size_t i = 0; i < generators.size(); ++i)
    gens.push_back({{"name", generator_names[i]}, {"matrix", json_of(generators[i])}});
  j["generators"] = gens;
  return j.dump(1);
}

LatticeBundle LatticeBundle::from_json(const std::string& text) {
  LatticeBundle b;
  try {
    const Json j = Json::parse(text);
    b.t0 = j.at("t0").get<std::string>();
    b.p = j.at("p").get<std::uint64_t>();
    b.m = j.at("m").get<int>();
    b.labels = j.at("labels").get<std::vector<std::string>>();
    b.gram = matrix_from_json(j.at("gram"));
    b.hyperplane = vector_from_json(j.at("hyperplane"));
    b.basis = matrix_from_json(j.at("basis"));
    b.classes = matrix_from_json(j.at("classes"));
    b.n_h_generators = j.at("n_h_generators").get<int>();
    b.psi030 = matrix_from_json(j.at("psi030"));
    for (const auto& g : j.at("generators")) {
      b.generator_names.push_back(g.at("name").get<std::string>());
      b.generators.push_back(matrix_from_json(g.at("matrix")));
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed lattice bundle: ") + e.what());
  }
  const auto r = b.gram.rows();
  if (b.gram.cols() != r || b.hyperplane.size() != r || b.classes.rows() != r ||
      b.classes.cols() != static_cast<Eigen::Index>(b.labels.size()) || b.n_h_generators < 0 ||
      b.n_h_generators > static_cast<int>(b.generators.size()))
    throw UsageError("malformed lattice bundle: inconsistent shapes");
  if (b.psi030.rows() != r || b.psi030.cols() != r) throw UsageError("malformed lattice bundle: psi030 shape");
  for (const auto& g : b.generators)
    if (g.rows() != r || g.cols() != r) throw UsageError("malformed lattice bundle: generator shape");
  return b;
}

LatticeBundle make_bundle(const OrbitLattice& OL, const std::vector<IsometryRep>& gens, const IntVector& hyperplane,
                          const Embedding& emb) {
  LatticeBundle b;
  b.t0 = emb.t0.get_str();
  b.p = emb.field.characteristic();
  b.m = emb.field.degree();
  b.labels = OL.labels;
  b.basis = OL.basis;
  b.classes = OL.classes;
  b.gram = OL.gram();
  b.hyperplane = hyperplane;
  for (const auto& g : gens) {
    b.generator_names.push_back(g.name);
    b.generators.push_back(g.matrix);
    if (g.source.gal == GaloisAut()) ++b.n_h_generators;
  }
  b.psi030 = isometry_matrix(SurfAut::psi(HElem::diagonal(0, 3, 0)), OL, emb).matrix;
  return b;
}

LatticeBundle build_lattice_bundle(const Embedding& emb, const IntersectionCache* cache, OrbitLattice* lattice_out) {
  const Orbit orb = orbit_generate(divisor_catalog(), h_surf_generators(), emb);
  OrbitLattice OL = build_orbit_lattice(orb, emb, cache);
  const auto gens = generator_isometries(OL, emb);
  LatticeBundle b = make_bundle(OL, gens, hyperplane_class(OL), emb);
  if (lattice_out) *lattice_out = std::move(OL);
  return b;
}

}  // namespace k3pic
