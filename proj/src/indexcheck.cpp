#include "k3pic/indexcheck.hpp"

#include "k3pic/jsonio.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace k3pic {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, e = p - 2, b = mod(a, p);
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

std::vector<ModVec> rows_mod(const IntMatrix& A, std::int64_t p) {
  std::vector<ModVec> rows;
  for (Eigen::Index i = 0; i < A.rows(); ++i) rows.push_back(reduce_mod(A.row(i).transpose(), p));
  return rows;
}

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(std::vector<ModVec>& rows, std::int64_t p) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t n = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const std::int64_t inv = inv_mod(rows[r][c], p);
    for (auto& x : rows[r]) x = x * inv % p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const std::int64_t f = rows[i][c];
      for (std::size_t k = 0; k < n; ++k) rows[i][k] = mod(rows[i][k] - f * rows[r][k], p);
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

IntVector lift(const ModVec& v) {
  IntVector r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = Integer(static_cast<long>(v[i]));
  return r;
}

Integer pair(const IntMatrix& G, const IntVector& a, const IntVector& b) { return a.dot(G * b); }

Json json_of_modvecs(const std::vector<ModVec>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(v);
  return a;
}

std::vector<ModVec> modvecs_from_json(const Json& j) {
  std::vector<ModVec> r;
  for (const auto& v : j) r.push_back(v.get<ModVec>());
  return r;
}

std::vector<ModVec> span_elements(const std::vector<ModVec>& basis, std::int64_t p, std::size_t n) {
  std::vector<ModVec> out;
  std::vector<std::int64_t> coef(basis.size(), 0);
  for (;;) {
    ModVec v(n, 0);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t k = 0; k < n; ++k) v[k] = (v[k] + coef[i] * basis[i][k]) % p;
    out.push_back(std::move(v));
    std::size_t i = 0;
    while (i < coef.size() && ++coef[i] == p) coef[i++] = 0;
    if (i == coef.size()) break;
  }
  return out;
}

bool is_zero(const ModVec& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

}  // namespace

// ---------------------------------------------------------------- mod p algebra

ModVec reduce_mod(const IntVector& v, std::int64_t p) {
  ModVec r(static_cast<std::size_t>(v.size()));
  const Integer P(static_cast<long>(p));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Integer x;
    mpz_fdiv_r(x.get_mpz_t(), v(i).get_mpz_t(), P.get_mpz_t());
    r[static_cast<std::size_t>(i)] = x.get_si();
  }
  return r;
}

int rank_mod_p(const std::vector<ModVec>& rows, std::int64_t p) {
  auto copy = rows;
  return static_cast<int>(rref(copy, p).size());
}

std::vector<ModVec> nullspace_mod_p(const IntMatrix& A, std::int64_t p) {
  auto rows = rows_mod(A, p);
  const auto n = static_cast<std::size_t>(A.cols());
  const auto pivots = rref(rows, p);
  std::vector<ModVec> basis;
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    ModVec v(n, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = mod(-rows[i][f], p);
    basis.push_back(std::move(v));
  }
  return basis;
}

ModVec mat_vec_mod(const IntMatrix& A, const ModVec& v, std::int64_t p) { return reduce_mod(A * lift(v), p); }

std::string format_modvec(const ModVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

int valuation(const Integer& det, std::uint64_t p) {
  if (det == 0) throw UsageError("valuation of zero");
  Integer d = abs(det);
  int k = 0;
  while (mpz_divisible_ui_p(d.get_mpz_t(), p)) {
    mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), p);
    ++k;
  }
  return k;
}

std::vector<std::uint64_t> trivial_primes_bound(const Integer& det) {
  if (det == 0) throw UsageError("trivial_primes_bound: degenerate lattice");
  Integer d = abs(det);
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; Integer(static_cast<unsigned long>(p * p)) <= d; ++p) {
    if (p > 10000000) throw TooLarge("determinant too large to factor by trial division");
    int k = 0;
    while (mpz_divisible_ui_p(d.get_mpz_t(), p)) {
      mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), p);
      ++k;
    }
    if (k >= 2) out.push_back(p);
  }
  return out;
}

ModpKernel kernel_mod_p(const IntMatrix& gram, std::int64_t p) {
  if (!is_prime(static_cast<std::uint64_t>(p))) throw UsageError("kernel_mod_p: p must be prime");
  return {p, nullspace_mod_p(gram, p)};
}

bool in_mp_condition(const IntMatrix& gram, const ModVec& v, std::int64_t p) {
  const IntVector x = lift(v);
  Integer n = pair(gram, x, x);
  const Integer m(static_cast<long>(2 * p * p));
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return r == 0;
}

MpSet mp_set(const IntMatrix& gram, std::int64_t p, std::uint64_t max_enumeration) {
  MpSet M;
  M.p = p;
  M.kernel = kernel_mod_p(gram, p);
  double size = 1;
  for (int i = 0; i < M.kernel.dim(); ++i) size *= static_cast<double>(p);
  if (size > static_cast<double>(max_enumeration))
    throw EnumerationTooLarge("k_p has " + std::to_string(size) + " elements");
  for (auto& v : span_elements(M.kernel.basis, p, static_cast<std::size_t>(gram.rows())))
    if (!is_zero(v) && in_mp_condition(gram, v, p)) M.vectors.push_back(std::move(v));
  std::sort(M.vectors.begin(), M.vectors.end());
  return M;
}

std::vector<ModVec> orbit_mod_p(const ModVec& v, const std::vector<IntMatrix>& gens, std::int64_t p) {
  std::set<ModVec> seen{v};
  std::deque<ModVec> queue{v};
  while (!queue.empty()) {
    const ModVec x = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      ModVec y = mat_vec_mod(g, x, p);
      if (seen.insert(y).second) queue.push_back(std::move(y));
    }
  }
  return {seen.begin(), seen.end()};
}

int SpanFilter::h_orbits_within(int d) const {
  return static_cast<int>(
      std::count_if(h_orbits.begin(), h_orbits.end(), [d](const OrbitInfo& o) { return o.span_dim <= d; }));
}

SpanFilter orbit_span_filter(const MpSet& M, const std::vector<IntMatrix>& h_gens, const std::vector<IntMatrix>& g_gens,
                             int dmax) {
  SpanFilter F;
  F.p = M.p;
  F.dmax = dmax;
  const std::set<ModVec> members(M.vectors.begin(), M.vectors.end());
  std::set<ModVec> placed;
  for (const auto& v : M.vectors) {
    if (placed.count(v)) continue;
    OrbitInfo o;
    o.vectors = orbit_mod_p(v, h_gens, M.p);
    for (const auto& w : o.vectors) {
      if (!members.count(w)) throw VerificationFailed("M_" + std::to_string(M.p) + " is not stable under H");
      placed.insert(w);
    }
    o.span_dim = rank_mod_p(o.vectors, M.p);
    F.h_orbits.push_back(std::move(o));
  }
  for (const auto& v : M.vectors) {
    const auto orb = orbit_mod_p(v, g_gens, M.p);
    for (const auto& w : orb)
      if (!members.count(w)) throw VerificationFailed("M_" + std::to_string(M.p) + " is not stable under G");
    if (rank_mod_p(orb, M.p) <= dmax) F.candidates.push_back(v);
  }
  F.candidate_span = F.candidates;
  rref(F.candidate_span, M.p);
  return F;
}

// ---------------------------------------------------------------- obstruction

namespace {

std::optional<ObstructionWitness> pair_witness(const ModVec& v, const LatticeBundle& b) {
  const auto n = static_cast<Eigen::Index>(b.labels.size());
  const IntMatrix& G = b.gram;
  std::map<ModVec, Eigen::Index> by_class;
  for (Eigen::Index j = 0; j < n; ++j) {
    ModVec key;
    for (Eigen::Index i = 0; i < b.classes.rows(); ++i) key.push_back(b.classes(i, j).get_si());
    by_class.emplace(std::move(key), j);
  }
  auto test = [&](Eigen::Index a, Eigen::Index c) -> std::optional<ObstructionWitness> {
    if (a == c) return std::nullopt;
    const IntVector E = b.classes.col(a) - b.classes.col(c);
    if (reduce_mod(E, 2) != v) return std::nullopt;
    const Integer norm = pair(G, E, E), ldot = pair(G, b.hyperplane, E);
    if (norm != -8 || ldot != 0) return std::nullopt;
    ObstructionWitness w;
    w.v = v;
    w.label_a = b.labels[static_cast<std::size_t>(a)];
    w.label_b = b.labels[static_cast<std::size_t>(c)];
    w.class_a = b.classes.col(a);
    w.class_b = b.classes.col(c);
    w.E = E;
    w.e_norm = norm;
    w.l_dot_e = ldot;
    w.a_dot_b = pair(G, w.class_a, w.class_b);
    return w;
  };
  for (Eigen::Index c = 0; c < n; ++c) {
    const IntVector img = b.psi030 * b.classes.col(c);
    ModVec key;
    for (Eigen::Index i = 0; i < img.size(); ++i) key.push_back(img(i).get_si());
    const auto it = by_class.find(key);
    if (it == by_class.end()) continue;
    if (auto w = test(it->second, c)) return w;
  }
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c)
      if (auto w = test(a, c)) return w;
  return std::nullopt;
}

}  // namespace

std::optional<ObstructionWitness> divisibility_obstruction(const ModVec& v, const LatticeBundle& b) {
  if (auto w = pair_witness(v, b)) return w;
  // translate a witness of another element of the G-orbit of v
  std::map<ModVec, ObstructionWitness> reached;
  std::deque<ModVec> queue;
  for (const auto& u : orbit_mod_p(v, b.generators, 2))
    if (auto w = pair_witness(u, b)) {
      queue.push_back(u);
      reached.emplace(u, std::move(*w));
    }
  while (!queue.empty()) {
    const ModVec u = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < b.generators.size(); ++i) {
      const IntMatrix& g = b.generators[i];
      const ObstructionWitness& w = reached.at(u);
      ObstructionWitness x = w;
      x.class_a = g * w.class_a;
      x.class_b = g * w.class_b;
      x.E = x.class_a - x.class_b;
      x.v = reduce_mod(x.E, 2);
      x.label_a = b.generator_names[i] + "*" + w.label_a;
      x.label_b = b.generator_names[i] + "*" + w.label_b;
      if (reached.count(x.v)) continue;
      if (x.v == v) return x;  // isometries keep the norms
      queue.push_back(x.v);
      reached.emplace(x.v, std::move(x));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- verdict

namespace {

const IntMatrix& named_generator(const LatticeBundle& b, const std::string& name) {
  for (std::size_t i = 0; i < b.generators.size(); ++i)
    if (b.generator_names[i] == name) return b.generators[i];
  throw UsageError("bundle has no generator " + name);
}

std::string describe_difference(const std::string& what, const IntVector& E, const LatticeBundle& b,
                                const std::vector<ModVec>& W) {
  const Integer norm = pair(b.gram, E, E), ldot = pair(b.gram, b.hyperplane, E);
  const ModVec v = reduce_mod(E, 2);
  std::vector<ModVec> test = W;
  const int before = rank_mod_p(test, 2);
  test.push_back(v);
  const bool in_w = rank_mod_p(test, 2) == before;
  std::ostringstream os;
  os << what << ": E^2 = " << norm << ", l.E = " << ldot << ", E mod 2 = " << format_modvec(v)
     << (in_w ? " in W" : " outside W");
  return os.str();
}

}  // namespace

IndexVerdict verdict(const LatticeBundle& b) {
  IndexVerdict V;
  V.det = det_bareiss(b.gram);
  V.primes_checked = trivial_primes_bound(V.det);
  for (auto p : V.primes_checked) {
    const auto P = static_cast<std::int64_t>(p);
    V.dmax[P] = valuation(V.det, p) / 2;
    MpSet M = mp_set(b.gram, P);
    SpanFilter F = orbit_span_filter(M, b.h_generators(), b.generators, V.dmax[P]);
    if (!F.candidates.empty()) {
      if (p != 2)
        throw VerificationFailed("unobstructed candidate at p=" + std::to_string(p) + ": " +
                                 format_modvec(F.candidates[0]));
      // every nonzero element of the span, not just the orbit representatives
      for (auto& v : span_elements(F.candidate_span, 2, static_cast<std::size_t>(b.gram.rows()))) {
        if (is_zero(v)) continue;
        auto w = divisibility_obstruction(v, b);
        if (!w) throw VerificationFailed("unobstructed candidate at p=2: " + format_modvec(v));
        V.witnesses.push_back(std::move(*w));
      }
    }
    V.mp_sets.push_back(std::move(M));
    V.filters.push_back(std::move(F));
  }
  V.lambda_is_pic = true;

  V.notes.push_back("the Gram matrix is symmetric, so left and right kernels mod p coincide");
  for (const auto& F : V.filters) {
    std::ostringstream os;
    os << "p = " << F.p << ": " << F.h_orbits.size() << " H-orbits in M_p, sizes/spans";
    for (const auto& o : F.h_orbits) os << ' ' << o.vectors.size() << '/' << o.span_dim;
    os << "; " << F.candidates.size() << " elements with G-orbit span <= " << F.dmax << ", spanning dimension "
       << F.candidate_span.size();
    V.notes.push_back(os.str());
  }
  const auto it = std::find_if(V.filters.begin(), V.filters.end(), [](const SpanFilter& f) { return f.p == 2; });
  if (it != V.filters.end()) {
    const IntMatrix I = IntMatrix::Identity(b.gram.rows(), b.gram.cols());
    const IntMatrix D = b.psi030 - I;
    const IntVector e_b3 = D * b.divisor_class("B3");
    const IntVector e_b4 = D * b.divisor_class("B4");
    const IntMatrix& t2 = named_generator(b, "tau2");
    const IntVector e2 = t2 * t2 * named_generator(b, "psi(x,y)") * e_b4;
    V.notes.push_back(describe_difference("psi(0,3,0)B3 - B3", e_b3, b, it->candidate_span));
    V.notes.push_back(describe_difference("psi(0,3,0)B4 - B4", e_b4, b, it->candidate_span));
    V.notes.push_back(describe_difference("tau2^2 psi(x,y)(psi(0,3,0)B4 - B4)", e2, b, it->candidate_span));
  }
  return V;
}

std::string IndexVerdict::certificate_json(const LatticeBundle& b) const {
  Json j;
  j["kind"] = "k3pic-index-certificate";
  const std::string gram_text = json_of(b.gram).dump();
  j["gram_hash"] = sha256_hex(gram_text);
  j["gram"] = json_of(b.gram);
  j["det"] = json_of(det);
  j["hyperplane"] = json_of(b.hyperplane);
  Json gh = Json::array(), gg = Json::array();
  for (const auto& g : b.h_generators()) gh.push_back(json_of(g));
  for (const auto& g : b.generators) gg.push_back(json_of(g));
  j["h_generators"] = gh;
  j["g_generators"] = gg;
  j["primes_checked"] = primes_checked;
  Json kernels = Json::array(), mps = Json::array(), cands = Json::array(), horb = Json::array();
  for (const auto& M : mp_sets) {
    kernels.push_back({{"p", M.p}, {"dim", M.kernel.dim()}, {"basis", json_of_modvecs(M.kernel.basis)}});
    mps.push_back({{"p", M.p}, {"vectors", json_of_modvecs(M.vectors)}});
  }
  for (const auto& F : filters) {
    cands.push_back({{"p", F.p},
                     {"dmax", F.dmax},
                     {"vectors", json_of_modvecs(F.candidates)},
                     {"span", json_of_modvecs(F.candidate_span)}});
    Json orbs = Json::array();
    for (const auto& o : F.h_orbits) orbs.push_back({{"size", o.vectors.size()}, {"span_dim", o.span_dim}});
    horb.push_back({{"p", F.p}, {"orbits", orbs}, {"within_dmax", F.h_orbits_within(F.dmax)}});
  }
  j["kernels"] = kernels;
  j["mp_sets"] = mps;
  j["h_orbits"] = horb;
  j["candidates"] = cands;
  Json ws = Json::array();
  for (const auto& w : witnesses)
    ws.push_back({{"v", w.v},
                  {"labels", {w.label_a, w.label_b}},
                  {"class_a", json_of(w.class_a)},
                  {"class_b", json_of(w.class_b)},
                  {"E_vector", json_of(w.E)},
                  {"E_norm", json_of(w.e_norm)},
                  {"l_dot_E", json_of(w.l_dot_e)},
                  {"a_dot_b", json_of(w.a_dot_b)}});
  j["witnesses"] = ws;
  j["notes"] = notes;
  j["verdict"] = lambda_is_pic ? "Lambda = Pic" : "inconclusive";
  return j.dump(1);
}

// ---------------------------------------------------------------- independent check

CertificateCheck verify_certificate(const std::string& text) {
  CertificateCheck C;
  auto fail = [&](const std::string& s) { C.failures.push_back(s); };
  try {
    const Json j = Json::parse(text);
    const IntMatrix G = matrix_from_json(j.at("gram"));
    const auto r = G.rows();
    if (G.cols() != r || G != G.transpose()) fail("gram is not square and symmetric");
    if (sha256_hex(json_of(G).dump()) != j.at("gram_hash").get<std::string>()) fail("gram hash mismatch");
    for (Eigen::Index i = 0; i < r; ++i)
      if (G(i, i) % 2 != 0) fail("gram is not even");
    const Integer det = det_bareiss(G);
    if (det != integer_from_json(j.at("det"))) fail("determinant mismatch");
    if (det == 0) throw UsageError("degenerate gram");

    const IntVector l = vector_from_json(j.at("hyperplane"));
    if (l.size() != r || pair(G, l, l) != 2) fail("hyperplane class does not have square 2");
    std::vector<IntMatrix> hg, gg;
    for (const auto& m : j.at("h_generators")) hg.push_back(matrix_from_json(m));
    for (const auto& m : j.at("g_generators")) gg.push_back(matrix_from_json(m));
    for (const auto& m : gg) {
      if (!is_isometry(m, G)) fail("a generator is not an isometry");
      else if (m * l != l) fail("a generator moves the hyperplane class");
    }

    // primes: every p with p^2 | det is covered, with dmax = v_p(det) / 2
    const auto needed = trivial_primes_bound(det);
    const auto listed = j.at("primes_checked").get<std::vector<std::uint64_t>>();
    for (auto p : needed)
      if (std::find(listed.begin(), listed.end(), p) == listed.end()) fail("prime " + std::to_string(p) + " not checked");

    std::map<std::int64_t, std::vector<ModVec>> mp_by_p, kernel_by_p;
    for (const auto& k : j.at("kernels")) {
      const auto p = k.at("p").get<std::int64_t>();
      const auto basis = modvecs_from_json(k.at("basis"));
      for (const auto& v : basis)
        if (!is_zero(mat_vec_mod(G, v, p))) fail("kernel vector " + format_modvec(v) + " is not in k_" + std::to_string(p));
      std::vector<ModVec> grows;
      for (Eigen::Index i = 0; i < r; ++i) grows.push_back(reduce_mod(G.row(i).transpose(), p));
      if (rank_mod_p(basis, p) != static_cast<int>(basis.size()) ||
          static_cast<int>(basis.size()) != r - rank_mod_p(grows, p))
        fail("k_" + std::to_string(p) + " basis has the wrong dimension");
      kernel_by_p[p] = basis;
    }
    for (const auto& m : j.at("mp_sets")) {
      const auto p = m.at("p").get<std::int64_t>();
      auto listed_vs = modvecs_from_json(m.at("vectors"));
      std::vector<ModVec> expect;
      for (auto& v : span_elements(kernel_by_p[p], p, static_cast<std::size_t>(r)))
        if (!is_zero(v) && in_mp_condition(G, v, p)) expect.push_back(std::move(v));
      std::sort(expect.begin(), expect.end());
      std::sort(listed_vs.begin(), listed_vs.end());
      if (expect != listed_vs) fail("M_" + std::to_string(p) + " does not match its definition");
      mp_by_p[p] = expect;
    }
    for (auto p : needed)
      if (!mp_by_p.count(static_cast<std::int64_t>(p))) fail("no M_p for p = " + std::to_string(p));

    std::map<std::int64_t, std::vector<ModVec>> spans;
    for (const auto& c : j.at("candidates")) {
      const auto p = c.at("p").get<std::int64_t>();
      const int dmax = c.at("dmax").get<int>();
      if (dmax != valuation(det, static_cast<std::uint64_t>(p)) / 2) fail("dmax for p = " + std::to_string(p) + " is wrong");
      std::vector<ModVec> expect;
      for (const auto& v : mp_by_p[p])
        if (rank_mod_p(orbit_mod_p(v, gg, p), p) <= dmax) expect.push_back(v);
      auto listed_c = modvecs_from_json(c.at("vectors"));
      std::sort(listed_c.begin(), listed_c.end());
      if (expect != listed_c) fail("candidate list for p = " + std::to_string(p) + " is incomplete or wrong");
      auto span = expect;
      rref(span, p);
      spans[p] = span;
    }

    // every nonzero element of each candidate span needs a witness (p = 2 only)
    std::map<ModVec, bool> covered;
    for (const auto& w : j.at("witnesses")) {
      const ModVec v = w.at("v").get<ModVec>();
      const IntVector a = vector_from_json(w.at("class_a")), b = vector_from_json(w.at("class_b"));
      const IntVector E = vector_from_json(w.at("E_vector"));
      const std::string who = w.at("labels").dump();
      bool good = true;
      auto bad = [&](const std::string& s) {
        fail("witness " + who + ": " + s);
        good = false;
      };
      if (E != a - b) bad("E is not the difference of the two classes");
      if (pair(G, a, a) != -2 || pair(G, b, b) != -2) bad("a class does not have square -2");
      if (pair(G, l, a) != 2 || pair(G, l, b) != 2) bad("a class does not meet the hyperplane twice");
      if (pair(G, E, E) != -8 || integer_from_json(w.at("E_norm")) != -8) bad("E^2 is not -8");
      if (pair(G, l, E) != 0 || integer_from_json(w.at("l_dot_E")) != 0) bad("l.E is not 0");
      // -8 = -2 - 2 - 2 a.b
      if (pair(G, a, b) != 2 || integer_from_json(w.at("a_dot_b")) != 2) bad("a.b is not 2");
      if (reduce_mod(E, 2) != v) bad("E is not congruent to v mod 2");
      if (good) covered[v] = true;
    }
    for (const auto& [p, span] : spans) {
      for (const auto& v : span_elements(span, p, static_cast<std::size_t>(r))) {
        if (is_zero(v)) continue;
        if (p != 2) fail("candidate " + format_modvec(v) + " at p = " + std::to_string(p) + " has no obstruction rule");
        else if (!covered.count(v)) fail("uncovered candidate " + format_modvec(v));
      }
    }
    if (j.at("verdict").get<std::string>() != "Lambda = Pic") fail("verdict is not Lambda = Pic");
  } catch (const std::exception& e) {
    fail(std::string("malformed certificate: ") + e.what());
  }
  C.ok = C.failures.empty();
  return C;
}

}  // namespace k3pic
