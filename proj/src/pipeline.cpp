#include "k3pic/pipeline.hpp"

#include "k3pic/cohomology.hpp"
#include "k3pic/indexcheck.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

namespace k3pic {

namespace {

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> s{Stage::Catalog, Stage::Orbit,  Stage::Gram,       Stage::Lattice,
                                    Stage::Nikulin, Stage::Index,  Stage::Galois,     Stage::Cohomology,
                                    Stage::Fibers,  Stage::Tritangent, Stage::Inose};
  return s;
}

std::vector<Stage> prerequisites(Stage s) {
  switch (s) {
    case Stage::Orbit: return {Stage::Catalog};
    case Stage::Gram: return {Stage::Orbit};
    case Stage::Lattice: return {Stage::Gram};
    case Stage::Nikulin:
    case Stage::Index:
    case Stage::Galois:
    case Stage::Cohomology: return {Stage::Lattice};
    default: return {};
  }
}

Json json_of_u64s(const std::vector<std::uint64_t>& v) { return Json(v); }

Json json_of_ints(const std::vector<Integer>& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(json_of(x));
  return j;
}

// Everything the stages share; filled in dependency order.
struct Context {
  const RunConfig& cfg;
  Rational t0;
  std::optional<Embedding> emb;
  std::optional<IntersectionCache> cache;
  std::vector<DivisorCurve> catalog;
  std::optional<Orbit> orbit;
  std::optional<OrbitLattice> OL;
  std::optional<LatticeBundle> bundle;
  std::string certificate;

  const Embedding& embedding() {
    if (!emb) {
      const std::uint64_t p = cfg.p.value_or(79);
      const int m = cfg.m.value_or(2);
      try {
        emb = make_embedding(t0, p, m);
      } catch (const BadReduction&) {
        if (cfg.p) throw;
        emb = embedding_search(t0, p);
      } catch (const UsageError&) {
        if (cfg.p) throw;
        emb = embedding_search(t0, p);
      }
    }
    return *emb;
  }
  const IntersectionCache* cache_ptr() { return cache ? &*cache : nullptr; }
};

Json stage_catalog(Context& c) {
  c.catalog = divisor_catalog();
  Json list = Json::array();
  for (const auto& D : c.catalog) {
    const bool bit = D.bitangent(), smooth = D.smooth_conic();
    if (!bit) throw VerificationError(D.label + " is not bitangent to the branch sextic");
    if (!smooth) throw VerificationError(D.label + " has a singular conic");
    list.push_back({{"label", D.label}, {"conic", D.q.format()}, {"cubic", D.g.format()}, {"bitangent", bit},
                    {"smooth_conic", smooth}});
  }
  return {{"equation", fiber_equation().format()}, {"divisors", list}};
}

Json stage_orbit(Context& c) {
  c.orbit = orbit_generate(c.catalog, h_surf_generators(), c.embedding());
  std::vector<std::string> labels;
  for (const auto& D : c.orbit->curves) labels.push_back(D.label);
  std::sort(labels.begin(), labels.end());
  Json sizes;
  for (const auto& [label, n] : c.orbit->orbit_sizes) sizes[label] = n;
  return {{"field", c.embedding().describe()},
          {"size", c.orbit->curves.size()},
          {"contributions", sizes},
          {"symbolic_confirmations", c.orbit->symbolic_confirmations},
          {"labels", labels}};
}

Json stage_gram(Context& c) {
  c.OL = build_orbit_lattice(*c.orbit, c.embedding(), c.cache_ptr());
  const IntMatrix& M = c.OL->M;
  bool minus_two = true;
  for (Eigen::Index i = 0; i < M.rows(); ++i) minus_two = minus_two && M(i, i) == -2;
  if (M != M.transpose()) throw VerificationError("intersection matrix is not symmetric");
  if (!minus_two) throw VerificationError("some divisor does not have self-intersection -2");
  Json j{{"size", M.rows()},
         {"symmetric", true},
         {"diagonal_minus_two", minus_two},
         {"rank", rank_of(M)},
         {"sha256", sha256_hex(json_of(M).dump())}};
  if (c.cfg.second_prime) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> pick(0, c.OL->size() - 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    while (pairs.size() < 10) {
      const std::size_t a = pick(rng), b = pick(rng);
      if (a != b) pairs.emplace_back(a, b);
    }
    const Embedding second = embedding_search(c.t0, c.embedding().field.characteristic() + 1);
    const PrimeCheck pc = second_prime_check(c.OL->divisors, pairs, M, second);
    j["second_prime"] = {{"field", pc.field}, {"pairs", pc.pairs}, {"mismatches", pc.mismatches}};
    if (!pc.ok()) throw VerificationError("intersection numbers differ at the second prime " + pc.field);
  }
  return j;
}

Json stage_lattice(Context& c) {
  const auto gens = generator_isometries(*c.OL, c.embedding());
  c.bundle = make_bundle(*c.OL, gens, hyperplane_class(*c.OL), c.embedding());
  const auto inv = invariants(c.OL->lattice);
  const auto disc = discriminant_group(c.OL->lattice);
  return {{"rank", inv.rank},
          {"signature", {inv.sig.pos, inv.sig.neg}},
          {"det", json_of(inv.det)},
          {"even", inv.even},
          {"discriminant_group", json_of_ints(disc.invariants)},
          {"gram", json_of(c.bundle->gram)},
          {"hyperplane", json_of(c.bundle->hyperplane)},
          {"bundle", Json::parse(c.bundle->to_json())}};
}

Json stage_nikulin(Context& c) {
  const NikulinResult r = nikulin_equivalent(c.OL->lattice, target_lattice());
  const int rank = c.OL->rank();
  const char* outcome = r.outcome == NikulinOutcome::Equivalent      ? "equivalent"
                        : r.outcome == NikulinOutcome::NotEquivalent ? "not_equivalent"
                                                                     : "inapplicable";
  std::ostringstream margin;
  margin << r.length << "<" << rank - 2 << "=" << rank << "-2";
  return {{"target", "U+E8(-1)+A5(-1)+A2(-1)+A2(-4)"},
          {"outcome", outcome},
          {"certified", r.certified()},
          {"length", r.length},
          {"margin", margin.str()},
          {"applicable", r.length < rank - 2},
          {"reason", r.reason}};
}

Json stage_index(Context& c) {
  const IndexVerdict V = verdict(*c.bundle);
  c.certificate = V.certificate_json(*c.bundle);
  const CertificateCheck chk = verify_certificate(c.certificate);
  if (!chk.ok) throw VerificationError("fresh certificate rejected: " + chk.failures.front());
  Json primes = Json::array();
  for (std::size_t i = 0; i < V.primes_checked.size(); ++i) {
    const auto p = static_cast<std::int64_t>(V.primes_checked[i]);
    const auto& M = V.mp_sets[i];
    const auto& F = V.filters[i];
    Json orbits = Json::array();
    for (const auto& o : F.h_orbits) orbits.push_back({{"size", o.vectors.size()}, {"span", o.span_dim}});
    primes.push_back({{"p", p},
                      {"kernel_dim", M.kernel.dim()},
                      {"mp_size", M.vectors.size()},
                      {"dmax", V.dmax.at(p)},
                      {"h_orbits", orbits},
                      {"candidates", F.candidates.size()},
                      {"candidate_span", F.candidate_span.size()}});
  }
  Json wit = Json::array();
  for (const auto& w : V.witnesses)
    wit.push_back({{"residue", format_modvec(w.v)},
                   {"divisors", {w.label_a, w.label_b}},
                   {"E_norm", json_of(w.e_norm)},
                   {"l_dot_E", json_of(w.l_dot_e)}});
  return {{"verdict", V.lambda_is_pic ? "Lambda = Pic" : "undecided"},
          {"det", json_of(V.det)},
          {"primes", primes},
          {"witnesses", wit},
          {"notes", V.notes},
          {"certificate_sha256", sha256_hex(c.certificate)},
          {"certificate_verified", chk.ok}};
}

Json stage_galois(Context& c) {
  const GroupReport g = group_abstract_check();
  const MatrixGroup H = matrix_group_closure(c.bundle->h_generators());
  const MatrixGroup Gal = matrix_group_closure(c.bundle->gal_generators());
  const FiniteGroup model = direct_product(symmetric_group(3), direct_product(cyclic_group(2), dihedral_group(4)));
  const bool h_iso = find_isomorphism(H.abstract(), h_group()).has_value();
  const bool gal_iso = find_isomorphism(Gal.abstract(), model).has_value();
  if (!g.ok()) throw VerificationError("abstract group structure check failed");
  return {{"abstract",
           {{"order_H1", g.order_h1},
            {"order_H2", g.order_h2},
            {"order_H", g.order_h},
            {"order_Gal", g.order_gal},
            {"H1_is_S3", g.h1_is_s3},
            {"H2_is_Z2xZ2xZ6", g.h2_is_z2z2z6},
            {"H_semidirect", g.h_semidirect},
            {"Gal_is_S3xZ2xD4", g.gal_is_s3_z2_d4},
            {"Gal_abelianization", json_of_u64s(g.gal_abelianization)}}},
          {"lattice_images",
           {{"H_order", H.order()},
            {"H_isomorphic_to_abstract", h_iso},
            {"H_faithful", h_iso && H.order() == g.order_h},
            {"Gal_order", Gal.order()},
            {"Gal_isomorphic_to_S3xZ2xD4", gal_iso},
            {"Gal_faithful", gal_iso && Gal.order() == g.order_gal}}}};
}

Json stage_cohomology(Context& c) {
  const GroupRep G = galois_rep(*c.bundle);
  const Subgroup S = subgroup_generated(G, G.table.small_generating_set());
  CohomologyReport full = cohomology_report(G, S, true);
  full.id = "Gal";
  const IntVector gen = full.h0_basis.col(0);
  const bool is_l = full.h0_rank == 1 && (gen == c.bundle->hyperplane || gen == IntVector(-c.bundle->hyperplane));
  const SweepSummary sweep = subgroup_sweep(G, parse_sweep_mode(c.cfg.subgroup_mode));
  return {{"group_order", G.order()},
          {"h0", {{"rank", full.h0_rank}, {"generator", json_of(gen)}, {"is_hyperplane_class", is_l}}},
          {"h1", full.h1},
          {"h2", *full.h2},
          {"h2_method", full.methods.back()},
          {"sweep", sweep.to_json()}};
}

Json stage_fibers(Context& c) {
  const FiberClass fc = classify_fiber(c.t0);
  Json j{{"t0", c.t0.get_str()}, {"smooth", fc.smooth}, {"singular_degree", fc.singular_degree}, {"class", fc.describe()}};
  if (!fc.smooth) {
    // node coordinates over F_{p^2} with p = 79 unless overridden
    const Embedding ref = make_embedding(Rational(7), c.cfg.p.value_or(79), c.cfg.m.value_or(2));
    const FiberClass nodes = classify_fiber(SymElem(c.t0), ref);
    const auto& K = ref.field;
    const auto z6 = K.pow(ref.zeta12, 2);
    Json pts = Json::array();
    int n_nodes = 0;
    for (const auto& p : nodes.points) {
      Json pj{{"coords", {p.coords[0], p.coords[1], p.coords[2]}}, {"node", p.node}};
      n_nodes += p.node;
      if (p.coords[0] == 1) {
        int je = -1, ke = -1;
        for (int e = 0; e < 6; ++e) {
          if (K.pow(z6, static_cast<std::uint64_t>(e)) == p.coords[1]) je = e;
          if (K.pow(z6, static_cast<std::uint64_t>(e)) == p.coords[2]) ke = e;
        }
        if (je >= 0 && ke >= 0) pj["zeta6_exponents"] = {je, ke};
      }
      pts.push_back(std::move(pj));
    }
    j["class"] = nodes.describe();
    j["coordinate_field"] = ref.describe();
    j["nodes"] = n_nodes;
    j["points"] = std::move(pts);
  }
  return j;
}

Json stage_tritangent(Context& c) {
  const Embedding e = embedding_search(c.t0, 50);
  const TritangentReport r = tritangent_check(c.t0, e);
  const Rational t = c.t0;
  const Rational poly = t * (t * t * t + 125) * (8 * t * t * t + 35937);
  Json j{{"t0", t.get_str()}, {"field", e.describe()}, {"polynomial_value", poly.get_str()}};
  if (r.count) {
    j["count"] = *r.count;
    const bool consistent = (*r.count > 0) == (poly == 0);
    j["consistent"] = consistent;
    if (!consistent) throw VerificationError("tri-tangent lines disagree with the root polynomial at t0 = " + t.get_str());
  } else {
    j["count"] = nullptr;
  }
  return j;
}

Json stage_inose() {
  const InoseReport r = verify_inose();
  if (!r.ok()) throw VerificationError("an Inose identity fails");
  return {{"cremona", r.cremona},   {"projection", r.projection}, {"cover", r.cover},
          {"shift", r.shift},       {"j_invariants", r.j_invariants}, {"ok", r.ok()}};
}

Json run_stage(Stage s, Context& c) {
  switch (s) {
    case Stage::Catalog: return stage_catalog(c);
    case Stage::Orbit: return stage_orbit(c);
    case Stage::Gram: return stage_gram(c);
    case Stage::Lattice: return stage_lattice(c);
    case Stage::Nikulin: return stage_nikulin(c);
    case Stage::Index: return stage_index(c);
    case Stage::Galois: return stage_galois(c);
    case Stage::Cohomology: return stage_cohomology(c);
    case Stage::Fibers: return stage_fibers(c);
    case Stage::Tritangent: return stage_tritangent(c);
    case Stage::Inose: return stage_inose();
  }
  throw UsageError("unknown stage");
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Json summary(const Json& stages) {
  Json s = Json::object();
  if (stages.contains("lattice") && stages["lattice"].value("ok", false)) {
    const auto& L = stages["lattice"];
    s["rank"] = L["rank"];
    s["signature"] = L["signature"];
    s["det"] = L["det"];
    s["discriminant_group"] = L["discriminant_group"];
    const bool thm = L["rank"] == 19 && L["signature"] == Json({1, 18}) && (L["det"] == 864 || L["det"] == -864) &&
                     L["discriminant_group"] == Json({6, 12, 12});
    s["main_theorem"] = thm;
  }
  if (stages.contains("nikulin") && stages["nikulin"].value("ok", false))
    s["nikulin_equivalent"] = stages["nikulin"]["outcome"] == "equivalent";
  if (stages.contains("index") && stages["index"].value("ok", false)) s["index_verdict"] = stages["index"]["verdict"];
  if (stages.contains("cohomology") && stages["cohomology"].value("ok", false)) {
    const auto& C = stages["cohomology"];
    s["h1"] = C["h1"];
    s["h2"] = C["h2"];
    s["sweep_trivial_h1"] = C["sweep"]["trivial_h1"];
    s["sweep_nontrivial_h1"] = C["sweep"]["nontrivial_h1"];
  }
  return s;
}

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> n{"catalog", "orbit",      "gram",   "lattice",    "nikulin", "index",
                                          "galois",  "cohomology", "fibers", "tritangent", "inose"};
  return n;
}

Stage parse_stage(const std::string& name) {
  const auto& n = stage_names();
  const auto it = std::find(n.begin(), n.end(), name);
  if (it == n.end()) throw UsageError("unknown stage '" + name + "'");
  return all_stages()[static_cast<std::size_t>(it - n.begin())];
}

std::string stage_name(Stage s) { return stage_names()[static_cast<std::size_t>(s)]; }

Rational RunConfig::t0_value() const { return parse_rational(t0); }

std::vector<Stage> RunConfig::resolved_stages() const {
  std::set<Stage> want;
  std::vector<Stage> todo;
  if (stages.empty())
    todo = all_stages();
  else
    for (const auto& s : stages) todo.push_back(parse_stage(s));
  while (!todo.empty()) {
    const Stage s = todo.back();
    todo.pop_back();
    if (!want.insert(s).second) continue;
    for (Stage d : prerequisites(s)) todo.push_back(d);
  }
  return {want.begin(), want.end()};  // enum order is a dependency order
}

void RunConfig::validate() const {
  t0_value();
  resolved_stages();
  parse_sweep_mode(subgroup_mode);
  if (m && (*m < 1 || *m > 2)) throw UsageError("extension degree m must be 1 or 2");
  if (p && (*p < 5 || !is_prime(*p))) throw UsageError("p must be a prime >= 5");
}

Json RunConfig::to_json() const {
  Json j{{"t0", t0}};
  j["p"] = p ? Json(*p) : Json(nullptr);
  j["m"] = m ? Json(*m) : Json(nullptr);
  Json st = Json::array();
  for (Stage s : resolved_stages()) st.push_back(stage_name(s));
  j["stages"] = st;
  j["cache_dir"] = cache_dir ? Json(cache_dir->string()) : Json(nullptr);
  j["second_prime"] = second_prime;
  j["subgroup_mode"] = subgroup_mode;
  return j;
}

RunResult run(const RunConfig& config) {
  RunResult res;
  Json report{{"tool", "k3pic"}, {"version", kVersion}, {"generated_at", timestamp()}};
  try {
    config.validate();
  } catch (const UsageError& e) {
    report["error"] = e.what();
    report["exit_code"] = 2;
    res.report = std::move(report);
    res.exit_code = 2;
    return res;
  }
  report["config"] = config.to_json();
  Context ctx{config, config.t0_value(), {}, {}, {}, {}, {}, {}, {}};
  Json stages = Json::object();
  int code = 0;
  try {
    if (const auto dir = IntersectionCache::resolve_dir(config.cache_dir)) ctx.cache.emplace(*dir);
  } catch (const std::exception& e) {
    report["error"] = std::string("cache: ") + e.what();
    code = 2;
  }
  if (code == 0)
    for (Stage s : config.resolved_stages()) {
      const std::string name = stage_name(s);
      try {
        Json data = run_stage(s, ctx);
        Json entry{{"ok", true}};
        entry.update(data);
        stages[name] = std::move(entry);
      } catch (const VerificationError& e) {
        stages[name] = {{"ok", false}, {"error", e.what()}};
        code = 1;
      } catch (const UsageError& e) {
        stages[name] = {{"ok", false}, {"error", e.what()}};
        code = 2;
      } catch (const std::exception& e) {
        stages[name] = {{"ok", false}, {"error", e.what()}};
        code = 2;
      }
      if (code != 0) break;
    }
  report["stages"] = stages;
  report["summary"] = summary(stages);
  if (code == 0 && report["summary"].contains("main_theorem") && !report["summary"]["main_theorem"].get<bool>())
    code = 1;
  report["exit_code"] = code;
  res.report = std::move(report);
  res.exit_code = code;
  res.certificate = std::move(ctx.certificate);
  return res;
}

Json strip_volatile(Json report) {
  report.erase("generated_at");
  return report;
}

}  // namespace k3pic
