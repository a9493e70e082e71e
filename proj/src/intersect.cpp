#include "k3pic/intersect.hpp"

#include "k3pic/groebner.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <deque>
#include <fstream>
#include <random>
#include <sstream>

namespace k3pic {

namespace {

using FF = FiniteField;
using FVal = FF::value_type;
using FRing = PolyRing<FF>;
using FPoly = FRing::Poly;

constexpr int kSaturation = 8;  // above any local length of two conic halves (at most 6)

std::vector<FVal> embed_form(const Form& F, const Embedding& emb) {
  std::vector<FVal> r;
  r.reserve(static_cast<std::size_t>(F.size()));
  for (int i = 0; i < F.size(); ++i) r.push_back(F[i].is_zero() ? 0 : sym_embed(F[i], emb));
  return r;
}

// Ternary form as a polynomial in x, y, z (plus optional extra variables).
FPoly form_poly(const FRing& R, const std::vector<FVal>& c, int degree) {
  std::vector<std::pair<std::vector<int>, FVal>> ts;
  for (int i = 0; i < static_cast<int>(c.size()); ++i) {
    if (c[static_cast<std::size_t>(i)] == 0) continue;
    const auto e = Form::exps_of(degree, i);
    ts.push_back({{e[0], e[1], e[2]}, c[static_cast<std::size_t>(i)]});
  }
  return R.from_terms(ts);
}

struct TernaryForm {
  std::vector<FVal> c;
  int degree;
};

// Dehomogenize at coordinate `one`; the two other coordinates become ring
// variables 0 and 1 in increasing order.
FPoly chart_poly(const FRing& R, const TernaryForm& F, int one) {
  std::vector<std::pair<std::vector<int>, FVal>> ts;
  for (int i = 0; i < static_cast<int>(F.c.size()); ++i) {
    if (F.c[static_cast<std::size_t>(i)] == 0) continue;
    const auto e = Form::exps_of(F.degree, i);
    std::vector<int> ex;
    for (int v = 0; v < 3; ++v)
      if (v != one) ex.push_back(e[static_cast<std::size_t>(v)]);
    ts.push_back({ex, F.c[static_cast<std::size_t>(i)]});
  }
  return R.from_terms(ts);
}

// Degrees of the scheme cut out by the forms on the three strata.
std::array<std::optional<std::uint64_t>, 3> strata_degrees(const FF& K, const std::vector<TernaryForm>& forms,
                                                          const ChartPriority& pr) {
  const FRing R(K, 2);
  std::array<std::optional<std::uint64_t>, 3> out;
  for (int k = 0; k < 3; ++k) {
    const int one = pr[static_cast<std::size_t>(k)];
    std::vector<FPoly> gens;
    for (const auto& F : forms) gens.push_back(chart_poly(R, F, one));
    for (int j = 0; j < k; ++j) {
      const int zero = pr[static_cast<std::size_t>(j)];
      const int ring_var = zero < one ? zero : zero - 1;
      gens.push_back(R.term(R.mono().var(ring_var, kSaturation), K.one()));
    }
    out[static_cast<std::size_t>(k)] = zerodim_degree(R, gens);
  }
  return out;
}


std::string modulus_string(const FF& K) {
  std::string s;
  for (auto c : K.modulus()) s += (s.empty() ? "" : ",") + std::to_string(c);
  return s;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

std::string divisor_key(const std::vector<FVal>& q, const std::vector<FVal>& g, const FF& K) {
  const FRing R(K, 4);
  const FPoly qp = form_poly(R, q, 2);
  const FPoly wg = R.sub(R.var(3), form_poly(R, g, 3));
  const auto basis = groebner(R, std::vector<FPoly>{qp, wg});
  std::ostringstream os;
  for (const auto& p : basis) {
    for (const auto& t : p.terms) {
      os << t.c << ':';
      for (int v = 0; v < 4; ++v) os << t.m.exp(v) << (v < 3 ? "." : " ");
    }
    os << '\n';
  }
  return os.str();
}

EmbeddedCurve embed_curve(const DivisorCurve& D, const Embedding& emb) {
  EmbeddedCurve e;
  e.q = embed_form(D.q, emb);
  e.g = embed_form(D.g, emb);
  e.label = D.label;
  e.key = divisor_key(e.q, e.g, emb.field);
  return e;
}

bool divisor_equal(const DivisorCurve& a, const DivisorCurve& b, const Embedding& emb) {
  if (embed_curve(a, emb).key != embed_curve(b, emb).key) return false;
  return same_curve_symbolic(a, b);
}

IntersectionRecord intersect_embedded(const EmbeddedCurve& a, const EmbeddedCurve& b, const FF& K,
                                      const ChartPriority& priority) {
  IntersectionRecord rec;
  rec.label_a = a.label;
  rec.label_b = b.label;
  if (a.key == b.key) {
    rec.value = -2;  // smooth rational curve
    rec.same_curve = true;
    return rec;
  }
  std::vector<FVal> dg(a.g.size());
  for (std::size_t i = 0; i < dg.size(); ++i) dg[i] = K.sub(a.g[i], b.g[i]);
  const std::vector<TernaryForm> forms{{a.q, 2}, {b.q, 2}, {dg, 3}};
  const auto deg = strata_degrees(K, forms, priority);
  for (int k = 0; k < 3; ++k) {
    const auto& d = deg[static_cast<std::size_t>(k)];
    if (!d) throw CommonComponent("curves " + a.label + " and " + b.label + " share a component");
    rec.charts[static_cast<std::size_t>(k)] = *d;
    rec.value += static_cast<std::int64_t>(*d);
  }
  return rec;
}

std::int64_t intersection_number(const DivisorCurve& a, const DivisorCurve& b, const Embedding& emb) {
  const EmbeddedCurve ea = embed_curve(a, emb), eb = embed_curve(b, emb);
  if (ea.key == eb.key && !same_curve_symbolic(a, b))
    throw VerificationError("embedded keys of " + a.label + " and " + b.label + " collide modulo p");
  return intersect_embedded(ea, eb, emb.field).value;
}

std::int64_t intersection_with_hyperplane(const DivisorCurve& D, const Embedding& emb, std::uint64_t seed) {
  const auto& K = emb.field;
  const EmbeddedCurve e = embed_curve(D, emb);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<FVal> pick(1, static_cast<FVal>(K.order() - 1));
  for (int attempt = 0; attempt < 16; ++attempt) {
    // l = a x + b y + c z; index order of Form(1) is x, y, z
    const std::vector<FVal> line{pick(rng), pick(rng), pick(rng)};
    const auto deg = strata_degrees(K, {{e.q, 2}, {line, 1}}, kDefaultCharts);
    if (!deg[0] || !deg[1] || !deg[2]) continue;  // line is a component of the conic
    const std::int64_t total = static_cast<std::int64_t>(*deg[0] + *deg[1] + *deg[2]);
    if (total != 2) throw VerificationError("hyperplane meets " + D.label + " in degree " + std::to_string(total));
    return total;
  }
  throw VerificationError("no admissible line found for " + D.label);
}

// ---------------------------------------------------------------- cache

IntersectionCache::IntersectionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<std::filesystem::path> IntersectionCache::resolve_dir(const std::optional<std::filesystem::path>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("K3PIC_CACHE_DIR"); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

std::string IntersectionCache::cache_key(const EmbeddedCurve& a, const EmbeddedCurve& b, const Embedding& emb) {
  // order-independent; curve keys guard against stale labels
  const bool swap = std::tie(b.label, b.key) < std::tie(a.label, a.key);
  const EmbeddedCurve& u = swap ? b : a;
  const EmbeddedCurve& v = swap ? a : b;
  std::ostringstream os;
  os << u.label << '\n' << v.label << '\n' << emb.t0.get_str() << '\n' << emb.field.characteristic() << '\n'
     << emb.field.degree() << '\n' << modulus_string(emb.field) << '\n' << u.key << '\n' << v.key;
  return os.str();
}

std::filesystem::path IntersectionCache::path_for(const std::string& key) const {
  return dir_ / (sha256_hex(key) + ".json");
}

std::optional<IntersectionRecord> IntersectionCache::load(const std::string& key) const {
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("key").get<std::string>() != key) return std::nullopt;
    IntersectionRecord r;
    r.label_a = j.at("labels").at(0).get<std::string>();
    r.label_b = j.at("labels").at(1).get<std::string>();
    r.value = j.at("value").get<std::int64_t>();
    const auto cb = j.at("chart_breakdown").get<std::vector<std::uint64_t>>();
    if (cb.size() != 3) return std::nullopt;
    std::int64_t sum = 0;
    for (int k = 0; k < 3; ++k) {
      r.charts[static_cast<std::size_t>(k)] = cb[static_cast<std::size_t>(k)];
      sum += static_cast<std::int64_t>(cb[static_cast<std::size_t>(k)]);
    }
    r.same_curve = r.value == -2 && sum == 0;
    if (!r.same_curve && sum != r.value) return std::nullopt;
    ++hits_;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;  // corrupt entry, recompute
  }
}

void IntersectionCache::store(const std::string& key, const IntersectionRecord& rec, const Embedding& emb) const {
  nlohmann::json j;
  j["key"] = key;
  j["labels"] = {rec.label_a, rec.label_b};
  j["t0"] = emb.t0.get_str();
  j["p"] = emb.field.characteristic();
  j["m"] = emb.field.degree();
  j["modulus"] = emb.field.modulus();
  j["value"] = rec.value;
  j["chart_breakdown"] = rec.charts;
  const auto path = path_for(key);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(1) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

IntMatrix intersection_matrix(const std::vector<EmbeddedCurve>& curves, const Embedding& emb,
                              const IntersectionCache* cache) {
  const auto n = static_cast<Eigen::Index>(curves.size());
  IntMatrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& a = curves[static_cast<std::size_t>(i)];
      const auto& b = curves[static_cast<std::size_t>(j)];
      std::optional<IntersectionRecord> rec;
      std::string key;
      if (cache) {
        key = IntersectionCache::cache_key(a, b, emb);
        rec = cache->load(key);
      }
      if (!rec) {
        rec = intersect_embedded(a, b, emb.field);
        if (cache) cache->store(key, *rec, emb);
      }
      M(i, j) = M(j, i) = Integer(static_cast<long>(rec->value));
    }
  return M;
}

PrimeCheck second_prime_check(const std::vector<DivisorCurve>& curves,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs, const IntMatrix& gram,
                              const Embedding& second) {
  PrimeCheck pc;
  pc.field = second.field.describe();
  std::map<std::size_t, EmbeddedCurve> emb;
  auto get = [&](std::size_t i) -> const EmbeddedCurve& {
    auto it = emb.find(i);
    if (it == emb.end()) it = emb.emplace(i, embed_curve(curves[i], second)).first;
    return it->second;
  };
  for (const auto& [i, j] : pairs) {
    const auto v = intersect_embedded(get(i), get(j), second.field).value;
    ++pc.pairs;
    if (Integer(static_cast<long>(v)) != gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) ++pc.mismatches;
  }
  return pc;
}

// ---------------------------------------------------------------- orbits

std::vector<SurfAut> h_surf_generators() {
  std::vector<SurfAut> r;
  for (const auto& h : h_generators()) r.push_back(SurfAut::psi(h));
  return r;
}

Orbit orbit_generate(const std::vector<DivisorCurve>& seeds, const std::vector<SurfAut>& gens, const Embedding& emb) {
  Orbit orb;
  std::map<std::string, std::vector<std::size_t>> by_key;
  std::deque<std::size_t> queue;

  // returns true if D was new
  auto insert = [&](DivisorCurve D, std::size_t src, const SurfAut& via) {
    EmbeddedCurve e = embed_curve(D, emb);
    auto& bucket = by_key[e.key];
    for (std::size_t idx : bucket) {
      ++orb.symbolic_confirmations;
      if (same_curve_symbolic(orb.curves[idx], D)) return false;
    }
    const std::size_t idx = orb.curves.size();
    bucket.push_back(idx);
    D.label = surf_label(via, seeds[src].label);
    e.label = D.label;
    orb.curves.push_back(std::move(D));
    orb.embedded.push_back(std::move(e));
    orb.source.push_back(src);
    orb.via.push_back(via);
    ++orb.orbit_sizes[seeds[src].label];
    queue.push_back(idx);
    return true;
  };

  for (std::size_t s = 0; s < seeds.size(); ++s) insert(seeds[s], s, SurfAut{});
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      const SurfAut via = g * orb.via[idx];
      insert(apply_automorphism(g, orb.curves[idx]), orb.source[idx], via);
    }
  }
  return orb;
}

}  // namespace k3pic
