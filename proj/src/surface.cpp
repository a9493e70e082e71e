#include "k3pic/surface.hpp"

#include "k3pic/groebner.hpp"

#include <map>
#include <mutex>
#include <set>

namespace k3pic {

// ---------------------------------------------------------------- forms

Form::Form(int degree) : d_(degree), c_(static_cast<std::size_t>(size_of(degree))) {
  if (degree < 0) throw UsageError("negative form degree");
}

std::array<int, 3> Form::exps_of(int d, int idx) {
  int s = 0;
  while ((s + 1) * (s + 2) / 2 <= idx) ++s;
  const int j = s - (idx - s * (s + 1) / 2);
  const int i = d - s;
  return {i, j, d - i - j};
}

SymElem& Form::at(int i, int j, int k) {
  if (i + j + k != d_ || i < 0 || j < 0 || k < 0) throw UsageError("monomial degree mismatch");
  return c_[static_cast<std::size_t>(index(d_, i, j))];
}
const SymElem& Form::at(int i, int j, int k) const { return const_cast<Form*>(this)->at(i, j, k); }

Form Form::operator+(const Form& o) const {
  if (d_ != o.d_) throw UsageError("adding forms of different degree");
  Form r(d_);
  for (int i = 0; i < size(); ++i) r[i] = (*this)[i] + o[i];
  return r;
}
Form Form::operator-(const Form& o) const {
  if (d_ != o.d_) throw UsageError("subtracting forms of different degree");
  Form r(d_);
  for (int i = 0; i < size(); ++i) r[i] = (*this)[i] - o[i];
  return r;
}
Form Form::operator-() const {
  return map([](const SymElem& c) { return -c; });
}
Form Form::operator*(const SymElem& s) const {
  return map([&](const SymElem& c) { return c * s; });
}
Form Form::operator*(const Form& o) const {
  Form r(d_ + o.d_);
  for (int a = 0; a < size(); ++a) {
    if ((*this)[a].is_zero()) continue;
    const auto ea = exps(a);
    for (int b = 0; b < o.size(); ++b) {
      if (o[b].is_zero()) continue;
      const auto eb = o.exps(b);
      r[index(r.d_, ea[0] + eb[0], ea[1] + eb[1])] += (*this)[a] * o[b];
    }
  }
  return r;
}
bool Form::is_zero() const {
  for (const auto& c : c_)
    if (!c.is_zero()) return false;
  return true;
}

std::string Form::format() const {
  static const char* names[3] = {"x", "y", "z"};
  std::string s;
  for (int idx = 0; idx < size(); ++idx) {
    if ((*this)[idx].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + (*this)[idx].format() + ")";
    const auto e = exps(idx);
    for (int v = 0; v < 3; ++v) {
      if (e[static_cast<std::size_t>(v)] == 0) continue;
      s += std::string("*") + names[v];
      if (e[static_cast<std::size_t>(v)] > 1) s += "^" + std::to_string(e[static_cast<std::size_t>(v)]);
    }
  }
  return s.empty() ? "0" : s;
}

Form reduce_mod_conic(const Form& F, const Form& q) {
  if (q.degree() != 2) throw UsageError("reduce_mod_conic expects a quadratic form");
  int v = -1;
  for (int cand : {2, 1, 0}) {
    std::array<int, 3> e{0, 0, 0};
    e[static_cast<std::size_t>(cand)] = 2;
    if (!q.at(e[0], e[1], e[2]).is_zero()) {
      v = cand;
      break;
    }
  }
  if (v < 0) throw UsageError("conic without square terms");
  std::array<int, 3> sq{0, 0, 0};
  sq[static_cast<std::size_t>(v)] = 2;
  const SymElem lead_inv = q.at(sq[0], sq[1], sq[2]).inverse();
  Form r = F;
  for (int e = F.degree(); e >= 2; --e) {
    for (int idx = 0; idx < r.size(); ++idx) {
      const auto m = r.exps(idx);
      if (m[static_cast<std::size_t>(v)] != e || r[idx].is_zero()) continue;
      const SymElem c = r[idx] * lead_inv;
      std::array<int, 3> base = m;
      base[static_cast<std::size_t>(v)] -= 2;
      for (int k = 0; k < q.size(); ++k) {
        if (q[k].is_zero()) continue;
        const auto qe = q.exps(k);
        const int target = Form::index(r.degree(), base[0] + qe[0], base[1] + qe[1]);
        if (target == idx)
          r[target] = SymElem();
        else
          r[target] -= c * q[k];
      }
    }
  }
  return r;
}

bool in_conic_ideal(const Form& F, const Form& q) { return reduce_mod_conic(F, q).is_zero(); }

// ---------------------------------------------------------------- family

namespace {

Form sextic_with(const SymElem& t) {
  Form f(6);
  f.at(6, 0, 0) = SymElem(Rational(1));
  f.at(0, 6, 0) = SymElem(Rational(1));
  f.at(0, 0, 6) = SymElem(Rational(1));
  f.at(2, 2, 2) = t;
  return f;
}

}  // namespace

const Form& generic_sextic() {
  static const Form f = sextic_with(SymElem::t());
  return f;
}

FamilyEquation fiber_equation(std::optional<Rational> t0) {
  FamilyEquation eq;
  eq.t0 = t0;
  eq.sextic = t0 ? sextic_with(SymElem(*t0)) : generic_sextic();
  return eq;
}

std::string FamilyEquation::branch_format() const {
  std::string tt = t0 ? t0->get_str() : "t";
  if (t0 && *t0 == 0) return "x^6 + y^6 + z^6";
  if (t0 && *t0 == 1) return "x^6 + y^6 + z^6 + x^2*y^2*z^2";
  if (t0 && *t0 < 0) return "x^6 + y^6 + z^6 - " + Rational(-*t0).get_str() + "*x^2*y^2*z^2";
  return "x^6 + y^6 + z^6 + " + tt + "*x^2*y^2*z^2";
}

std::string FamilyEquation::format() const { return "w^2 = " + branch_format(); }

// ---------------------------------------------------------------- curves

bool DivisorCurve::bitangent() const {
  if (q.degree() != 2 || g.degree() != 3) return false;
  return in_conic_ideal(generic_sextic() - g * g, q);
}

SymElem DivisorCurve::conic_det() const {
  const SymElem half(Rational(1, 2));
  const SymElem a = q.at(2, 0, 0), d = q.at(0, 2, 0), f = q.at(0, 0, 2);
  const SymElem b = q.at(1, 1, 0) * half, c = q.at(1, 0, 1) * half, e = q.at(0, 1, 1) * half;
  // det [[a b c] [b d e] [c e f]]
  return a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c);
}

bool DivisorCurve::smooth_conic() const { return !conic_det().is_zero(); }

bool same_curve_symbolic(const DivisorCurve& a, const DivisorCurve& b) {
  int k = -1;
  for (int i = 0; i < a.q.size(); ++i)
    if (!a.q[i].is_zero()) {
      k = i;
      break;
    }
  if (k < 0 || b.q[k].is_zero()) return false;
  for (int i = 0; i < a.q.size(); ++i)
    if (a.q[i] * b.q[k] != b.q[i] * a.q[k]) return false;
  return in_conic_ideal(a.g - b.g, a.q);
}

const DivisorConstants& divisor_constants() {
  static const DivisorConstants k = [] {
    const SymElem t = SymElem::t();
    const SymElem c0 = sym::c(0);
    const SymElem z12 = sym::zeta(12), z6 = sym::zeta(6), z3 = sym::zeta(3);
    const SymElem b0 = sym::beta(0), b1 = sym::beta(1), b2 = sym::beta(2);
    const RatFunc t3p27 = RatFunc(QPoly({27, 0, 0, 1}));
    const RatFunc inv4 = RatFunc(Rational(1)) / (t3p27 * RatFunc(Rational(4)));
    const RatFunc inv8 = RatFunc(Rational(1)) / (t3p27 * RatFunc(Rational(8)));
    DivisorConstants r;
    r.a4 = (c0 * Rational(9) + t * Rational(6)) * inv4 * sym::delta();
    r.b4 = -(c0 * c0) - t * c0;
    // the delta factor is needed for f - g^2 to vanish on the conic
    r.c4 = (SymElem(Rational(18)) - t * t * c0 * Rational(3) - t * c0 * c0 * Rational(3)) * inv8 * sym::delta();
    const SymElem two(Rational(2));
    r.a5 = z12 * (two - z6) * Rational(1, 9) * (b0 * b1 + b0 * b2 + b1 * b2 + t);
    r.c5 = z12 * (z6 - two) * Rational(1, 3);
    r.r5 = z12 * (z6 - two) * Rational(1, 9) *
           (b0 * b1 * b2 * Rational(2) + (t * Rational(2) - Rational(3)) * b0 + (t * Rational(2) - z3 * Rational(3)) * b1 +
            (t * Rational(2) + z6 * Rational(3)) * b2);
    r.v5 = -b0 - b1 - b2;
    return r;
  }();
  return k;
}

std::vector<DivisorCurve> divisor_catalog() {
  const SymElem t = SymElem::t();
  const SymElem one(Rational(1));
  const SymElem z3 = sym::zeta(3);
  const SymElem c0 = sym::c(0), c1 = sym::c(1);
  const SymElem delta = sym::delta();
  const auto& k = divisor_constants();
  std::vector<DivisorCurve> out(5);

  auto& B1 = out[0];
  B1.label = "B1";
  B1.q.at(2, 0, 0) = one;
  B1.q.at(0, 2, 0) = one;
  B1.q.at(0, 0, 2) = z3;
  B1.g.at(1, 1, 1) = sym::beta(1);

  auto& B2 = out[1];
  B2.label = "B2";
  B2.q.at(2, 0, 0) = one;
  B2.q.at(0, 2, 0) = z3;
  B2.q.at(0, 0, 2) = z3 * z3;
  B2.g.at(1, 1, 1) = sym::beta(0);

  auto& B3 = out[2];
  B3.label = "B3";
  B3.q.at(1, 1, 0) = SymElem(Rational(2));
  B3.q.at(0, 0, 2) = -c1;
  B3.g.at(3, 0, 0) = one;
  B3.g.at(0, 3, 0) = -one;

  auto& B4 = out[3];
  B4.label = "B4";
  B4.q.at(2, 0, 0) = c0 * delta;
  B4.q.at(1, 1, 0) = -(c0 * c0 * Rational(9) + t * c0 * Rational(3) - t * t * Rational(2)) * Rational(2);
  B4.q.at(0, 2, 0) = delta * Rational(2);
  B4.q.at(0, 0, 2) = -delta;
  // s4^2 = 1 + c0^3, the x^6 coefficient of f mod q
  const SymElem s4 = (c0 * c0 * c1 - Rational(2)) * Rational(1, 2);
  B4.g.at(3, 0, 0) = s4;
  B4.g.at(2, 1, 0) = k.a4 * s4;
  B4.g.at(1, 2, 0) = k.b4 * s4;
  B4.g.at(0, 3, 0) = k.c4 * s4;

  auto& B5 = out[4];
  B5.label = "B5";
  B5.q.at(2, 0, 0) = k.a5;
  B5.q.at(0, 2, 0) = k.c5;
  B5.q.at(0, 0, 2) = k.c5;
  B5.q.at(0, 1, 1) = one;
  B5.g.at(3, 0, 0) = k.r5;
  B5.g.at(1, 1, 1) = k.v5;
  return out;
}

// ---------------------------------------------------------------- H

namespace {

int mod6(int v) { return ((v % 6) + 6) % 6; }

const SymElem& zeta6_power(int k) {
  static const std::array<SymElem, 6> pw = [] {
    std::array<SymElem, 6> r;
    r[0] = SymElem(Rational(1));
    for (int i = 1; i < 6; ++i) r[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i - 1)] * sym::zeta(6);
    return r;
  }();
  return pw[static_cast<std::size_t>(mod6(k))];
}

}  // namespace

void HElem::normalize() {
  for (auto& v : d) v = mod6(v);
  const int shift = d[0] - d[0] % 2;
  for (auto& v : d) v = mod6(v - shift);
}

HElem HElem::permutation(std::array<int, 3> s) {
  std::array<bool, 3> seen{false, false, false};
  for (int v : s) {
    if (v < 0 || v > 2 || seen[static_cast<std::size_t>(v)]) throw UsageError("not a permutation of {x,y,z}");
    seen[static_cast<std::size_t>(v)] = true;
  }
  HElem h;
  h.sigma = s;
  return h;
}

HElem HElem::transposition(int a, int b) {
  std::array<int, 3> s{0, 1, 2};
  std::swap(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]);
  return permutation(s);
}

HElem HElem::diagonal(int i, int j, int k) {
  if (mod6(2 * (i + j + k)) != 0) throw UsageError("psi(i,j,k) needs 2(i+j+k) = 0 mod 6");
  HElem h;
  h.d = {i, j, k};
  h.normalize();
  return h;
}

HElem HElem::operator*(const HElem& o) const {
  HElem r;
  for (int v = 0; v < 3; ++v) {
    const auto sv = static_cast<std::size_t>(o.sigma[static_cast<std::size_t>(v)]);
    r.sigma[static_cast<std::size_t>(v)] = sigma[sv];
    r.d[static_cast<std::size_t>(v)] = d[sv] + o.d[static_cast<std::size_t>(v)];
  }
  r.normalize();
  return r;
}

HElem HElem::inverse() const {
  HElem r;
  for (int v = 0; v < 3; ++v) r.sigma[static_cast<std::size_t>(sigma[static_cast<std::size_t>(v)])] = v;
  for (int v = 0; v < 3; ++v) r.d[static_cast<std::size_t>(v)] = -d[static_cast<std::size_t>(r.sigma[static_cast<std::size_t>(v)])];
  r.normalize();
  return r;
}

void HElem::point_map(std::array<int, 3>& perm, std::array<int, 3>& e) const {
  for (int v = 0; v < 3; ++v) perm[static_cast<std::size_t>(sigma[static_cast<std::size_t>(v)])] = v;
  for (int r = 0; r < 3; ++r) e[static_cast<std::size_t>(r)] = d[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])];
}

HElem HElem::galois_twist(int k) const {
  HElem r = *this;
  for (auto& v : r.d) v = v * k;
  r.normalize();
  return r;
}

std::string HElem::name() const {
  static const char* names[3] = {"x", "y", "z"};
  std::string perm_part;
  const std::array<int, 3> id{0, 1, 2};
  if (sigma != id) {
    int fixed = 0;
    for (int v = 0; v < 3; ++v)
      if (sigma[static_cast<std::size_t>(v)] == v) ++fixed;
    if (fixed == 1) {
      int a = -1, b = -1;
      for (int v = 0; v < 3; ++v)
        if (sigma[static_cast<std::size_t>(v)] != v) (a < 0 ? a : b) = v;
      perm_part = std::string("psi(") + names[a] + "," + names[b] + ")";
    } else {
      // cycle starting at x
      perm_part = std::string("psi(x,") + names[sigma[0]] + "," + names[sigma[static_cast<std::size_t>(sigma[0])]] + ")";
    }
  }
  std::string diag_part;
  if (d != std::array<int, 3>{0, 0, 0})
    diag_part = "psi(" + std::to_string(d[0]) + "," + std::to_string(d[1]) + "," + std::to_string(d[2]) + ")";
  if (perm_part.empty() && diag_part.empty()) return "id";
  if (perm_part.empty()) return diag_part;
  if (diag_part.empty()) return perm_part;
  return perm_part + "*" + diag_part;
}

std::vector<HElem> h_generators() {
  return {HElem::transposition(0, 1), HElem::transposition(1, 2), HElem::diagonal(3, 0, 0), HElem::diagonal(1, 5, 0)};
}

namespace {

int zeta6_exponent_action(const GaloisAut& g) { return mod6(g.sig().k); }

// Shortest tau-words for every Galois element, cached.
const std::map<GaloisSig, std::string>& galois_names() {
  static const std::map<GaloisSig, std::string> names = [] {
    std::vector<GaloisAut> elems;
    std::vector<GaloisAut> gens;
    for (int i = 1; i <= 5; ++i) gens.push_back(GaloisAut::tau(i));
    const FiniteGroup G = FiniteGroup::closure(
        GaloisAut(), gens, [](const GaloisAut& a, const GaloisAut& b) { return a.compose(b); }, &elems);
    std::map<GaloisSig, std::string> out;
    for (int a = 0; a < G.order(); ++a) {
      const auto& w = G.word(a);
      std::string s;
      // word is applied left to right as right multiplications: e*g1*g2...
      for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        if (!s.empty()) s += "*";
        s += "tau" + std::to_string(w[i] + 1);
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
      }
      out[elems[static_cast<std::size_t>(a)].sig()] = s.empty() ? "id" : s;
    }
    return out;
  }();
  return names;
}

}  // namespace

SurfAut SurfAut::operator*(const SurfAut& o) const {
  SurfAut r;
  r.gal = gal.compose(o.gal);
  r.h = h.galois_twist(zeta6_exponent_action(o.gal)) * o.h;
  return r;
}

std::string SurfAut::name() const {
  const bool gal_id = gal == GaloisAut();
  if (gal_id) return h.name();
  const std::string gname = galois_names().at(gal.sig());
  if (h.is_identity()) return gname;
  return gname + "*" + h.name();
}

Form substitute(const Form& F, const std::array<int, 3>& perm, const std::array<int, 3>& e) {
  Form r(F.degree());
  for (int idx = 0; idx < F.size(); ++idx) {
    if (F[idx].is_zero()) continue;
    const auto m = F.exps(idx);
    std::array<int, 3> n{0, 0, 0};
    int zpow = 0;
    for (int row = 0; row < 3; ++row) {
      n[static_cast<std::size_t>(perm[static_cast<std::size_t>(row)])] += m[static_cast<std::size_t>(row)];
      zpow += e[static_cast<std::size_t>(row)] * m[static_cast<std::size_t>(row)];
    }
    r[Form::index(F.degree(), n[0], n[1])] += zpow % 6 == 0 ? F[idx] : F[idx] * zeta6_power(zpow);
  }
  return r;
}

namespace {

std::string join_label(const std::string& op, const std::string& label) {
  if (op == "id") return label;
  return label.empty() ? op : op + "*" + label;
}

}  // namespace

std::string surf_label(const SurfAut& a, const std::string& label) { return join_label(a.name(), label); }

DivisorCurve apply_automorphism(const HElem& h, const DivisorCurve& D) {
  std::array<int, 3> perm{}, e{};
  h.inverse().point_map(perm, e);
  DivisorCurve r;
  r.q = substitute(D.q, perm, e);
  r.g = substitute(D.g, perm, e);
  r.label = join_label(h.name(), D.label);
  return r;
}

DivisorCurve apply_automorphism(const GaloisAut& g, const DivisorCurve& D) {
  DivisorCurve r;
  auto f = [&](const SymElem& c) { return g.apply(c); };
  r.q = D.q.map(f);
  r.g = D.g.map(f);
  r.label = join_label(SurfAut{g, HElem{}}.name(), D.label);
  return r;
}

DivisorCurve apply_automorphism(const SurfAut& a, const DivisorCurve& D) {
  DivisorCurve r = apply_automorphism(a.gal, apply_automorphism(a.h, D));
  r.label = join_label(a.name(), D.label);
  return r;
}

// ---------------------------------------------------------------- groups

FiniteGroup h_group(std::vector<HElem>* elements) {
  return FiniteGroup::closure(HElem{}, h_generators(), [](const HElem& a, const HElem& b) { return a * b; }, elements);
}

FiniteGroup galois_group(std::vector<GaloisAut>* elements) {
  std::vector<GaloisAut> gens;
  for (int i = 1; i <= 5; ++i) gens.push_back(GaloisAut::tau(i));
  return FiniteGroup::closure(GaloisAut(), gens, [](const GaloisAut& a, const GaloisAut& b) { return a.compose(b); },
                              elements);
}

GroupReport group_abstract_check() {
  GroupReport rep;
  std::vector<HElem> hel;
  const FiniteGroup H = h_group(&hel);
  rep.order_h = H.order();
  std::vector<int> h1, h2;
  for (int a = 0; a < H.order(); ++a) {
    if (hel[static_cast<std::size_t>(a)].is_permutation()) h1.push_back(a);
    if (hel[static_cast<std::size_t>(a)].is_diagonal()) h2.push_back(a);
  }
  rep.order_h1 = static_cast<int>(h1.size());
  rep.order_h2 = static_cast<int>(h2.size());
  const bool h1_sub = H.generated(h1) == h1;
  const bool h2_sub = H.generated(h2) == h2;
  if (h1_sub) rep.h1_is_s3 = find_isomorphism(H.subgroup(h1), symmetric_group(3)).has_value();
  if (h2_sub) {
    const FiniteGroup model = direct_product(cyclic_group(2), direct_product(cyclic_group(2), cyclic_group(6)));
    rep.h2_is_z2z2z6 = find_isomorphism(H.subgroup(h2), model).has_value();
  }
  std::vector<int> meet;
  std::set_intersection(h1.begin(), h1.end(), h2.begin(), h2.end(), std::back_inserter(meet));
  rep.h_semidirect = h1_sub && h2_sub && H.is_normal(h2) && meet == std::vector<int>{0} &&
                     rep.order_h1 * rep.order_h2 == rep.order_h;

  const FiniteGroup Gal = galois_group();
  rep.order_gal = Gal.order();
  const FiniteGroup model =
      direct_product(symmetric_group(3), direct_product(cyclic_group(2), dihedral_group(4)));
  rep.gal_is_s3_z2_d4 = find_isomorphism(Gal, model).has_value();
  rep.gal_abelianization = Gal.abelianization();
  rep.model_abelianization = model.abelianization();
  return rep;
}

// ---------------------------------------------------------------- normalization

std::optional<Rational> FamilyMember::e_rational() const {
  if (e_coeffs[1] == 0 && e_coeffs[2] == 0) return e_coeffs[0];
  return std::nullopt;
}

std::string FamilyMember::format() const {
  if (auto e = e_rational()) return e->get_str();
  std::string s;
  const char* basis[3] = {"", "*eps", "*eps^2"};
  for (int i = 0; i < 3; ++i) {
    if (e_coeffs[static_cast<std::size_t>(i)] == 0) continue;
    if (!s.empty()) s += " + ";
    s += e_coeffs[static_cast<std::size_t>(i)].get_str() + basis[i];
  }
  return s + " where eps^3 = " + cube.get_str();
}

namespace {

std::optional<Integer> exact_cube_root(const Integer& v) {
  Integer r;
  const Integer a = abs(v);
  mpz_root(r.get_mpz_t(), a.get_mpz_t(), 3);
  if (r * r * r != a) return std::nullopt;
  return v < 0 ? Integer(-r) : r;
}

}  // namespace

FamilyMember normalize_family_member(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
  if (a == 0 || b == 0 || c == 0) throw UsageError("normalize_family_member needs abc != 0");
  FamilyMember m;
  m.cube = a * b * c;
  // e^3 = d^3 / abc
  if (d * d * d == m.cube * Rational(-27)) throw SingularMember("SingularMember: e^3 = -27");
  const auto rn = exact_cube_root(m.cube.get_num());
  const auto rd = exact_cube_root(m.cube.get_den());
  if (rn && rd) {
    m.rational_eps = true;
    m.eps = Rational(*rn, *rd);
    m.eps.canonicalize();
    m.e_coeffs = {d / m.eps, Rational(0), Rational(0)};
  } else {
    // 1/eps = eps^2 / abc
    m.e_coeffs = {Rational(0), Rational(0), d / m.cube};
  }
  return m;
}

// ---------------------------------------------------------------- fibers

namespace {

using Exps3 = std::array<int, 3>;

template <typename E>
struct Term3 {
  Exps3 e;
  E c;
};

// Partial derivatives of x^6 + y^6 + z^6 + t x^2 y^2 z^2.
template <FieldPolicy F>
std::array<std::vector<Term3<typename F::value_type>>, 3> sextic_gradient(const F& K, const typename F::value_type& t) {
  using E = typename F::value_type;
  auto sc = [&](long v) { return K.from_integer(Integer(v)); };
  const E two_t = K.mul(sc(2), t);
  return {std::vector<Term3<E>>{{{5, 0, 0}, sc(6)}, {{1, 2, 2}, two_t}},
          std::vector<Term3<E>>{{{0, 5, 0}, sc(6)}, {{2, 1, 2}, two_t}},
          std::vector<Term3<E>>{{{0, 0, 5}, sc(6)}, {{2, 2, 1}, two_t}}};
}

// Dehomogenizes: chart variable set to 1, `zero` variable (if >= 0) set to 0,
// the remaining two variables become ring variables 0 and 1.
template <FieldPolicy F>
typename PolyRing<F>::Poly chart_poly(const PolyRing<F>& R, const std::vector<Term3<typename F::value_type>>& terms,
                                      int one_var, int zero_var) {
  std::vector<std::pair<std::vector<int>, typename F::value_type>> ts;
  for (const auto& t : terms) {
    if (zero_var >= 0 && t.e[static_cast<std::size_t>(zero_var)] > 0) continue;
    std::vector<int> ex;
    for (int v = 0; v < 3; ++v)
      if (v != one_var) ex.push_back(t.e[static_cast<std::size_t>(v)]);
    ts.push_back({ex, t.c});
  }
  return R.from_terms(ts);
}

// Degrees of the singular scheme on the strata {x != 0}, {x = 0, y != 0}, {x = y = 0}.
template <FieldPolicy F>
std::array<std::uint64_t, 3> singular_strata(const F& K, const typename F::value_type& t) {
  const auto grad = sextic_gradient(K, t);
  const PolyRing<F> R(K, 2);
  std::array<std::uint64_t, 3> deg{};
  constexpr int kN = 13;  // exceeds any local length that can occur
  for (int chart = 0; chart < 3; ++chart) {
    std::vector<typename PolyRing<F>::Poly> gens;
    for (const auto& g : grad) gens.push_back(chart_poly(R, g, chart, -1));
    // the chart's ring variables are the two coordinates other than `chart`;
    // coordinates before `chart` must vanish on this stratum
    for (int v = 0; v < chart; ++v) {
      const int ring_var = v;  // coordinates below `chart` keep their order
      gens.push_back(R.term(R.mono().var(ring_var, kN), K.one()));
    }
    const auto d = zerodim_degree(R, gens);
    if (!d) throw VerificationError("singular locus is not zero-dimensional");
    deg[static_cast<std::size_t>(chart)] = *d;
  }
  return deg;
}

using FF = FiniteField;
using FVal = FiniteField::value_type;

FVal eval3(const FF& K, const std::vector<Term3<FVal>>& terms, const std::array<FVal, 3>& p) {
  FVal acc = 0;
  for (const auto& t : terms) {
    FVal m = t.c;
    for (int v = 0; v < 3; ++v) m = K.mul(m, K.pow(p[static_cast<std::size_t>(v)], static_cast<std::uint64_t>(t.e[static_cast<std::size_t>(v)])));
    acc = K.add(acc, m);
  }
  return acc;
}

std::vector<Term3<FVal>> derive(const FF& K, const std::vector<Term3<FVal>>& terms, int v) {
  std::vector<Term3<FVal>> r;
  for (const auto& t : terms) {
    const int e = t.e[static_cast<std::size_t>(v)];
    if (e == 0) continue;
    Term3<FVal> d = t;
    d.e[static_cast<std::size_t>(v)] -= 1;
    d.c = K.mul(t.c, K.from_int(e));
    r.push_back(d);
  }
  return r;
}

FqPoly univariate_gcd_at(const FF& K, const std::vector<std::vector<Term3<FVal>>>& polys, int var,
                         const std::array<FVal, 3>& fixed) {
  // each polynomial restricted to the line where only `var` varies
  FqPoly g;
  for (const auto& p : polys) {
    std::vector<FVal> coeffs(8, 0);
    for (const auto& t : p) {
      FVal m = t.c;
      for (int v = 0; v < 3; ++v)
        if (v != var) m = K.mul(m, K.pow(fixed[static_cast<std::size_t>(v)], static_cast<std::uint64_t>(t.e[static_cast<std::size_t>(v)])));
      auto& slot = coeffs[static_cast<std::size_t>(t.e[static_cast<std::size_t>(var)])];
      slot = K.add(slot, m);
    }
    FqPoly u(coeffs);
    upoly::trim(K, u);
    g = upoly::gcd(K, g, u);
  }
  return g;
}

std::vector<FVal> distinct_roots(const FF& K, const FqPoly& p) {
  if (p.is_zero()) throw VerificationError("positive-dimensional singular locus");
  auto r = poly_roots(K, p);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

std::vector<FiberPoint> singular_points(const FF& K, FVal t) {
  const auto grad = sextic_gradient(K, t);
  std::vector<std::vector<Term3<FVal>>> g(grad.begin(), grad.end());
  std::vector<Term3<FVal>> f{{{6, 0, 0}, 1}, {{0, 6, 0}, 1}, {{0, 0, 6}, 1}, {{2, 2, 2}, t}};
  std::vector<FiberPoint> pts;
  std::set<std::array<FVal, 3>> seen;
  auto add_point = [&](std::array<FVal, 3> p, int chart) {
    if (!seen.insert(p).second) return;
    // Hessian in the two chart variables
    std::array<int, 2> vars{};
    int k = 0;
    for (int v = 0; v < 3; ++v)
      if (v != chart) vars[static_cast<std::size_t>(k++)] = v;
    const auto fa = derive(K, f, vars[0]), fb = derive(K, f, vars[1]);
    const FVal haa = eval3(K, derive(K, fa, vars[0]), p);
    const FVal hab = eval3(K, derive(K, fa, vars[1]), p);
    const FVal hbb = eval3(K, derive(K, fb, vars[1]), p);
    FiberPoint fp;
    fp.coords = p;
    fp.node = K.sub(K.mul(haa, hbb), K.mul(hab, hab)) != 0;
    pts.push_back(fp);
  };
  // chart x = 1: z from the elimination polynomial of a lex basis, then y by gcd
  const PolyRing<FF> R(K, 2, MonoOrder::Lex);  // variables (y, z), y > z
  std::vector<PolyRing<FF>::Poly> gens;
  for (const auto& gg : grad) gens.push_back(chart_poly(R, gg, 0, -1));
  const auto gb = groebner(R, gens);
  if (!(gb.size() == 1 && gb[0].lead().m.is_one())) {
    FqPoly elim;
    for (const auto& p : gb) {
      bool only_z = true;
      for (const auto& term : p.terms)
        if (term.m.exp(0) > 0) only_z = false;
      if (!only_z) continue;
      std::vector<FVal> c(static_cast<std::size_t>(R.total_degree(p) + 1), 0);
      for (const auto& term : p.terms) c[static_cast<std::size_t>(term.m.exp(1))] = term.c;
      elim = FqPoly(c);
    }
    for (FVal z : distinct_roots(K, elim)) {
      const FqPoly gy = univariate_gcd_at(K, g, 1, {1, 0, z});
      if (gy.degree() <= 0) continue;
      for (FVal y : distinct_roots(K, gy)) add_point({1, y, z}, 0);
    }
  }
  // x = 0, y = 1
  {
    const FqPoly gz = univariate_gcd_at(K, g, 2, {0, 1, 0});
    if (gz.degree() > 0)
      for (FVal z : distinct_roots(K, gz)) add_point({0, 1, z}, 1);
  }
  if (eval3(K, g[0], {0, 0, 1}) == 0 && eval3(K, g[1], {0, 0, 1}) == 0 && eval3(K, g[2], {0, 0, 1}) == 0)
    add_point({0, 0, 1}, 2);
  return pts;
}

}  // namespace

std::string FiberClass::describe() const {
  if (smooth) return "Smooth";
  int nodes = 0;
  for (const auto& p : points)
    if (p.node) ++nodes;
  return "Nodal(degree " + std::to_string(singular_degree) + ", " + std::to_string(points.size()) + " points, " +
         std::to_string(nodes) + " nodes)";
}

FiberClass classify_fiber(const Rational& t0) {
  const auto deg = singular_strata(RationalField{}, t0);
  FiberClass fc;
  fc.singular_degree = deg[0] + deg[1] + deg[2];
  fc.smooth = fc.singular_degree == 0;
  return fc;
}

FiberClass classify_fiber(const SymElem& t0, const Embedding& emb) {
  const FVal t = sym_embed(t0, emb);
  const auto deg = singular_strata(emb.field, t);
  FiberClass fc;
  fc.singular_degree = deg[0] + deg[1] + deg[2];
  fc.smooth = fc.singular_degree == 0;
  if (!fc.smooth) fc.points = singular_points(emb.field, t);
  return fc;
}

// ---------------------------------------------------------------- tri-tangent lines

namespace {

// Binary forms in (u, v) are coefficient lists of u^(n-k) v^k over a ring.
using FRing = PolyRing<FF>;
using FPoly = FRing::Poly;

std::vector<FPoly> binary_mul(const FRing& R, const std::vector<FPoly>& a, const std::vector<FPoly>& b) {
  std::vector<FPoly> r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = R.add(r[i + j], R.mul(a[i], b[j]));
  return r;
}

std::vector<FPoly> binary_pow(const FRing& R, const std::vector<FPoly>& a, int n) {
  std::vector<FPoly> r{R.constant(1)};
  for (int i = 0; i < n; ++i) r = binary_mul(R, r, a);
  return r;
}

std::optional<std::uint64_t> tritangent_chart(const FF& K, FVal t, int chart) {
  // chart 0: z = a x + b y, vars (a, b, c0..c3)
  // chart 1: x = b y, line points (b v, v, u), vars (b, c0..c3)
  // chart 2: y = 0, line points (u, 0, v), vars (c0..c3)
  const int nparam = chart == 0 ? 2 : chart == 1 ? 1 : 0;
  const FRing R(K, nparam + 4);
  const FPoly zero, one = R.constant(1);
  std::vector<FPoly> X, Y, Z;  // coefficients of u, v
  if (chart == 0) {
    X = {one, zero};
    Y = {zero, one};
    Z = {R.var(0), R.var(1)};
  } else if (chart == 1) {
    X = {zero, R.var(0)};
    Y = {zero, one};
    Z = {one, zero};
  } else {
    X = {one, zero};
    Y = {zero, zero};
    Z = {zero, one};
  }
  auto F = binary_pow(R, X, 6);
  const auto add_into = [&](std::vector<FPoly>& acc, const std::vector<FPoly>& p) {
    for (std::size_t i = 0; i < p.size(); ++i) acc[i] = R.add(acc[i], p[i]);
  };
  add_into(F, binary_pow(R, Y, 6));
  add_into(F, binary_pow(R, Z, 6));
  auto mixed = binary_mul(R, binary_mul(R, binary_pow(R, X, 2), binary_pow(R, Y, 2)), binary_pow(R, Z, 2));
  for (auto& m : mixed) m = R.scale(m, t);
  add_into(F, mixed);
  std::vector<FPoly> G;
  for (int i = 0; i < 4; ++i) G.push_back(R.var(nparam + i));
  const auto G2 = binary_mul(R, G, G);
  std::vector<FPoly> eqs;
  for (std::size_t k = 0; k < F.size(); ++k) eqs.push_back(R.sub(F[k], G2[k]));
  return zerodim_degree(R, eqs);
}

}  // namespace

TritangentReport tritangent_check(const Rational& t0, const Embedding& emb) {
  const FF& K = emb.field;
  const FVal t = K.from_rational(t0);
  if (K.add(K.pow(t, 3), K.from_int(27)) == 0) throw BadReduction("fiber is singular modulo p");
  TritangentReport rep;
  std::uint64_t total = 0;
  bool finite = true;
  for (int chart = 0; chart < 3; ++chart) {
    rep.chart_degrees[static_cast<std::size_t>(chart)] = tritangent_chart(K, t, chart);
    if (!rep.chart_degrees[static_cast<std::size_t>(chart)])
      finite = false;
    else
      total += *rep.chart_degrees[static_cast<std::size_t>(chart)];
  }
  // every line is counted once for each sign of the cubic
  if (finite) rep.count = total / 2;
  return rep;
}

// ---------------------------------------------------------------- Inose

InoseReport verify_inose() {
  using QRing = PolyRing<RationalField>;
  using QP = QRing::Poly;
  InoseReport rep;
  const RationalField Q;
  auto c = [&](const QRing& R, long n, long d = 1) { return R.constant(Rational(n, d)); };
  {
    // variables x, y, z, t
    const QRing R(Q, 4);
    const QP x = R.var(0), y = R.var(1), z = R.var(2), t = R.var(3);
    const QP f = R.add(R.add(R.add(R.pow(x, 6), R.pow(y, 6)), R.pow(z, 6)), R.mul(t, R.mul(R.mul(R.pow(x, 2), R.pow(y, 2)), R.pow(z, 2))));
    auto target = [&](const QP& X, const QP& Y, const QP& Z) {
      return R.add(R.add(R.add(R.pow(R.mul(Y, Z), 3), R.pow(R.mul(X, Z), 3)), R.pow(R.mul(X, Y), 3)),
                   R.mul(t, R.pow(R.mul(R.mul(X, Y), Z), 2)));
    };
    // squared Cremona image: the right side pulls back to (xyz)^6 f
    const QP X = R.pow(R.mul(y, z), 2), Y = R.pow(R.mul(x, z), 2), Z = R.pow(R.mul(x, y), 2);
    rep.cremona = R.equal(target(X, Y, Z), R.mul(R.pow(R.mul(R.mul(x, y), z), 6), f));
    // z = r y (reuse z as r): target(x, y, r y) = y^3 ((r^3+1) x^3 + r^2 t x^2 y + (r y)^3)
    const QP r = z;
    const QP lhs = target(x, y, R.mul(r, y));
    const QP r3 = R.pow(r, 3);
    const QP inner = R.add(R.add(R.mul(R.add(r3, c(R, 1)), R.pow(x, 3)), R.mul(R.mul(R.pow(r, 2), t), R.mul(R.pow(x, 2), y))),
                           R.pow(R.mul(r, y), 3));
    rep.projection = R.equal(lhs, R.mul(R.pow(y, 3), inner));
  }
  {
    // variables x, w, r, t: the 3:1 map to v^2 = u^3 + t s^2 u^2 + s^5 (1+s)^2
    const QRing R(Q, 4);
    const QP x = R.var(0), w = R.var(1), r = R.var(2), t = R.var(3);
    const QP r3p1 = R.add(R.pow(r, 3), c(R, 1));
    const QP P = R.add(R.add(R.mul(r3p1, R.pow(x, 3)), R.mul(R.mul(R.pow(r, 2), t), R.pow(x, 2))), R.pow(r, 3));
    const QP u = R.mul(R.mul(x, R.pow(r, 4)), r3p1);
    const QP v = R.mul(R.mul(w, R.pow(r, 6)), r3p1);
    const QP s = R.pow(r, 3);
    const QP Yeq = R.sub(R.pow(v, 2), R.add(R.add(R.pow(u, 3), R.mul(R.mul(t, R.pow(s, 2)), R.pow(u, 2))),
                                            R.mul(R.pow(s, 5), R.pow(R.add(c(R, 1), s), 2))));
    const QP Xeq = R.sub(R.pow(w, 2), P);
    rep.cover = R.equal(Yeq, R.mul(R.mul(R.pow(r, 12), R.pow(r3p1, 2)), Xeq));
  }
  {
    // variables u, v, s, t: u_old = v - s^2 t / 3 and v_old = u
    const QRing R(Q, 4);
    const QP u = R.var(0), v = R.var(1), s = R.var(2), t = R.var(3);
    const QP uold = R.sub(v, R.mul(c(R, 1, 3), R.mul(R.pow(s, 2), t)));
    const QP vold = u;
    const QP before = R.sub(R.pow(vold, 2), R.add(R.add(R.pow(uold, 3), R.mul(R.mul(t, R.pow(s, 2)), R.pow(uold, 2))),
                                                  R.mul(R.pow(s, 5), R.pow(R.add(c(R, 1), s), 2))));
    const QP inner = R.add(R.add(R.pow(s, 2), R.mul(R.mul(c(R, 2, 27), s), R.add(c(R, 27), R.pow(t, 3)))), c(R, 1));
    const QP after = R.sub(R.pow(u, 2), R.add(R.sub(R.pow(v, 3), R.mul(c(R, 1, 3), R.mul(R.mul(R.pow(s, 4), R.pow(t, 2)), v))),
                                              R.mul(R.pow(s, 5), inner)));
    rep.shift = R.equal(before, after);
  }
  {
    // A = t^2/9, B = -(t^3+27)/27, j = -(4t)^3
    const QRing R(Q, 1);
    const QP t = R.var(0);
    const QP A = R.mul(c(R, 1, 9), R.pow(t, 2));
    const QP B = R.mul(c(R, -1, 27), R.add(R.pow(t, 3), c(R, 27)));
    const QP j = R.mul(c(R, -64), R.pow(t, 3));
    const bool a_ok = R.equal(R.pow(A, 3), R.mul(c(R, 1, 2985984), R.pow(j, 2)));
    const QP one_minus = R.sub(c(R, 1), R.mul(c(R, 1, 1728), j));
    const bool b_ok = R.equal(R.pow(B, 2), R.pow(one_minus, 2));
    rep.j_invariants = a_ok && b_ok;
  }
  return rep;
}

}  // namespace k3pic
