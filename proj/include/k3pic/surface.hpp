#pragma once

#include "k3pic/group.hpp"
#include "k3pic/symelem.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace k3pic {

/// Homogeneous form in x, y, z with coefficients in L.  Monomials
/// x^i y^j z^(d-i-j) are stored in decreasing lexicographic order.
class Form {
 public:
  explicit Form(int degree = 0);

  int degree() const { return d_; }
  int size() const { return static_cast<int>(c_.size()); }
  static int size_of(int d) { return (d + 1) * (d + 2) / 2; }
  static int index(int d, int i, int j) {
    const int s = d - i;
    return s * (s + 1) / 2 + (s - j);
  }
  std::array<int, 3> exps(int idx) const { return exps_of(d_, idx); }
  static std::array<int, 3> exps_of(int d, int idx);

  const SymElem& operator[](int idx) const { return c_[static_cast<std::size_t>(idx)]; }
  SymElem& operator[](int idx) { return c_[static_cast<std::size_t>(idx)]; }
  SymElem& at(int i, int j, int k);
  const SymElem& at(int i, int j, int k) const;

  Form operator+(const Form& o) const;
  Form operator-(const Form& o) const;
  Form operator*(const Form& o) const;
  Form operator*(const SymElem& s) const;
  Form operator-() const;
  bool is_zero() const;
  bool operator==(const Form& o) const { return d_ == o.d_ && c_ == o.c_; }

  template <typename Fn>
  Form map(Fn fn) const {
    Form r(d_);
    for (int i = 0; i < size(); ++i) r[i] = fn((*this)[i]);
    return r;
  }

  std::string format() const;

 private:
  int d_;
  std::vector<SymElem> c_;
};

/// Remainder of F modulo the conic q (exact division by the leading square
/// coefficient of the first variable among z, y, x whose square appears in q).
/// Throws UsageError if q has no square term.
Form reduce_mod_conic(const Form& F, const Form& q);
bool in_conic_ideal(const Form& F, const Form& q);

/// w^2 = x^6 + y^6 + z^6 + t x^2 y^2 z^2 with t symbolic or specialized.
struct FamilyEquation {
  std::optional<Rational> t0;
  Form sextic{6};
  std::string format() const;
  std::string branch_format() const;
};

FamilyEquation fiber_equation(std::optional<Rational> t0 = std::nullopt);
/// The generic branch sextic as a form over L.
const Form& generic_sextic();

/// A component {q = 0, w = g} of the pullback of a bitangent conic.
struct DivisorCurve {
  Form q{2};
  Form g{3};
  std::string label;

  /// f - g^2 lies in (q), checked symbolically over L.
  bool bitangent() const;
  /// The symmetric matrix of q has nonzero determinant.
  bool smooth_conic() const;
  SymElem conic_det() const;
};

/// Symbolic curve equality: q proportional and g - g' in (q).
bool same_curve_symbolic(const DivisorCurve& a, const DivisorCurve& b);

struct DivisorConstants {
  SymElem a4, b4, c4, a5, c5, r5, v5;
};
const DivisorConstants& divisor_constants();

/// B1..B5.
std::vector<DivisorCurve> divisor_catalog();

/// Element psi_sigma o psi_{d0,d1,d2} of H.  sigma[v] is the coordinate slot
/// that coordinate v is moved to; the diagonal part multiplies coordinate v by
/// zeta6^d[v].  Diagonal triples are normalized modulo (2,2,2).
struct HElem {
  std::array<int, 3> sigma{0, 1, 2};
  std::array<int, 3> d{0, 0, 0};

  static HElem permutation(std::array<int, 3> sigma);
  /// psi_(a,b) for coordinates a != b in {0,1,2}.
  static HElem transposition(int a, int b);
  static HElem diagonal(int i, int j, int k);

  HElem operator*(const HElem& o) const;  // composition, o applied first
  HElem inverse() const;
  /// Point map P -> M P written as (M v)_r = zeta6^e[r] v_perm[r].
  void point_map(std::array<int, 3>& perm, std::array<int, 3>& e) const;
  /// Image under a field automorphism acting on zeta6 by zeta6 -> zeta6^k.
  HElem galois_twist(int k) const;
  bool is_identity() const { return *this == HElem{}; }
  bool is_diagonal() const { return sigma == std::array<int, 3>{0, 1, 2}; }
  bool is_permutation() const { return d == std::array<int, 3>{0, 0, 0}; }
  std::string name() const;
  auto operator<=>(const HElem&) const = default;

 private:
  void normalize();
};

/// The four generators psi_(x,y), psi_(y,z), psi_{3,0,0}, psi_{1,5,0} of H.
std::vector<HElem> h_generators();

/// Element of <Gal, H> acting on curves by D -> gal(h(D)).
struct SurfAut {
  GaloisAut gal;
  HElem h;

  static SurfAut psi(const HElem& h) { return {GaloisAut(), h}; }
  static SurfAut tau(int i) { return {GaloisAut::tau(i), HElem{}}; }
  SurfAut operator*(const SurfAut& o) const;  // o applied first
  bool operator==(const SurfAut& o) const { return gal == o.gal && h == o.h; }
  bool operator<(const SurfAut& o) const {
    if (!(gal == o.gal)) return gal < o.gal;
    return h < o.h;
  }
  std::string name() const;
};

/// Substitutes the monomial point map into a form: F(M v).
Form substitute(const Form& F, const std::array<int, 3>& perm, const std::array<int, 3>& e);

/// "name*label", or just the label for the identity.
std::string surf_label(const SurfAut& a, const std::string& label);

DivisorCurve apply_automorphism(const HElem& h, const DivisorCurve& D);
DivisorCurve apply_automorphism(const GaloisAut& g, const DivisorCurve& D);
DivisorCurve apply_automorphism(const SurfAut& a, const DivisorCurve& D);

/// Structure report of H1, H2, H and Gal, every claim backed by an explicit isomorphism.
struct GroupReport {
  int order_h1 = 0, order_h2 = 0, order_h = 0, order_gal = 0;
  bool h1_is_s3 = false;
  bool h2_is_z2z2z6 = false;
  bool h_semidirect = false;  // H2 normal, H1 a complement
  bool gal_is_s3_z2_d4 = false;
  std::vector<std::uint64_t> gal_abelianization;
  std::vector<std::uint64_t> model_abelianization;
  bool ok() const {
    return order_h1 == 6 && order_h2 == 24 && order_h == 144 && order_gal == 96 && h1_is_s3 && h2_is_z2z2z6 &&
           h_semidirect && gal_is_s3_z2_d4 && gal_abelianization == model_abelianization;
  }
};
GroupReport group_abstract_check();

/// H as a closed group, with elements in closure order.
FiniteGroup h_group(std::vector<HElem>* elements = nullptr);
/// Gal(L/Q(t)) generated by tau1..tau5.
FiniteGroup galois_group(std::vector<GaloisAut>* elements = nullptr);

/// Result of the normalization of w^2 = a x^6 + b y^6 + c z^6 + d x^2 y^2 z^2.
/// e = d / eps with eps^3 = abc, stored as coefficients on 1, eps, eps^2.
struct FamilyMember {
  Rational cube;                     // abc, the minimal relation eps^3 = cube
  bool rational_eps = false;         // abc is a rational cube
  Rational eps;                      // valid when rational_eps
  std::array<Rational, 3> e_coeffs;  // e = e0 + e1 eps + e2 eps^2
  std::optional<Rational> e_rational() const;
  std::string format() const;
};
class SingularMember : public UsageError {
 public:
  using UsageError::UsageError;
};
FamilyMember normalize_family_member(const Rational& a, const Rational& b, const Rational& c, const Rational& d);

/// Singular locus of the branch sextic.
struct FiberPoint {
  std::array<FiniteField::value_type, 3> coords;  // normalized: first nonzero coordinate 1
  bool node = false;
};
struct FiberClass {
  bool smooth = true;
  std::uint64_t singular_degree = 0;  // degree of the singular scheme
  std::vector<FiberPoint> points;     // over the embedding field, when one is given
  std::string describe() const;
};
FiberClass classify_fiber(const Rational& t0);
/// t0 given as an element of L evaluated through the embedding's roots.
FiberClass classify_fiber(const SymElem& t0, const Embedding& emb);

/// Number of tri-tangent lines of the branch sextic at t0 over the closure of
/// the embedding field, with multiplicity; nullopt if the incidence scheme is
/// not zero-dimensional.
struct TritangentReport {
  std::optional<std::uint64_t> count;
  std::array<std::optional<std::uint64_t>, 3> chart_degrees;
};
TritangentReport tritangent_check(const Rational& t0, const Embedding& emb);

struct InoseReport {
  bool cremona = false;      // the squared Cremona image
  bool projection = false;   // the projection z = r y
  bool cover = false;        // the 3:1 map to the elliptic surface
  bool shift = false;        // v -> v - s^2 t / 3
  bool j_invariants = false; // A^3 = j^2/12^6 and B^2 = (1 - j/12^3)^2
  bool ok() const { return cremona && projection && cover && shift && j_invariants; }
};
InoseReport verify_inose();

}  // namespace k3pic
