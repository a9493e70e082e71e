#pragma once

#include "k3pic/latbuild.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace k3pic {

class EnumerationTooLarge : public UsageError {
 public:
  using UsageError::UsageError;
};
class VerificationFailed : public VerificationError {
 public:
  using VerificationError::VerificationError;
};

/// Vector over F_p, entries in [0, p).
using ModVec = std::vector<std::int64_t>;

ModVec reduce_mod(const IntVector& v, std::int64_t p);
int rank_mod_p(const std::vector<ModVec>& rows, std::int64_t p);
/// Basis of {v : A v = 0 mod p} in reduced echelon form.
std::vector<ModVec> nullspace_mod_p(const IntMatrix& A, std::int64_t p);
ModVec mat_vec_mod(const IntMatrix& A, const ModVec& v, std::int64_t p);
std::string format_modvec(const ModVec& v);

/// Exponent of p in |det|.
int valuation(const Integer& det, std::uint64_t p);
/// Primes p with p^2 | det: the only ones that can divide [overlattice : L].
std::vector<std::uint64_t> trivial_primes_bound(const Integer& det);

struct ModpKernel {
  std::int64_t p = 0;
  std::vector<ModVec> basis;
  int dim() const { return static_cast<int>(basis.size()); }
};
ModpKernel kernel_mod_p(const IntMatrix& gram, std::int64_t p);

/// Nonzero kernel vectors whose lift (entries in [0, p)) has norm 0 mod 2p^2.
struct MpSet {
  std::int64_t p = 0;
  ModpKernel kernel;
  std::vector<ModVec> vectors;
};
MpSet mp_set(const IntMatrix& gram, std::int64_t p, std::uint64_t max_enumeration = 1000000);
bool in_mp_condition(const IntMatrix& gram, const ModVec& v, std::int64_t p);

/// Orbit of v under the group generated by the matrices, mod p.
std::vector<ModVec> orbit_mod_p(const ModVec& v, const std::vector<IntMatrix>& gens, std::int64_t p);

struct OrbitInfo {
  std::vector<ModVec> vectors;
  int span_dim = 0;
};
struct SpanFilter {
  std::int64_t p = 0;
  int dmax = 0;
  std::vector<OrbitInfo> h_orbits;      // partition of M_p into H-orbits
  std::vector<ModVec> candidates;       // elements whose G-orbit spans at most dmax dimensions
  std::vector<ModVec> candidate_span;   // basis of the span of the candidates
  int h_orbits_within(int d) const;     // H-orbits spanning at most d dimensions
};
SpanFilter orbit_span_filter(const MpSet& M, const std::vector<IntMatrix>& h_gens, const std::vector<IntMatrix>& g_gens,
                             int dmax);

struct ObstructionWitness {
  ModVec v;
  std::string label_a, label_b;  // E = [a] - [b]
  IntVector class_a, class_b, E;
  Integer e_norm, l_dot_e, a_dot_b;
};
/// Looks for E = [D] - [D'] with E = v mod 2, E^2 = -8 and l.E = 0; pairs
/// (psi_{0,3,0} D', D') first, then all ordered pairs.
std::optional<ObstructionWitness> divisibility_obstruction(const ModVec& v, const LatticeBundle& b);

struct IndexVerdict {
  bool lambda_is_pic = false;
  Integer det;
  std::vector<std::uint64_t> primes_checked;
  std::map<std::int64_t, int> dmax;
  std::vector<MpSet> mp_sets;
  std::vector<SpanFilter> filters;
  std::vector<ObstructionWitness> witnesses;
  std::vector<std::string> notes;
  std::string certificate_json(const LatticeBundle& b) const;
};
/// Throws VerificationFailed naming the first unobstructed candidate.
IndexVerdict verdict(const LatticeBundle& b);

struct CertificateCheck {
  bool ok = false;
  std::vector<std::string> failures;
};
/// Re-checks every assertion of a certificate with integer arithmetic only.
CertificateCheck verify_certificate(const std::string& json_text);

}  // namespace k3pic
