#pragma once

#include "k3pic/group.hpp"
#include "k3pic/jsonio.hpp"
#include "k3pic/latbuild.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace k3pic {

class ResourceBudgetExceeded : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Invariant factors d1 | d2 | ... of a finite abelian group, all > 1.
using AbelianInvariants = std::vector<std::uint64_t>;

/// Finite matrix group with its multiplication table.  elements[0] is the
/// identity; the table uses the same indices.
struct GroupRep {
  std::vector<SmallMatrix> elements;
  FiniteGroup table;
  std::vector<std::string> generator_names;
  std::vector<int> generators;          // element indices of the named generators
  std::vector<std::vector<int>> words;  // per element, indices into generator_names

  int order() const { return static_cast<int>(elements.size()); }
  int rank() const { return static_cast<int>(elements[0].rows()); }
  IntMatrix matrix(int a) const { return to_big(elements[static_cast<std::size_t>(a)]); }
  std::string word_name(int a) const;  // "tau1*tau3", "1" for the identity
};
/// Closure of the generators; checks every generator against the gram matrix.
GroupRep make_group_rep(const std::vector<IntMatrix>& generators, const std::vector<std::string>& names,
                        const IntMatrix& gram);
/// Image of Gal(L/Q(t)) on the lattice, generated by tau1..tau5.
GroupRep galois_rep(const LatticeBundle& b);

struct Subgroup {
  std::vector<int> elements;    // sorted, identity first
  std::vector<int> generators;  // element indices
  int order() const { return static_cast<int>(elements.size()); }
};
Subgroup whole_group(const GroupRep& G);
Subgroup subgroup_generated(const GroupRep& G, const std::vector<int>& gens);

/// Saturated basis (as columns) of {x : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& A);
/// Nontrivial invariant factors of coker A together with its free rank.
struct CokernelStructure {
  AbelianInvariants torsion;
  int free_rank = 0;
};
CokernelStructure cokernel(const IntMatrix& A);

struct FixedLattice {
  int rank = 0;
  IntMatrix basis;  // columns
};
FixedLattice fixed_sublattice(const GroupRep& G, const Subgroup& S);

struct H1Result {
  AbelianInvariants invariants;
  std::vector<int> generators;      // the subgroup generators the cocycles are given on
  std::vector<IntMatrix> cocycles;  // one per invariant factor, columns = values on generators
};
/// Z^1 restricted to generators is saturated with rank equal to that of B^1,
/// so H^1 is the torsion of coker of the stacked (g - 1).
H1Result h1(const GroupRep& G, const Subgroup& S);
/// Z^1 as the integer kernel of the full cocycle system on all elements,
/// B^1 inside it, quotient by SNF.  For small subgroups only (TooLarge).
AbelianInvariants h1_cocycle_system(const GroupRep& G, const Subgroup& S, int max_order = 16);
/// Cocycle values on every element of S, from values on S's generators.
std::map<int, IntVector> extend_cocycle(const GroupRep& G, const Subgroup& S, const IntMatrix& on_generators);
/// c(ab) = c(a) + a c(b) for all a, b in S.
bool is_cocycle(const GroupRep& G, const Subgroup& S, const std::map<int, IntVector>& c);
/// Is c restricted to T a coboundary of T?
bool restricts_to_coboundary(const GroupRep& G, const Subgroup& T, const std::map<int, IntVector>& c);

/// Closed forms for a cyclic group <g> of order n.
AbelianInvariants h1_cyclic(const IntMatrix& g, int n);  // ker N / im(g - 1)
AbelianInvariants h2_cyclic(const IntMatrix& g, int n);  // M^g / N M

/// Integer matrix as triplets; repeated positions add up.
struct SparseIntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> entries;
  void add(std::size_t r, std::size_t c, std::int64_t v) { entries.emplace_back(r, c, v); }
  IntMatrix dense() const;
};

/// Elementary divisors of an integer matrix over Z_(p), found mod p^K.
struct LocalDivisors {
  std::uint64_t p = 0;
  int K = 0;
  int rank = 0;                 // pivots of valuation < K
  std::vector<int> valuations;  // the pivots of valuation >= 1
};
/// Dense elimination with a minimal-valuation pivot; p^K <= 256.
LocalDivisors local_divisors(const SparseIntMatrix& A, std::uint64_t p, int K);
AbelianInvariants combine_primary(const std::map<std::uint64_t, std::vector<int>>& valuations);

struct H2Result {
  AbelianInvariants invariants;
  std::map<std::uint64_t, LocalDivisors> local;
  int quotient_rank = 0;  // rank of Maps(S, M) / M
  int expected_rank = 0;  // rank of the stacked matrix forced by the fixed vectors
  bool p_primary_only = false;
  std::vector<std::uint64_t> skipped_primes;
};
/// H^2(S, M) = H^1(S, Q) with Q = Maps(S, M) / M.  Throws ResourceBudgetExceeded
/// when the dense matrix would exceed max_entries, unless allow_partial, in which
/// case the primes that did not fit are skipped and flagged.
H2Result h2(const GroupRep& G, const Subgroup& S, std::size_t max_entries = 60000000, bool allow_partial = false);

/// H^1(S, Maps(S, M)) by the same machinery; zero by Shapiro's lemma.
AbelianInvariants h1_coinduced(const GroupRep& G, const Subgroup& S);

// ---------------------------------------------------------------- subgroups

std::vector<Subgroup> all_subgroups(const GroupRep& G, std::size_t cap = 10000);
std::vector<Subgroup> normal_subgroups(const GroupRep& G, std::size_t cap = 10000);
bool is_normal(const GroupRep& G, const Subgroup& S);

struct CohomologyReport {
  std::string id;
  int order = 0;
  bool normal = false;
  int conjugacy_class = -1;
  std::vector<std::string> generator_words;
  int h0_rank = 0;
  IntMatrix h0_basis;
  AbelianInvariants h1;
  std::optional<AbelianInvariants> h2;
  std::vector<std::string> methods;
  Json to_json() const;
};
CohomologyReport cohomology_report(const GroupRep& G, const Subgroup& S, bool with_h2 = false);

enum class SweepMode { Normal, All };
SweepMode parse_sweep_mode(const std::string& s);  // throws UsageError

struct SweepSummary {
  SweepMode mode = SweepMode::Normal;
  std::vector<CohomologyReport> reports;  // the trivial subgroup included
  // counts and ranks below range over subgroups of order > 1
  int trivial_h1 = 0;
  int nontrivial_h1 = 0;
  bool all_exponent_two = true;  // every H^1 is (Z/2)^i
  std::set<int> h1_ranks;        // the i above
  Json to_json() const;
};
SweepSummary subgroup_sweep(const GroupRep& G, SweepMode mode);

}  // namespace k3pic
