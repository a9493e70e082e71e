#pragma once

#include "k3pic/integer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace k3pic {

class Degenerate : public VerificationError {
 public:
  using VerificationError::VerificationError;
};
class NotEven : public UsageError {
 public:
  using UsageError::UsageError;
};
class TooLarge : public UsageError {
 public:
  using UsageError::UsageError;
};
class NotFullRank : public UsageError {
 public:
  using UsageError::UsageError;
};

// ---------------------------------------------------------------- exact linear algebra

/// Determinant by fraction-free (Bareiss) elimination.
Integer det_bareiss(const IntMatrix& A);
/// Rank over Q (fraction-free elimination).
int rank_of(const IntMatrix& A);

/// U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ... (nonnegative).
struct SmithForm {
  IntMatrix U, D, V;
  std::vector<Integer> diagonal() const;
};
SmithForm smith_normal_form(const IntMatrix& A);

/// Unique X with A X = B, A square and nonsingular.  Throws Degenerate.
RatMatrix solve_rational(const IntMatrix& A, const RatMatrix& B);
RatMatrix to_rational(const IntMatrix& A);
/// Entries all integral.
bool is_integral(const RatMatrix& A);
IntMatrix to_integer(const RatMatrix& A);  // throws UsageError if not integral

struct Signature {
  int pos = 0, neg = 0, zero = 0;
  bool operator==(const Signature&) const = default;
};
/// Congruence diagonalization over Q.
Signature signature(const IntMatrix& sym);

// ---------------------------------------------------------------- lattices

struct IntLattice {
  IntMatrix gram;
  std::string name;

  int rank() const { return static_cast<int>(gram.rows()); }
  /// Validates symmetry and nondegeneracy (Degenerate otherwise).
  static IntLattice from_gram(IntMatrix gram, std::string name = {});
  bool is_even() const;
  Integer det() const { return det_bareiss(gram); }
};

struct LatticeInvariants {
  int rank = 0;
  Integer det;
  Signature sig;
  bool even = false;
  std::string format() const;
};
LatticeInvariants invariants(const IntLattice& L);

IntLattice lattice_U();
IntLattice lattice_A(int n, long m = 1);
IntLattice lattice_E8(long m = 1);
/// "U", "A5(-1)", "A_2(-4)", "E8(-1)", "E_8"; throws UsageError.
IntLattice named_lattice(const std::string& name);
IntLattice direct_sum(const IntLattice& a, const IntLattice& b);
IntLattice direct_sum(const std::vector<IntLattice>& parts);
/// U + E8(-1) + A5(-1) + A2(-1) + A2(-4).
IntLattice target_lattice();

struct DiscGroup {
  std::vector<Integer> invariants;  // d1 | d2 | ..., each > 1
  RatMatrix generators;             // rank x k, columns in L tensor Q coordinates
  Integer order() const;
  int length() const { return static_cast<int>(invariants.size()); }
  std::string format() const;
};
DiscGroup discriminant_group(const IntLattice& L);
/// Same group with generators from a given SNF (for well-definedness checks).
DiscGroup discriminant_group(const IntLattice& L, const SmithForm& snf);

struct DiscForm {
  std::vector<Integer> orders;
  std::vector<Rational> q;  // in [0, 2)
  RatMatrix b;              // entries in [0, 1)
};
Rational mod_rational(const Rational& x, long m);
DiscForm discriminant_form(const IntLattice& L);
DiscForm discriminant_form(const IntLattice& L, const DiscGroup& A);

/// Brute-force search for a group isomorphism preserving q (and hence b).
bool finite_qform_isomorphic(const DiscForm& a, const DiscForm& b, long max_order = 100000);

enum class NikulinOutcome { Equivalent, NotEquivalent, Inapplicable };
struct NikulinResult {
  NikulinOutcome outcome = NikulinOutcome::Inapplicable;
  int length = 0;  // l(A)
  std::string reason;
  bool certified() const { return outcome != NikulinOutcome::Inapplicable; }
};
NikulinResult nikulin_equivalent(const IntLattice& a, const IntLattice& b);

/// [L : L_sub] for L_sub spanned by the columns of `basis` (L coordinates);
/// checks det(L_sub) = index^2 det(L).
Integer index_relation(const IntLattice& L, const IntMatrix& basis);

std::string format_matrix(const IntMatrix& A);

}  // namespace k3pic
