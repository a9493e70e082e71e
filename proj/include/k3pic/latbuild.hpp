#pragma once

#include "k3pic/intersect.hpp"
#include "k3pic/lattice.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace k3pic {

class RankMismatch : public VerificationError {
 public:
  using VerificationError::VerificationError;
};
class NonIntegralClass : public VerificationError {
 public:
  using VerificationError::VerificationError;
};
class NoSolution : public VerificationError {
 public:
  using VerificationError::VerificationError;
};
class NotIsometry : public VerificationError {
 public:
  using VerificationError::VerificationError;
};
class ClosureBudgetExceeded : public UsageError {
 public:
  using UsageError::UsageError;
};

inline constexpr int kPicardRank = 19;

/// Lattice spanned by a set of divisors modulo the radical of their pairing.
struct OrbitLattice {
  std::vector<std::string> labels;
  std::vector<DivisorCurve> divisors;      // may be empty when built from a bare matrix
  std::vector<EmbeddedCurve> embedded;     // idem
  IntMatrix M;                             // n x n intersection matrix
  IntMatrix basis;                         // n x r, basis classes as divisor combinations
  IntMatrix classes;                       // r x n, coordinates of each divisor class
  IntLattice lattice;                      // gram = basis^T M basis

  int rank() const { return lattice.rank(); }
  std::size_t size() const { return labels.size(); }
  const IntMatrix& gram() const { return lattice.gram; }
  /// Divisors with a nonzero coefficient in some basis vector.
  std::vector<std::size_t> support() const;
  std::size_t index_of(const std::string& label) const;  // throws UsageError
};

/// Radical quotient of a symmetric intersection matrix.  The basis is grown
/// along the divisor order: a divisor is taken when it keeps the span
/// primitive, and the last vectors are completed by small combinations.
/// Throws RankMismatch unless the rank equals expected_rank (0 = any).
OrbitLattice quotient_by_radical(const IntMatrix& M, std::vector<std::string> labels, int expected_rank = kPicardRank);

/// Sorts the orbit by label, computes the intersection matrix (through the
/// cache if given) and takes the quotient.
OrbitLattice build_orbit_lattice(const Orbit& orbit, const Embedding& emb, const IntersectionCache* cache = nullptr);

/// Coordinates of D from its intersections with the basis.  Throws NonIntegralClass.
IntVector class_of_divisor(const DivisorCurve& D, const OrbitLattice& OL, const Embedding& emb);
IntVector class_of_embedded(const EmbeddedCurve& D, const OrbitLattice& OL, const FiniteField& K);

/// Solves l . D = 2 for every divisor; checks integrality and l^2 = 2.
IntVector hyperplane_class(const OrbitLattice& OL);

struct IsometryRep {
  std::string name;
  SurfAut source;
  IntMatrix matrix;
};
IsometryRep isometry_matrix(const SurfAut& a, const OrbitLattice& OL, const Embedding& emb);
/// M^T G M = G and det M = +-1.
bool is_isometry(const IntMatrix& M, const IntMatrix& gram);

/// psi generators of H followed by tau1..tau5.
std::vector<SurfAut> g_generators();
std::vector<IsometryRep> generator_isometries(const OrbitLattice& OL, const Embedding& emb);

using SmallMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
SmallMatrix to_small(const IntMatrix& A);  // throws TooLarge
IntMatrix to_big(const SmallMatrix& A);

struct SmallMatrixLess {
  bool operator()(const SmallMatrix& a, const SmallMatrix& b) const;
};

/// Breadth-first closure under right multiplication by the generators.
struct MatrixGroup {
  std::vector<SmallMatrix> generators;
  std::vector<SmallMatrix> elements;   // elements[0] = identity
  std::vector<std::vector<int>> words;  // generator indices, applied left to right
  std::map<SmallMatrix, int, SmallMatrixLess> index;

  int order() const { return static_cast<int>(elements.size()); }
  bool contains(const SmallMatrix& A) const { return index.count(A) > 0; }
  /// Multiplication table in the same element order.  Throws TooLarge above max_order.
  FiniteGroup abstract(int max_order = 5000) const;
};
MatrixGroup matrix_group_closure(const std::vector<IntMatrix>& generators, std::size_t cap = 100000);

/// Everything downstream stages need from the lattice construction.
struct LatticeBundle {
  std::string t0;
  std::uint64_t p = 0;
  int m = 0;
  std::vector<std::string> labels;
  IntMatrix basis;
  IntMatrix classes;
  IntMatrix gram;
  IntVector hyperplane;
  std::vector<std::string> generator_names;
  std::vector<IntMatrix> generators;  // psi generators first, then tau1..tau5
  int n_h_generators = 0;
  IntMatrix psi030;  // psi_{0,3,0}, used to order the witness search

  std::vector<IntMatrix> h_generators() const;
  std::vector<IntMatrix> gal_generators() const;
  IntVector divisor_class(const std::string& label) const;
  std::string to_json() const;
  static LatticeBundle from_json(const std::string& text);  // throws UsageError
};
LatticeBundle make_bundle(const OrbitLattice& OL, const std::vector<IsometryRep>& gens, const IntVector& hyperplane,
                          const Embedding& emb);
/// Orbit, quotient, hyperplane class and generator matrices in one go.
LatticeBundle build_lattice_bundle(const Embedding& emb, const IntersectionCache* cache = nullptr,
                                   OrbitLattice* lattice_out = nullptr);

}  // namespace k3pic
