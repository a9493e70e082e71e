#pragma once

#include "k3pic/surface.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace k3pic {

class CommonComponent : public VerificationError {
 public:
  using VerificationError::VerificationError;
};

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

/// A divisor curve with coefficients pushed through an embedding.
struct EmbeddedCurve {
  std::vector<FiniteField::value_type> q;  // Form(2) layout
  std::vector<FiniteField::value_type> g;  // Form(3) layout
  std::string label;
  std::string key;  // reduced Groebner basis of (q, w - g), serialized
};

/// Throws BadReduction if a coefficient does not reduce.
EmbeddedCurve embed_curve(const DivisorCurve& D, const Embedding& emb);

/// Reduced grevlex basis of (q, w - g) in F[x, y, z, w], one line per element.
std::string divisor_key(const std::vector<FiniteField::value_type>& q, const std::vector<FiniteField::value_type>& g,
                        const FiniteField& K);

/// Embedded keys agree and the symbolic check confirms.
bool divisor_equal(const DivisorCurve& a, const DivisorCurve& b, const Embedding& emb);

struct IntersectionRecord {
  std::string label_a, label_b;
  std::int64_t value = 0;
  std::array<std::uint64_t, 3> charts{};  // per-stratum degrees, in priority order
  bool same_curve = false;
};

/// Strata {c0 != 0}, {c0 = 0, c1 != 0}, {c0 = c1 = 0} for priority (c0, c1, c2).
using ChartPriority = std::array<int, 3>;
inline constexpr ChartPriority kDefaultCharts{0, 1, 2};

IntersectionRecord intersect_embedded(const EmbeddedCurve& a, const EmbeddedCurve& b, const FiniteField& K,
                                      const ChartPriority& priority = kDefaultCharts);
std::int64_t intersection_number(const DivisorCurve& a, const DivisorCurve& b, const Embedding& emb);

/// Degree of (q, w - g, l) for a pseudo-random line l; must be 2.
std::int64_t intersection_with_hyperplane(const DivisorCurve& D, const Embedding& emb, std::uint64_t seed = 1);

/// Content-addressed on-disk memo of intersection records.
class IntersectionCache {
 public:
  explicit IntersectionCache(std::filesystem::path dir);
  /// The flag if given, else K3PIC_CACHE_DIR; nullopt if neither.
  static std::optional<std::filesystem::path> resolve_dir(const std::optional<std::filesystem::path>& flag);

  std::optional<IntersectionRecord> load(const std::string& key) const;
  void store(const std::string& key, const IntersectionRecord& rec, const Embedding& emb) const;
  static std::string cache_key(const EmbeddedCurve& a, const EmbeddedCurve& b, const Embedding& emb);
  std::filesystem::path path_for(const std::string& key) const;
  std::size_t hits() const { return hits_; }

 private:
  std::filesystem::path dir_;
  mutable std::size_t hits_ = 0;
};

/// Symmetric matrix of pairwise intersection numbers.
IntMatrix intersection_matrix(const std::vector<EmbeddedCurve>& curves, const Embedding& emb,
                              const IntersectionCache* cache = nullptr);

/// Compares intersection numbers of the given index pairs at a second embedding.
struct PrimeCheck {
  std::string field;
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  bool ok() const { return mismatches == 0; }
};
PrimeCheck second_prime_check(const std::vector<DivisorCurve>& curves,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs, const IntMatrix& gram,
                              const Embedding& second);

struct Orbit {
  std::vector<DivisorCurve> curves;
  std::vector<EmbeddedCurve> embedded;
  std::vector<std::size_t> source;  // index into the seed list
  std::vector<SurfAut> via;         // curves[i] = via[i](seeds[source[i]])
  std::map<std::string, std::size_t> orbit_sizes;  // per seed label: new curves it contributed
  std::size_t symbolic_confirmations = 0;
};

/// Closure of the seeds under the generators, deduplicated by divisor_equal and
/// labeled by breadth-first (shortest) words.
Orbit orbit_generate(const std::vector<DivisorCurve>& seeds, const std::vector<SurfAut>& gens, const Embedding& emb);
/// Generators psi_(x,y), psi_(y,z), psi_{3,0,0}, psi_{1,5,0} as SurfAuts.
std::vector<SurfAut> h_surf_generators();

}  // namespace k3pic
