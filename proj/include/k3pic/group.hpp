#pragma once

#include "k3pic/integer.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace k3pic {

class StructureMismatch : public VerificationError {
 public:
  using VerificationError::VerificationError;
};

/// Finite group given by its multiplication table; element 0 is the identity.
/// Elements carry the word (generator indices, applied left to right) by
/// which breadth-first closure first reached them.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  /// Closure of the generators under a black-box product.  Only |G|·|gens|
  /// products are evaluated; the rest of the table is filled from words.
  template <typename T, typename Mul, typename Less = std::less<T>>
  static FiniteGroup closure(const T& identity, const std::vector<T>& gens, Mul mul, std::vector<T>* elements = nullptr,
                             std::size_t cap = 100000);

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int inv(int a) const { return inv_[static_cast<std::size_t>(a)]; }
  int ngens() const { return static_cast<int>(gen_index_.size()); }
  int gen(int i) const { return gen_index_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& word(int a) const { return words_[static_cast<std::size_t>(a)]; }
  int element_order(int a) const;

  /// Subgroup generated by a set of elements, as a sorted element list.
  std::vector<int> generated(const std::vector<int>& gens) const;
  bool is_normal(const std::vector<int>& sub) const;
  std::vector<int> commutator_subgroup() const;
  /// Invariant factors of G/[G,G] (each > 1, d1 | d2 | ...).
  std::vector<std::uint64_t> abelianization() const;
  /// Small generating set, chosen greedily by decreasing element order.
  std::vector<int> small_generating_set() const;
  /// Group table restricted to a subgroup, re-indexed (identity first).
  FiniteGroup subgroup(const std::vector<int>& elems) const;

  /// Builds a group directly from a complete multiplication table.
  static FiniteGroup from_table(std::vector<std::vector<int>> table);

 private:
  void finish();
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
  std::vector<int> gen_index_;
  std::vector<std::vector<int>> words_;
};

/// Isomorphism G -> K as an element map, found by backtracking over images of a
/// small generating set of G.
std::optional<std::vector<int>> find_isomorphism(const FiniteGroup& G, const FiniteGroup& K);

/// Permutation group on {0..n-1} generated by the given permutations (images lists).
FiniteGroup permutation_group(const std::vector<std::vector<int>>& gens);
/// Standard model groups.
FiniteGroup symmetric_group(int n);
FiniteGroup cyclic_group(int n);
FiniteGroup dihedral_group(int n);  // order 2n
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

std::string format_abelian(const std::vector<std::uint64_t>& invariants);

template <typename T, typename Mul, typename Less>
FiniteGroup FiniteGroup::closure(const T& identity, const std::vector<T>& gens, Mul mul, std::vector<T>* elements,
                                 std::size_t cap) {
  std::vector<T> elems{identity};
  std::map<T, int, Less> index{{identity, 0}};
  std::vector<std::vector<int>> right;  // right[a][i] = a * gens[i]
  std::vector<std::vector<int>> words{{}};
  for (std::size_t a = 0; a < elems.size(); ++a) {
    std::vector<int> row(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      T prod = mul(elems[a], gens[i]);
      auto it = index.find(prod);
      if (it == index.end()) {
        if (elems.size() >= cap) throw UsageError("ClosureBudgetExceeded");
        it = index.emplace(prod, static_cast<int>(elems.size())).first;
        elems.push_back(std::move(prod));
        auto w = words[a];
        w.push_back(static_cast<int>(i));
        words.push_back(std::move(w));
      }
      row[i] = it->second;
    }
    right.push_back(std::move(row));
  }
  const std::size_t n = elems.size();
  FiniteGroup G;
  G.table_.assign(n, std::vector<int>(n, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      int cur = static_cast<int>(a);
      for (int g : words[b]) cur = right[static_cast<std::size_t>(cur)][static_cast<std::size_t>(g)];
      G.table_[a][b] = cur;
    }
  for (std::size_t i = 0; i < gens.size(); ++i) G.gen_index_.push_back(right[0][i]);
  G.words_ = std::move(words);
  G.finish();
  if (elements) *elements = std::move(elems);
  return G;
}

}  // namespace k3pic
