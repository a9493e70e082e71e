#include "k3pic/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace k3pic {

void FiniteGroup::finish() {
  const int n = order();
  inv_.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mul(a, b) == 0) {
        inv_[static_cast<std::size_t>(a)] = b;
        break;
      }
  for (int a = 0; a < n; ++a)
    if (inv_[static_cast<std::size_t>(a)] < 0) throw StructureMismatch("table is not a group");
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table) {
  FiniteGroup G;
  G.table_ = std::move(table);
  G.finish();
  // words from BFS over the greedy generating set
  const auto gens = G.small_generating_set();
  G.gen_index_ = gens;
  G.words_.assign(static_cast<std::size_t>(G.order()), {});
  std::vector<bool> seen(static_cast<std::size_t>(G.order()), false);
  seen[0] = true;
  std::vector<int> queue{0};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const int a = queue[q];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const int b = G.mul(a, gens[i]);
      if (seen[static_cast<std::size_t>(b)]) continue;
      seen[static_cast<std::size_t>(b)] = true;
      G.words_[static_cast<std::size_t>(b)] = G.words_[static_cast<std::size_t>(a)];
      G.words_[static_cast<std::size_t>(b)].push_back(static_cast<int>(i));
      queue.push_back(b);
    }
  }
  return G;
}

int FiniteGroup::element_order(int a) const {
  int k = 1;
  for (int cur = a; cur != 0; cur = mul(cur, a)) ++k;
  return k;
}

std::vector<int> FiniteGroup::generated(const std::vector<int>& gens) const {
  std::vector<bool> in(static_cast<std::size_t>(order()), false);
  in[0] = true;
  std::vector<int> elems{0};
  for (std::size_t q = 0; q < elems.size(); ++q)
    for (int g : gens) {
      const int b = mul(elems[q], g);
      if (!in[static_cast<std::size_t>(b)]) {
        in[static_cast<std::size_t>(b)] = true;
        elems.push_back(b);
      }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

bool FiniteGroup::is_normal(const std::vector<int>& sub) const {
  std::vector<bool> in(static_cast<std::size_t>(order()), false);
  for (int s : sub) in[static_cast<std::size_t>(s)] = true;
  for (int g = 0; g < order(); ++g)
    for (int s : sub)
      if (!in[static_cast<std::size_t>(mul(mul(g, s), inv(g)))]) return false;
  return true;
}

std::vector<int> FiniteGroup::commutator_subgroup() const {
  std::set<int> comms;
  for (int a = 0; a < order(); ++a)
    for (int b = 0; b < order(); ++b) comms.insert(mul(mul(a, b), mul(inv(a), inv(b))));
  return generated(std::vector<int>(comms.begin(), comms.end()));
}

std::vector<std::uint64_t> FiniteGroup::abelianization() const {
  const auto K = commutator_subgroup();
  const int n = order();
  // coset labels
  std::vector<int> coset(static_cast<std::size_t>(n), -1);
  std::vector<int> reps;
  for (int a = 0; a < n; ++a) {
    if (coset[static_cast<std::size_t>(a)] >= 0) continue;
    const int id = static_cast<int>(reps.size());
    reps.push_back(a);
    for (int k : K) coset[static_cast<std::size_t>(mul(a, k))] = id;
  }
  const int m = static_cast<int>(reps.size());
  auto qmul = [&](int x, int y) { return coset[static_cast<std::size_t>(mul(reps[static_cast<std::size_t>(x)], reps[static_cast<std::size_t>(y)]))]; };
  auto qorder = [&](int x) {
    int k = 1;
    for (int cur = x; cur != coset[0]; cur = qmul(cur, x)) ++k;
    return k;
  };
  // elementary divisors from counts of elements of order dividing p^k
  std::vector<std::uint64_t> elementary;
  int rest = m;
  for (int p = 2; rest > 1; ++p) {
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    std::vector<int> count;  // count[k] = log_p #{x : x^(p^k) = 1}
    for (int k = 0;; ++k) {
      long pk = 1;
      for (int i = 0; i < k; ++i) pk *= p;
      int c = 0;
      for (int x = 0; x < m; ++x)
        if (pk % qorder(x) == 0) ++c;
      int lg = 0;
      while (c > 1) {
        c /= p;
        ++lg;
      }
      count.push_back(lg);
      if (k > 0 && count[static_cast<std::size_t>(k)] == count[static_cast<std::size_t>(k - 1)]) break;
    }
    // number of cyclic factors of order >= p^k is count[k] - count[k-1]
    for (std::size_t k = 1; k < count.size(); ++k) {
      const int ge_k = count[k] - count[k - 1];
      const int ge_k1 = k + 1 < count.size() ? count[k + 1] - count[k] : 0;
      std::uint64_t pk = 1;
      for (std::size_t i = 0; i < k; ++i) pk *= static_cast<std::uint64_t>(p);
      for (int r = 0; r < ge_k - ge_k1; ++r) elementary.push_back(pk);
    }
  }
  // elementary divisors -> invariant factors
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_prime;
  for (auto q : elementary) {
    std::uint64_t p = 2;
    while (q % p != 0) ++p;
    by_prime[p].push_back(q);
  }
  std::size_t len = 0;
  for (auto& [p, v] : by_prime) {
    std::sort(v.begin(), v.end(), std::greater<>());
    len = std::max(len, v.size());
  }
  std::vector<std::uint64_t> inv(len, 1);
  for (auto& [p, v] : by_prime)
    for (std::size_t i = 0; i < v.size(); ++i) inv[len - 1 - i] *= v[i];
  return inv;
}

std::vector<int> FiniteGroup::small_generating_set() const {
  std::vector<int> by_order(static_cast<std::size_t>(order()));
  std::iota(by_order.begin(), by_order.end(), 0);
  std::vector<int> ord(static_cast<std::size_t>(order()));
  for (int a = 0; a < order(); ++a) ord[static_cast<std::size_t>(a)] = element_order(a);
  std::stable_sort(by_order.begin(), by_order.end(),
                   [&](int a, int b) { return ord[static_cast<std::size_t>(a)] > ord[static_cast<std::size_t>(b)]; });
  std::vector<int> gens;
  std::vector<int> current{0};
  for (int a : by_order) {
    if (static_cast<int>(current.size()) == order()) break;
    if (std::binary_search(current.begin(), current.end(), a)) continue;
    gens.push_back(a);
    current = generated(gens);
  }
  return gens;
}

FiniteGroup FiniteGroup::subgroup(const std::vector<int>& elems) const {
  std::vector<int> sorted = elems;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty() || sorted[0] != 0) throw StructureMismatch("subgroup must contain the identity");
  std::map<int, int> pos;
  for (std::size_t i = 0; i < sorted.size(); ++i) pos[sorted[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> t(sorted.size(), std::vector<int>(sorted.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      auto it = pos.find(mul(sorted[i], sorted[j]));
      if (it == pos.end()) throw StructureMismatch("not closed under multiplication");
      t[i][j] = it->second;
    }
  return from_table(std::move(t));
}

std::optional<std::vector<int>> find_isomorphism(const FiniteGroup& G, const FiniteGroup& K) {
  if (G.order() != K.order()) return std::nullopt;
  const int n = G.order();
  // order profiles must agree
  std::map<int, int> pg, pk;
  std::vector<int> ordK(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    ++pg[G.element_order(a)];
    ordK[static_cast<std::size_t>(a)] = K.element_order(a);
    ++pk[ordK[static_cast<std::size_t>(a)]];
  }
  if (pg != pk) return std::nullopt;
  const auto gens = G.small_generating_set();
  std::vector<int> images(gens.size(), -1);

  // Extends the map over <gens[0..k]>; false on a conflict.
  auto extend = [&](std::size_t k, std::vector<int>& phi) {
    phi.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> inv_phi(static_cast<std::size_t>(n), -1);
    phi[0] = 0;
    inv_phi[0] = 0;
    std::vector<int> queue{0};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int a = queue[q];
      for (std::size_t i = 0; i <= k; ++i) {
        const int b = G.mul(a, gens[i]);
        const int img = K.mul(phi[static_cast<std::size_t>(a)], images[i]);
        if (phi[static_cast<std::size_t>(b)] < 0) {
          if (inv_phi[static_cast<std::size_t>(img)] >= 0) return false;
          phi[static_cast<std::size_t>(b)] = img;
          inv_phi[static_cast<std::size_t>(img)] = b;
          queue.push_back(b);
        } else if (phi[static_cast<std::size_t>(b)] != img) {
          return false;
        }
      }
    }
    return true;
  };

  std::vector<int> phi;
  std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
    if (k == gens.size()) return extend(k - 1, phi) && std::find(phi.begin(), phi.end(), -1) == phi.end();
    const int want = G.element_order(gens[k]);
    for (int c = 0; c < n; ++c) {
      if (ordK[static_cast<std::size_t>(c)] != want) continue;
      images[k] = c;
      std::vector<int> partial;
      if (!extend(k, partial)) continue;
      if (search(k + 1)) return true;
    }
    return false;
  };
  if (gens.empty()) return std::vector<int>{0};
  if (!search(0)) return std::nullopt;
  return phi;
}

FiniteGroup permutation_group(const std::vector<std::vector<int>>& gens) {
  if (gens.empty()) return FiniteGroup::closure<std::vector<int>>(std::vector<int>{}, {}, [](auto a, auto) { return a; });
  std::vector<int> id(gens[0].size());
  std::iota(id.begin(), id.end(), 0);
  // (a*b)(i) = a(b(i)), i.e. apply b first
  return FiniteGroup::closure(id, gens, [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[static_cast<std::size_t>(b[i])];
    return r;
  });
}

FiniteGroup symmetric_group(int n) {
  std::vector<int> swap(static_cast<std::size_t>(n)), cycle(static_cast<std::size_t>(n));
  std::iota(swap.begin(), swap.end(), 0);
  if (n >= 2) std::swap(swap[0], swap[1]);
  for (int i = 0; i < n; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % n;
  return permutation_group({swap, cycle});
}

FiniteGroup cyclic_group(int n) {
  std::vector<int> cycle(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % n;
  return permutation_group({cycle});
}

FiniteGroup dihedral_group(int n) {
  std::vector<int> rot(static_cast<std::size_t>(n)), refl(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rot[static_cast<std::size_t>(i)] = (i + 1) % n;
    refl[static_cast<std::size_t>(i)] = (n - i) % n;
  }
  return permutation_group({rot, refl});
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int na = a.order(), nb = b.order();
  std::vector<std::vector<int>> t(static_cast<std::size_t>(na * nb), std::vector<int>(static_cast<std::size_t>(na * nb)));
  for (int x = 0; x < na * nb; ++x)
    for (int y = 0; y < na * nb; ++y)
      t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  return FiniteGroup::from_table(std::move(t));
}

std::string format_abelian(const std::vector<std::uint64_t>& invariants) {
  if (invariants.empty()) return "0";
  std::string s;
  for (auto d : invariants) {
    if (!s.empty()) s += " x ";
    s += "Z/" + std::to_string(d);
  }
  return s;
}

}  // namespace k3pic
