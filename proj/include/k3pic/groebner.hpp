#pragma once

#include "k3pic/mpoly.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace k3pic {

struct GroebnerStats {
  std::size_t pairs_considered = 0;
  std::size_t pairs_reduced = 0;
  std::size_t zero_reductions = 0;
};

/// Reduced Groebner basis by Buchberger's algorithm with the coprime-lead
/// and Gebauer-Moeller chain criteria.  Pair selection is by smallest lcm
/// (normal strategy), ties broken by insertion order, so the run is
/// deterministic.  The result is monic, inter-reduced and sorted by
/// decreasing leading monomial; the unit ideal gives {1}.
template <FieldPolicy F>
std::vector<typename PolyRing<F>::Poly> groebner(const PolyRing<F>& R, const std::vector<typename PolyRing<F>::Poly>& gens,
                                                 GroebnerStats* stats = nullptr) {
  using Poly = typename PolyRing<F>::Poly;
  const MonoContext& mc = R.mono();
  struct Pair {
    std::size_t i, j;
    Monomial lcm;
    std::uint64_t serial;
  };
  std::vector<Poly> G;
  std::vector<bool> live;  // false once a lead term is divisible by a later element
  std::vector<Pair> B;
  std::uint64_t serial = 0;
  GroebnerStats st;

  auto is_unit = [](const Poly& p) { return !p.is_zero() && p.lead().m.is_one(); };

  auto update = [&](Poly h) {
    const std::size_t hi = G.size();
    const Monomial& lh = h.lead().m;
    // candidate new pairs
    std::vector<Pair> C;
    for (std::size_t g = 0; g < G.size(); ++g)
      if (live[g]) C.push_back({g, hi, mc.lcm(G[g].lead().m, lh), 0});
    // chain criterion among the new pairs
    std::vector<Pair> D;
    for (std::size_t a = 0; a < C.size(); ++a) {
      const bool cop = MonoContext::coprime(G[C[a].i].lead().m, lh);
      bool keep = true;
      if (!cop) {
        for (std::size_t b = 0; b < C.size() && keep; ++b) {
          if (a == b || !MonoContext::divides(C[b].lcm, C[a].lcm)) continue;
          // strict divisibility, or equal lcm with an earlier kept pair
          if (!(C[b].lcm == C[a].lcm) || b < a) keep = false;
        }
      }
      if (keep) D.push_back(C[a]);
    }
    // old pairs made redundant by h
    std::vector<Pair> kept;
    for (const auto& p : B) {
      const bool drop = MonoContext::divides(lh, p.lcm) && !(mc.lcm(G[p.i].lead().m, lh) == p.lcm) &&
                        !(mc.lcm(G[p.j].lead().m, lh) == p.lcm);
      if (!drop) kept.push_back(p);
    }
    B = std::move(kept);
    for (auto& p : D) {
      if (MonoContext::coprime(G[p.i].lead().m, lh)) continue;  // product criterion
      p.serial = serial++;
      B.push_back(p);
    }
    for (std::size_t g = 0; g < G.size(); ++g)
      if (live[g] && MonoContext::divides(lh, G[g].lead().m)) live[g] = false;
    G.push_back(std::move(h));
    live.push_back(true);
  };

  auto live_basis = [&]() {
    std::vector<Poly> out;
    for (std::size_t g = 0; g < G.size(); ++g)
      if (live[g]) out.push_back(G[g]);
    return out;
  };

  for (const auto& f : gens) {
    Poly h = R.reduce(f, live_basis());
    if (h.is_zero()) continue;
    h = R.monic(h);
    if (is_unit(h)) {
      if (stats) *stats = st;
      return {R.constant(R.field().one())};
    }
    update(std::move(h));
  }

  while (!B.empty()) {
    auto best = std::min_element(B.begin(), B.end(), [](const Pair& a, const Pair& b) {
      if (a.lcm.key != b.lcm.key) {
        const int da = a.lcm.degree(), db = b.lcm.degree();
        if (da != db) return da < db;
        return a.lcm.key < b.lcm.key;
      }
      return a.serial < b.serial;
    });
    const Pair p = *best;
    B.erase(best);
    ++st.pairs_considered;
    const Poly& f = G[p.i];
    const Poly& g = G[p.j];
    const auto& K = R.field();
    Poly s = R.sub(R.mul_term(f, mc.div(p.lcm, f.lead().m), K.inv(f.lead().c)),
                   R.mul_term(g, mc.div(p.lcm, g.lead().m), K.inv(g.lead().c)));
    Poly h = R.reduce(std::move(s), live_basis());
    ++st.pairs_reduced;
    if (h.is_zero()) {
      ++st.zero_reductions;
      continue;
    }
    h = R.monic(h);
    if (is_unit(h)) {
      if (stats) *stats = st;
      return {R.constant(K.one())};
    }
    update(std::move(h));
  }

  // minimal basis, then inter-reduce
  std::vector<Poly> minimal;
  for (std::size_t a = 0; a < G.size(); ++a) {
    bool redundant = false;
    for (std::size_t b = 0; b < G.size() && !redundant; ++b) {
      if (a == b || !MonoContext::divides(G[b].lead().m, G[a].lead().m)) continue;
      redundant = !(G[b].lead().m == G[a].lead().m) || b < a;
    }
    if (!redundant) minimal.push_back(G[a]);
  }
  std::sort(minimal.begin(), minimal.end(),
            [](const Poly& a, const Poly& b) { return a.lead().m.key > b.lead().m.key; });
  std::vector<Poly> reduced;
  for (std::size_t a = 0; a < minimal.size(); ++a) {
    std::vector<Poly> others;
    for (std::size_t b = 0; b < minimal.size(); ++b)
      if (b != a) others.push_back(minimal[b]);
    Poly tail = minimal[a];
    const Term<typename F::value_type> lead = tail.lead();
    tail.terms.erase(tail.terms.begin());
    Poly r = R.reduce(std::move(tail), others);
    r.terms.insert(r.terms.begin(), lead);
    reduced.push_back(R.monic(r));
  }
  if (stats) *stats = st;
  return reduced;
}

/// Dimension of F[x]/I from a Groebner basis: nullopt if the ideal is not
/// zero-dimensional, 0 for the unit ideal.  Counting stops at `cap`.
template <FieldPolicy F>
std::optional<std::uint64_t> zerodim_degree_of_basis(const PolyRing<F>& R,
                                                     const std::vector<typename PolyRing<F>::Poly>& basis,
                                                     std::uint64_t cap = 10'000'000) {
  const int n = R.nvars();
  std::vector<Monomial> leads;
  for (const auto& g : basis) {
    if (g.is_zero()) continue;
    if (g.lead().m.is_one()) return 0;
    leads.push_back(g.lead().m);
  }
  std::vector<int> bound(static_cast<std::size_t>(n), -1);
  for (const auto& m : leads) {
    int nonzero = 0, var = -1;
    for (int i = 0; i < n; ++i)
      if (m.exp(i) > 0) {
        ++nonzero;
        var = i;
      }
    if (nonzero == 1) {
      auto& b = bound[static_cast<std::size_t>(var)];
      b = b < 0 ? m.exp(var) : std::min(b, m.exp(var));
    }
  }
  for (int b : bound)
    if (b < 0) return std::nullopt;
  // count standard monomials by depth-first enumeration inside the box
  std::uint64_t count = 0;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  const MonoContext& mc = R.mono();
  auto standard = [&](const std::vector<int>& ex) {
    const Monomial m = mc.make(ex);
    for (const auto& l : leads)
      if (MonoContext::divides(l, m)) return false;
    return true;
  };
  // depth-first over the box, cutting a branch once its prefix is non-standard
  std::function<void(int)> rec = [&](int i) {
    if (count > cap) return;
    if (i == n) {
      if (standard(e)) ++count;
      return;
    }
    for (int v = 0; v < bound[static_cast<std::size_t>(i)]; ++v) {
      e[static_cast<std::size_t>(i)] = v;
      std::vector<int> partial = e;
      for (int k = i + 1; k < n; ++k) partial[static_cast<std::size_t>(k)] = 0;
      if (!standard(partial)) break;
      rec(i + 1);
    }
    e[static_cast<std::size_t>(i)] = 0;
  };
  rec(0);
  if (count > cap) throw UsageError("standard monomial count exceeds cap");
  return count;
}

template <FieldPolicy F>
std::optional<std::uint64_t> zerodim_degree(const PolyRing<F>& R, const std::vector<typename PolyRing<F>::Poly>& gens) {
  return zerodim_degree_of_basis(R, groebner(R, gens));
}

}  // namespace k3pic
