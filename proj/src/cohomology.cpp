#include "k3pic/cohomology.hpp"

#include <algorithm>
#include <numeric>

namespace k3pic {

namespace {

using Idx = Eigen::Index;

Integer iabs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

std::uint64_t to_u64(const Integer& v) {
  if (!v.fits_ulong_p()) throw TooLarge("invariant factor does not fit in 64 bits");
  return v.get_ui();
}

IntMatrix stacked_differences(const GroupRep& G, const std::vector<int>& gens) {
  const Idx n = G.rank();
  IntMatrix A(n * static_cast<Idx>(gens.size()), n);
  for (std::size_t j = 0; j < gens.size(); ++j)
    A.block(static_cast<Idx>(j) * n, 0, n, n) = G.matrix(gens[j]) - IntMatrix::Identity(n, n);
  return A;
}

// Coordinates of the columns of B in the saturated basis K (columns).
IntMatrix coordinates(const IntMatrix& K, const IntMatrix& B) {
  const Idx z = K.cols();
  if (z == 0) {
    if (B.size() > 0 && !B.isZero()) throw VerificationError("vector outside a zero lattice");
    return IntMatrix(0, B.cols());
  }
  const SmithForm s = smith_normal_form(K);
  for (Idx i = 0; i < z; ++i)
    if (s.D(i, i) != 1) throw VerificationError("basis is not primitive");
  const IntMatrix UB = s.U * B;
  if (!UB.bottomRows(UB.rows() - z).isZero()) throw VerificationError("vector outside the lattice");
  const IntMatrix top = UB.topRows(z);
  return s.V * top;
}

// Free rank must vanish; returns the torsion.
AbelianInvariants finite_cokernel(const IntMatrix& A, const char* what) {
  const CokernelStructure c = cokernel(A);
  if (c.free_rank != 0) throw VerificationError(std::string(what) + ": quotient is not finite");
  return c.torsion;
}

IntMatrix matrix_power_sum(const IntMatrix& g, int n) {
  IntMatrix N = IntMatrix::Zero(g.rows(), g.cols());
  IntMatrix P = IntMatrix::Identity(g.rows(), g.cols());
  for (int i = 0; i < n; ++i) {
    N += P;
    P = (P * g).eval();
  }
  if (P != IntMatrix::Identity(g.rows(), g.cols())) throw UsageError("matrix order does not divide n");
  return N;
}

int p_valuation(std::uint64_t n, std::uint64_t p) {
  int v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t q) {
  std::int64_t r0 = q, r1 = ((a % q) + q) % q, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t t = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - t * s1);
  }
  if (r0 != 1) throw UsageError("not a unit");
  return ((s0 % q) + q) % q;
}

// Q = 0: modulus known only at run time.
template <unsigned Q>
void eliminate(std::vector<std::uint16_t>& a, std::size_t R, std::size_t C, unsigned p, int K, unsigned q_rt,
               LocalDivisors& out) {
  const unsigned q = Q ? Q : q_rt;
  std::vector<char> row_alive(R, 1), col_done(C, 0);
  unsigned pv = 1;
  for (int v = 0; v < K; ++v, pv *= p) {
    const unsigned pv1 = pv * p;
    for (std::size_t c = 0; c < C; ++c) {
      if (col_done[c]) continue;
      std::size_t piv = R;
      for (std::size_t r = 0; r < R; ++r)
        if (row_alive[r] && a[r * C + c] % pv1 != 0) {
          piv = r;
          break;
        }
      if (piv == R) continue;
      const std::uint16_t* pr = &a[piv * C];
      const auto uinv = static_cast<unsigned>(mod_inverse(pr[c] / pv, q));
      for (std::size_t r = 0; r < R; ++r) {
        if (!row_alive[r] || r == piv) continue;
        std::uint16_t* rr = &a[r * C];
        if (rr[c] == 0) continue;
        const unsigned f = (rr[c] / pv) * uinv % q;
        const auto nf = static_cast<std::uint16_t>(q - f);
        for (std::size_t j = 0; j < C; ++j)
          rr[j] = static_cast<std::uint16_t>((static_cast<unsigned>(rr[j]) + nf * pr[j]) % q);
      }
      row_alive[piv] = 0;
      col_done[c] = 1;
      ++out.rank;
      if (v > 0) out.valuations.push_back(v);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- group representation

std::string GroupRep::word_name(int a) const {
  const auto& w = words[static_cast<std::size_t>(a)];
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += "*";
    s += generator_names[static_cast<std::size_t>(w[i])];
  }
  return s;
}

GroupRep make_group_rep(const std::vector<IntMatrix>& generators, const std::vector<std::string>& names,
                        const IntMatrix& gram) {
  if (generators.size() != names.size()) throw UsageError("make_group_rep: one name per generator");
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (!is_isometry(generators[i], gram)) throw NotIsometry(names[i] + " does not preserve the gram matrix");
  const MatrixGroup mg = matrix_group_closure(generators);
  GroupRep G;
  G.elements = mg.elements;
  G.words = mg.words;
  G.generator_names = names;
  for (const auto& g : mg.generators) G.generators.push_back(mg.index.at(g));
  const std::size_t n = G.elements.size();
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const SmallMatrix prod = G.elements[a] * G.elements[b];
      t[a][b] = mg.index.at(prod);
    }
  G.table = FiniteGroup::from_table(std::move(t));
  return G;
}

GroupRep galois_rep(const LatticeBundle& b) {
  const auto gens = b.gal_generators();
  std::vector<std::string> names(b.generator_names.begin() + b.n_h_generators, b.generator_names.end());
  return make_group_rep(gens, names, b.gram);
}

Subgroup whole_group(const GroupRep& G) {
  Subgroup S;
  S.elements.resize(static_cast<std::size_t>(G.order()));
  std::iota(S.elements.begin(), S.elements.end(), 0);
  S.generators = G.generators;
  return S;
}

Subgroup subgroup_generated(const GroupRep& G, const std::vector<int>& gens) {
  Subgroup S;
  S.elements = G.table.generated(gens);
  for (int g : gens)
    if (g != 0 && std::find(S.generators.begin(), S.generators.end(), g) == S.generators.end()) S.generators.push_back(g);
  return S;
}

// ---------------------------------------------------------------- integer linear algebra

IntMatrix integer_kernel(const IntMatrix& A0) {
  // column echelon form by extended-gcd column operations
  IntMatrix A = A0;
  const Idx m = A.rows(), n = A.cols();
  IntMatrix V = IntMatrix::Identity(n, n);
  Idx t = 0;
  for (Idx i = 0; i < m && t < n; ++i) {
    for (;;) {
      Idx best = -1;
      for (Idx j = t; j < n; ++j)
        if (A(i, j) != 0 && (best < 0 || iabs(A(i, j)) < iabs(A(i, best)))) best = j;
      if (best < 0) break;
      if (best != t) {
        A.col(t).swap(A.col(best));
        V.col(t).swap(V.col(best));
      }
      bool done = true;
      for (Idx j = t + 1; j < n; ++j) {
        if (A(i, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A(i, j).get_mpz_t(), A(i, t).get_mpz_t());
        A.col(j) -= q * A.col(t);
        V.col(j) -= q * V.col(t);
        if (A(i, j) != 0) done = false;
      }
      if (done) {
        ++t;
        break;
      }
    }
  }
  return V.rightCols(n - t);
}

CokernelStructure cokernel(const IntMatrix& A) {
  CokernelStructure c;
  int nonzero = 0;
  if (A.rows() > 0 && A.cols() > 0)
    for (const auto& d : smith_normal_form(A).diagonal()) {
      if (d == 0) continue;
      ++nonzero;
      if (d != 1) c.torsion.push_back(to_u64(d));
    }
  c.free_rank = static_cast<int>(A.rows()) - nonzero;
  return c;
}

IntMatrix SparseIntMatrix::dense() const {
  IntMatrix A = IntMatrix::Zero(static_cast<Idx>(rows), static_cast<Idx>(cols));
  for (const auto& [r, c, v] : entries) A(static_cast<Idx>(r), static_cast<Idx>(c)) += Integer(static_cast<long>(v));
  return A;
}

LocalDivisors local_divisors(const SparseIntMatrix& A, std::uint64_t p, int K) {
  std::uint64_t q = 1;
  for (int i = 0; i < K; ++i) q *= p;
  if (K < 1 || q > 256) throw TooLarge("local_divisors: p^K must be at most 256");
  const auto qi = static_cast<std::int64_t>(q);
  std::vector<std::uint16_t> a(A.rows * A.cols, 0);
  std::vector<std::int64_t> acc(A.rows * A.cols, 0);
  for (const auto& [r, c, v] : A.entries) acc[r * A.cols + c] += v;
  for (std::size_t i = 0; i < acc.size(); ++i) a[i] = static_cast<std::uint16_t>(((acc[i] % qi) + qi) % qi);
  acc.clear();
  acc.shrink_to_fit();
  LocalDivisors out;
  out.p = p;
  out.K = K;
  const auto pu = static_cast<unsigned>(p);
  const auto qu = static_cast<unsigned>(q);
  switch (q) {
    case 2: eliminate<2>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 4: eliminate<4>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 8: eliminate<8>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 16: eliminate<16>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 32: eliminate<32>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 64: eliminate<64>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 128: eliminate<128>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 256: eliminate<256>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 3: eliminate<3>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 9: eliminate<9>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 27: eliminate<27>(a, A.rows, A.cols, pu, K, qu, out); break;
    case 81: eliminate<81>(a, A.rows, A.cols, pu, K, qu, out); break;
    default: eliminate<0>(a, A.rows, A.cols, pu, K, qu, out); break;
  }
  std::sort(out.valuations.begin(), out.valuations.end());
  return out;
}

AbelianInvariants combine_primary(const std::map<std::uint64_t, std::vector<int>>& valuations) {
  std::size_t len = 0;
  for (const auto& [p, vs] : valuations) len = std::max(len, vs.size());
  AbelianInvariants inv(len, 1);
  for (const auto& [p, vs0] : valuations) {
    auto vs = vs0;
    std::sort(vs.begin(), vs.end());
    // largest powers go to the last factors
    for (std::size_t i = 0; i < vs.size(); ++i) {
      std::uint64_t pk = 1;
      for (int e = 0; e < vs[i]; ++e) pk *= p;
      inv[len - vs.size() + i] *= pk;
    }
  }
  inv.erase(std::remove(inv.begin(), inv.end(), std::uint64_t{1}), inv.end());
  return inv;
}

// ---------------------------------------------------------------- H^0, H^1

FixedLattice fixed_sublattice(const GroupRep& G, const Subgroup& S) {
  FixedLattice F;
  if (S.generators.empty()) {
    F.basis = IntMatrix::Identity(G.rank(), G.rank());
  } else {
    F.basis = integer_kernel(stacked_differences(G, S.generators));
  }
  F.rank = static_cast<int>(F.basis.cols());
  return F;
}

H1Result h1(const GroupRep& G, const Subgroup& S) {
  H1Result r;
  r.generators = S.generators;
  if (S.generators.empty()) return r;
  const IntMatrix A = stacked_differences(G, S.generators);
  const SmithForm s = smith_normal_form(A);
  const Idx n = G.rank();
  const auto k = static_cast<Idx>(S.generators.size());
  for (Idx i = 0; i < std::min(A.rows(), A.cols()); ++i) {
    const Integer& d = s.D(i, i);
    if (d == 0 || d == 1) continue;
    r.invariants.push_back(to_u64(d));
    // A V e_i = d U^{-1} e_i, and U^{-1} e_i generates the i-th cyclic factor
    IntVector x = A * s.V.col(i);
    for (Idx j = 0; j < x.size(); ++j) {
      if (x(j) % d != 0) throw VerificationError("h1: inexact division");
      x(j) /= d;
    }
    IntMatrix c(n, k);
    for (Idx j = 0; j < k; ++j) c.col(j) = x.segment(j * n, n);
    r.cocycles.push_back(std::move(c));
  }
  return r;
}

AbelianInvariants h1_cocycle_system(const GroupRep& G, const Subgroup& S, int max_order) {
  if (S.order() > max_order) throw TooLarge("h1_cocycle_system: subgroup order " + std::to_string(S.order()));
  const Idx n = G.rank();
  const auto ord = static_cast<Idx>(S.order());
  std::map<int, Idx> pos;
  for (Idx i = 0; i < ord; ++i) pos[S.elements[static_cast<std::size_t>(i)]] = i;
  const auto k = static_cast<Idx>(S.generators.size());
  // c(gh) - c(g) - g c(h) = 0 for g a generator, h in S; then c(e) = 0
  IntMatrix E = IntMatrix::Zero((k * ord + 1) * n, ord * n);
  for (Idx a = 0; a < n; ++a) E(k * ord * n + a, a) = 1;
  for (Idx j = 0; j < k; ++j) {
    const int g = S.generators[static_cast<std::size_t>(j)];
    const IntMatrix M = G.matrix(g);
    for (Idx hi = 0; hi < ord; ++hi) {
      const int h = S.elements[static_cast<std::size_t>(hi)];
      const Idx gh = pos.at(G.table.mul(g, h));
      const Idx row0 = (j * ord + hi) * n;
      const Idx gpos = pos.at(g);
      for (Idx a = 0; a < n; ++a) {
        E(row0 + a, gh * n + a) += 1;
        E(row0 + a, gpos * n + a) -= 1;
        for (Idx b = 0; b < n; ++b) E(row0 + a, hi * n + b) -= M(a, b);
      }
    }
  }
  const IntMatrix Z = integer_kernel(E);
  // coboundaries of the unit vectors
  IntMatrix B(ord * n, n);
  for (Idx si = 0; si < ord; ++si)
    B.block(si * n, 0, n, n) = G.matrix(S.elements[static_cast<std::size_t>(si)]) - IntMatrix::Identity(n, n);
  return finite_cokernel(coordinates(Z, B), "Z1/B1");
}

std::map<int, IntVector> extend_cocycle(const GroupRep& G, const Subgroup& S, const IntMatrix& on_generators) {
  const Idx n = G.rank();
  std::map<int, IntVector> c;
  c[0] = IntVector::Zero(n);
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int a = queue[qi];
    const IntMatrix Ma = G.matrix(a);
    for (std::size_t j = 0; j < S.generators.size(); ++j) {
      const int b = G.table.mul(a, S.generators[j]);
      if (c.count(b)) continue;
      c[b] = c[a] + Ma * on_generators.col(static_cast<Idx>(j));
      queue.push_back(b);
    }
  }
  return c;
}

bool is_cocycle(const GroupRep& G, const Subgroup& S, const std::map<int, IntVector>& c) {
  for (int a : S.elements) {
    const IntMatrix Ma = G.matrix(a);
    for (int b : S.elements) {
      const IntVector rhs = c.at(a) + Ma * c.at(b);
      if (c.at(G.table.mul(a, b)) != rhs) return false;
    }
  }
  return true;
}

bool restricts_to_coboundary(const GroupRep& G, const Subgroup& T, const std::map<int, IntVector>& c) {
  if (T.generators.empty()) return true;
  const Idx n = G.rank();
  const IntMatrix A = stacked_differences(G, T.generators);
  IntVector b(A.rows());
  for (std::size_t j = 0; j < T.generators.size(); ++j) b.segment(static_cast<Idx>(j) * n, n) = c.at(T.generators[j]);
  const SmithForm s = smith_normal_form(A);
  const IntVector y = s.U * b;
  for (Idx i = 0; i < y.size(); ++i) {
    const Integer d = i < A.cols() ? s.D(i, i) : Integer(0);
    if (d == 0) {
      if (y(i) != 0) return false;
    } else if (y(i) % d != 0) {
      return false;
    }
  }
  return true;
}

AbelianInvariants h1_cyclic(const IntMatrix& g, int n) {
  const IntMatrix N = matrix_power_sum(g, n);
  const IntMatrix K = integer_kernel(N);
  const IntMatrix D = g - IntMatrix::Identity(g.rows(), g.cols());
  return finite_cokernel(coordinates(K, D), "ker N / im(g-1)");
}

AbelianInvariants h2_cyclic(const IntMatrix& g, int n) {
  const IntMatrix N = matrix_power_sum(g, n);
  const IntMatrix F = integer_kernel(g - IntMatrix::Identity(g.rows(), g.cols()));
  return finite_cokernel(coordinates(F, N), "M^g / N M");
}

// ---------------------------------------------------------------- H^2 by dimension shifting

namespace {

struct ShiftedModule {
  SparseIntMatrix A;  // stacked (g - 1) on Q
  int rank = 0;
  int fixed_rank = 0;  // rank of the images of the constant maps, all fixed
};

// Q = {f : S -> M, f(e) = 0}, (g.f)(x) = f(xg) - x f(g).
ShiftedModule shifted_module(const GroupRep& G, const Subgroup& S) {
  const std::size_t n = static_cast<std::size_t>(G.rank());
  const std::size_t ord = S.elements.size();
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < ord; ++i) pos[S.elements[i]] = i;
  const std::size_t R = (ord - 1) * n;
  auto idx = [&](int x, std::size_t i) { return (pos.at(x) - 1) * n + i; };
  ShiftedModule sm;
  sm.rank = static_cast<int>(R);
  sm.A.rows = R * S.generators.size();
  sm.A.cols = R;
  for (std::size_t j = 0; j < S.generators.size(); ++j) {
    const int g = S.generators[j];
    const int ginv = G.table.inv(g);
    const std::size_t off = j * R;
    for (std::size_t yi = 1; yi < ord; ++yi) {
      const int y = S.elements[yi];
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t col = idx(y, i);
        if (y != g) {
          sm.A.add(off + idx(G.table.mul(y, ginv), i), col, 1);
        } else {
          for (std::size_t xi = 1; xi < ord; ++xi) {
            const SmallMatrix& X = G.elements[static_cast<std::size_t>(S.elements[xi])];
            for (std::size_t r = 0; r < n; ++r)
              if (X(static_cast<Idx>(r), static_cast<Idx>(i)) != 0)
                sm.A.add(off + idx(S.elements[xi], r), col, -X(static_cast<Idx>(r), static_cast<Idx>(i)));
          }
        }
        sm.A.add(off + col, col, -1);
      }
    }
  }
  // constants m give x -> m - x m, which Q^S contains
  IntMatrix F(static_cast<Idx>(R), static_cast<Idx>(n));
  for (std::size_t xi = 1; xi < ord; ++xi) {
    const IntMatrix X = G.matrix(S.elements[xi]);
    F.block(static_cast<Idx>((xi - 1) * n), 0, static_cast<Idx>(n), static_cast<Idx>(n)) =
        IntMatrix::Identity(static_cast<Idx>(n), static_cast<Idx>(n)) - X;
  }
  std::vector<std::int64_t> prod(sm.A.rows * n, 0);
  std::vector<std::int64_t> Fs(R * n);
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t c = 0; c < n; ++c) Fs[r * n + c] = F(static_cast<Idx>(r), static_cast<Idx>(c)).get_si();
  for (const auto& [r, c, v] : sm.A.entries)
    for (std::size_t k = 0; k < n; ++k) prod[r * n + k] += v * Fs[c * n + k];
  for (auto x : prod)
    if (x != 0) throw VerificationError("constant maps are not fixed in Maps(S, M)/M");
  sm.fixed_rank = R == 0 ? 0 : rank_of(F);
  return sm;
}

}  // namespace

H2Result h2(const GroupRep& G, const Subgroup& S, std::size_t max_entries, bool allow_partial) {
  H2Result res;
  if (S.order() == 1) return res;
  const ShiftedModule sm = shifted_module(G, S);
  res.quotient_rank = sm.rank;
  res.expected_rank = sm.rank - sm.fixed_rank;
  const std::size_t entries = sm.A.rows * sm.A.cols;
  std::map<std::uint64_t, std::vector<int>> parts;
  const auto ord = static_cast<std::uint64_t>(S.order());
  for (std::uint64_t p : prime_divisors(ord)) {
    if (entries > max_entries) {
      if (!allow_partial)
        throw ResourceBudgetExceeded("h2: dense matrix of " + std::to_string(entries) + " entries exceeds the budget");
      res.skipped_primes.push_back(p);
      res.p_primary_only = true;
      continue;
    }
    const int vp = p_valuation(ord, p);
    int K = vp + 2;
    std::uint64_t q = 1;
    for (int i = 0; i < K; ++i) q *= p;
    while (q > 256 && K > vp + 1) q /= p, --K;
    const LocalDivisors L = local_divisors(sm.A, p, K);
    // rank over Z_(p) >= L.rank, and the fixed vectors cap it at expected_rank
    if (L.rank != res.expected_rank)
      throw VerificationError("h2: local rank " + std::to_string(L.rank) + " at p=" + std::to_string(p) +
                              ", expected " + std::to_string(res.expected_rank));
    for (int v : L.valuations)
      if (v > vp) throw VerificationError("h2: invariant not annihilated by the group order");
    parts[p] = L.valuations;
    res.local[p] = L;
  }
  res.invariants = combine_primary(parts);
  return res;
}

AbelianInvariants h1_coinduced(const GroupRep& G, const Subgroup& S) {
  // Maps(S, M) with (g.f)(x) = f(xg): a sum of n copies of Z[S]
  const std::size_t n = static_cast<std::size_t>(G.rank());
  const std::size_t ord = S.elements.size();
  if (S.generators.empty()) return {};
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < ord; ++i) pos[S.elements[i]] = i;
  const std::size_t R = ord * n;
  SparseIntMatrix A;
  A.rows = R * S.generators.size();
  A.cols = R;
  for (std::size_t j = 0; j < S.generators.size(); ++j) {
    const int ginv = G.table.inv(S.generators[j]);
    for (std::size_t yi = 0; yi < ord; ++yi)
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t col = yi * n + i;
        A.add(j * R + pos.at(G.table.mul(S.elements[yi], ginv)) * n + i, col, 1);
        A.add(j * R + col, col, -1);
      }
  }
  std::map<std::uint64_t, std::vector<int>> parts;
  const auto o = static_cast<std::uint64_t>(ord);
  for (std::uint64_t p : prime_divisors(o)) {
    const int vp = p_valuation(o, p);
    int K = vp + 2;
    std::uint64_t q = 1;
    for (int i = 0; i < K; ++i) q *= p;
    while (q > 256 && K > vp + 1) q /= p, --K;
    const LocalDivisors L = local_divisors(A, p, K);
    // fixed points are the n constant maps
    if (L.rank != static_cast<int>(R - n)) throw VerificationError("h1_coinduced: unexpected rank");
    parts[p] = L.valuations;
  }
  return combine_primary(parts);
}

// ---------------------------------------------------------------- subgroups

namespace {

struct SubgroupSet {
  std::map<std::vector<int>, std::size_t> index;
  std::vector<Subgroup> list;
  std::size_t cap;
  bool insert(Subgroup S) {
    if (index.count(S.elements)) return false;
    if (list.size() >= cap) throw ResourceBudgetExceeded("more than " + std::to_string(cap) + " subgroups");
    index.emplace(S.elements, list.size());
    list.push_back(std::move(S));
    return true;
  }
};

// Closes a set of subgroups under joins with the seeds.
std::vector<Subgroup> join_closure(const GroupRep& G, const std::vector<Subgroup>& seeds, std::size_t cap) {
  SubgroupSet set{{}, {}, cap};
  set.insert(Subgroup{{0}, {}});
  for (const auto& s : seeds) set.insert(s);
  for (std::size_t i = 0; i < set.list.size(); ++i)
    for (const auto& s : seeds) {
      const Subgroup cur = set.list[i];
      if (std::includes(cur.elements.begin(), cur.elements.end(), s.elements.begin(), s.elements.end())) continue;
      auto gens = cur.generators;
      gens.insert(gens.end(), s.generators.begin(), s.generators.end());
      set.insert(subgroup_generated(G, gens));
    }
  auto out = std::move(set.list);
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.order() != b.order() ? a.order() < b.order() : a.elements < b.elements;
  });
  return out;
}

// A generating set of a subgroup taken greedily from the given elements.
std::vector<int> thin_generators(const GroupRep& G, const std::vector<int>& candidates) {
  std::vector<int> gens, cur{0};
  for (int c : candidates) {
    if (std::binary_search(cur.begin(), cur.end(), c)) continue;
    gens.push_back(c);
    cur = G.table.generated(gens);
  }
  return gens;
}

}  // namespace

std::vector<Subgroup> all_subgroups(const GroupRep& G, std::size_t cap) {
  std::vector<Subgroup> cyclic;
  std::set<std::vector<int>> seen;
  for (int a = 1; a < G.order(); ++a) {
    Subgroup C = subgroup_generated(G, {a});
    if (seen.insert(C.elements).second) cyclic.push_back(std::move(C));
  }
  return join_closure(G, cyclic, cap);
}

std::vector<Subgroup> normal_subgroups(const GroupRep& G, std::size_t cap) {
  std::vector<Subgroup> closures;
  std::set<std::vector<int>> seen;
  for (int a = 1; a < G.order(); ++a) {
    std::vector<int> conj;
    for (int g = 0; g < G.order(); ++g) conj.push_back(G.table.mul(G.table.mul(g, a), G.table.inv(g)));
    std::sort(conj.begin(), conj.end());
    conj.erase(std::unique(conj.begin(), conj.end()), conj.end());
    Subgroup N = subgroup_generated(G, thin_generators(G, conj));
    if (seen.insert(N.elements).second) closures.push_back(std::move(N));
  }
  auto out = join_closure(G, closures, cap);
  for (const auto& N : out)
    if (!is_normal(G, N)) throw VerificationError("join of normal subgroups is not normal");
  return out;
}

bool is_normal(const GroupRep& G, const Subgroup& S) { return G.table.is_normal(S.elements); }

// ---------------------------------------------------------------- reports

namespace {

Json json_of_invariants(const AbelianInvariants& inv) {
  Json j = Json::array();
  for (auto d : inv) j.push_back(d);
  return j;
}

bool annihilated_by(const AbelianInvariants& inv, std::uint64_t n) {
  return std::all_of(inv.begin(), inv.end(), [&](std::uint64_t d) { return n % d == 0; });
}

}  // namespace

Json CohomologyReport::to_json() const {
  Json j;
  j["id"] = id;
  j["order"] = order;
  j["normal"] = normal;
  if (conjugacy_class >= 0) j["conjugacy_class"] = conjugacy_class;
  j["generators"] = generator_words;
  j["h0_rank"] = h0_rank;
  j["h0_basis"] = json_of(IntMatrix(h0_basis.transpose()));
  j["h1_invariants"] = json_of_invariants(h1);
  if (h2) j["h2_invariants"] = json_of_invariants(*h2);
  j["methods"] = methods;
  return j;
}

CohomologyReport cohomology_report(const GroupRep& G, const Subgroup& S, bool with_h2) {
  CohomologyReport r;
  r.order = S.order();
  r.normal = is_normal(G, S);
  for (int g : S.generators) r.generator_words.push_back(G.word_name(g));
  const FixedLattice F = fixed_sublattice(G, S);
  r.h0_rank = F.rank;
  r.h0_basis = F.basis;
  r.h1 = h1(G, S).invariants;
  r.methods = {"h0: integer kernel of the stacked (g-1)", "h1: torsion of coker of the stacked (g-1)"};
  if (!annihilated_by(r.h1, static_cast<std::uint64_t>(S.order())))
    throw VerificationError("H^1 not annihilated by the subgroup order");
  if (with_h2) {
    r.h2 = h2(G, S).invariants;
    r.methods.push_back("h2: H^1 of Maps(S,M)/M, elimination over Z/p^K");
    if (!annihilated_by(*r.h2, static_cast<std::uint64_t>(S.order())))
      throw VerificationError("H^2 not annihilated by the subgroup order");
  }
  return r;
}

SweepMode parse_sweep_mode(const std::string& s) {
  if (s == "normal") return SweepMode::Normal;
  if (s == "all") return SweepMode::All;
  throw UsageError("subgroup mode must be 'normal' or 'all', got '" + s + "'");
}

Json SweepSummary::to_json() const {
  Json j;
  j["mode"] = mode == SweepMode::Normal ? "normal" : "all";
  j["subgroups"] = reports.size();
  j["nontrivial_subgroups"] = trivial_h1 + nontrivial_h1;
  j["trivial_h1"] = trivial_h1;
  j["nontrivial_h1"] = nontrivial_h1;
  j["all_exponent_two"] = all_exponent_two;
  j["h1_ranks"] = std::vector<int>(h1_ranks.begin(), h1_ranks.end());
  Json rs = Json::array();
  for (const auto& r : reports) rs.push_back(r.to_json());
  j["reports"] = std::move(rs);
  return j;
}

SweepSummary subgroup_sweep(const GroupRep& G, SweepMode mode) {
  SweepSummary sum;
  sum.mode = mode;
  const auto subs = mode == SweepMode::Normal ? normal_subgroups(G) : all_subgroups(G);
  // conjugacy classes by the smallest conjugate
  std::map<std::vector<int>, int> class_of;
  std::map<int, int> count_by_order;
  for (const auto& S : subs) {
    std::vector<int> best;
    for (int g = 0; g < G.order(); ++g) {
      std::vector<int> c;
      for (int s : S.elements) c.push_back(G.table.mul(G.table.mul(g, s), G.table.inv(g)));
      std::sort(c.begin(), c.end());
      if (best.empty() || c < best) best = std::move(c);
    }
    const int cls = class_of.emplace(best, static_cast<int>(class_of.size())).first->second;
    CohomologyReport r = cohomology_report(G, S);
    r.conjugacy_class = cls;
    r.id = "S" + std::to_string(S.order()) + "." + std::to_string(++count_by_order[S.order()]);
    if (S.order() == 1) {
      sum.reports.push_back(std::move(r));
      continue;
    }
    if (r.h1.empty())
      ++sum.trivial_h1;
    else
      ++sum.nontrivial_h1;
    const bool two = std::all_of(r.h1.begin(), r.h1.end(), [](std::uint64_t d) { return d == 2; });
    if (two)
      sum.h1_ranks.insert(static_cast<int>(r.h1.size()));
    else
      sum.all_exponent_two = false;
    sum.reports.push_back(std::move(r));
  }
  return sum;
}

}  // namespace k3pic
