#include "k3pic/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>

namespace k3pic {

namespace {

Integer iabs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

void swap_rows(IntMatrix& A, Eigen::Index i, Eigen::Index j) {
  if (i != j) A.row(i).swap(A.row(j));
}
void swap_cols(IntMatrix& A, Eigen::Index i, Eigen::Index j) {
  if (i != j) A.col(i).swap(A.col(j));
}
// row i -= f * row j
void row_axpy(IntMatrix& A, Eigen::Index i, Eigen::Index j, const Integer& f) {
  for (Eigen::Index c = 0; c < A.cols(); ++c) A(i, c) -= f * A(j, c);
}
void col_axpy(IntMatrix& A, Eigen::Index i, Eigen::Index j, const Integer& f) {
  for (Eigen::Index r = 0; r < A.rows(); ++r) A(r, i) -= f * A(r, j);
}

}  // namespace

Integer det_bareiss(const IntMatrix& A0) {
  if (A0.rows() != A0.cols()) throw UsageError("determinant of a non-square matrix");
  const Eigen::Index n = A0.rows();
  if (n == 0) return 1;
  IntMatrix A = A0;
  int sign = 1;
  Integer prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (A(k, k) == 0) {
      Eigen::Index p = k + 1;
      while (p < n && A(p, k) == 0) ++p;
      if (p == n) return 0;
      swap_rows(A, k, p);
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) {
        Integer v = A(i, j) * A(k, k) - A(i, k) * A(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        A(i, j) = v;
      }
    prev = A(k, k);
  }
  return sign * A(n - 1, n - 1);
}

int rank_of(const IntMatrix& A0) {
  IntMatrix A = A0;
  const Eigen::Index m = A.rows(), n = A.cols();
  Eigen::Index r = 0;
  Integer prev = 1;
  for (Eigen::Index c = 0; c < n && r < m; ++c) {
    Eigen::Index p = r;
    while (p < m && A(p, c) == 0) ++p;
    if (p == m) continue;
    swap_rows(A, r, p);
    for (Eigen::Index i = r + 1; i < m; ++i) {
      for (Eigen::Index j = c + 1; j < n; ++j) {
        Integer v = A(i, j) * A(r, c) - A(i, c) * A(r, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        A(i, j) = v;
      }
      A(i, c) = 0;
    }
    prev = A(r, c);
    ++r;
  }
  return static_cast<int>(r);
}

std::vector<Integer> SmithForm::diagonal() const {
  std::vector<Integer> d;
  for (Eigen::Index i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
  return d;
}

SmithForm smith_normal_form(const IntMatrix& A0) {
  const Eigen::Index m = A0.rows(), n = A0.cols();
  SmithForm s;
  s.D = A0;
  s.U = IntMatrix::Identity(m, m);
  s.V = IntMatrix::Identity(n, n);
  IntMatrix& A = s.D;
  for (Eigen::Index t = 0; t < std::min(m, n); ++t) {
    // smallest nonzero entry of the trailing block
    Eigen::Index pi = -1, pj = -1;
    for (Eigen::Index i = t; i < m; ++i)
      for (Eigen::Index j = t; j < n; ++j)
        if (A(i, j) != 0 && (pi < 0 || iabs(A(i, j)) < iabs(A(pi, pj)))) pi = i, pj = j;
    if (pi < 0) break;
    swap_rows(A, t, pi);
    swap_rows(s.U, t, pi);
    swap_cols(A, t, pj);
    swap_cols(s.V, t, pj);
    for (;;) {
      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (A(i, t) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A(i, t).get_mpz_t(), A(t, t).get_mpz_t());
        row_axpy(A, i, t, q);
        row_axpy(s.U, i, t, q);
        if (A(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (A(t, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A(t, j).get_mpz_t(), A(t, t).get_mpz_t());
        col_axpy(A, j, t, q);
        col_axpy(s.V, j, t, q);
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) {
        // a smaller remainder sits in row or column t; move it to the pivot
        Eigen::Index bi = t, bj = t;
        for (Eigen::Index i = t + 1; i < m; ++i)
          if (A(i, t) != 0 && iabs(A(i, t)) < iabs(A(bi, bj))) bi = i, bj = t;
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (A(t, j) != 0 && iabs(A(t, j)) < iabs(A(bi, bj))) bi = t, bj = j;
        swap_rows(A, t, bi);
        swap_rows(s.U, t, bi);
        swap_cols(A, t, bj);
        swap_cols(s.V, t, bj);
        continue;
      }
      // divisibility of the trailing block
      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (A(i, j) % A(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      row_axpy(A, t, bad, Integer(-1));
      row_axpy(s.U, t, bad, Integer(-1));
    }
    if (A(t, t) < 0) {
      A.row(t) *= Integer(-1);
      s.U.row(t) *= Integer(-1);
    }
  }
  return s;
}

RatMatrix to_rational(const IntMatrix& A) {
  return A.unaryExpr([](const Integer& v) { return Rational(v); });
}

bool is_integral(const RatMatrix& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (A(i, j).get_den() != 1) return false;
  return true;
}

IntMatrix to_integer(const RatMatrix& A) {
  if (!is_integral(A)) throw UsageError("matrix is not integral");
  return A.unaryExpr([](const Rational& v) { return Integer(v.get_num()); });
}

RatMatrix solve_rational(const IntMatrix& A0, const RatMatrix& B0) {
  const Eigen::Index n = A0.rows();
  if (A0.cols() != n || B0.rows() != n) throw UsageError("solve: shape mismatch");
  RatMatrix A = to_rational(A0), B = B0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    while (p < n && A(p, k) == 0) ++p;
    if (p == n) throw Degenerate("singular system");
    if (p != k) {
      A.row(k).swap(A.row(p));
      B.row(k).swap(B.row(p));
    }
    const Rational inv = 1 / A(k, k);
    for (Eigen::Index j = k; j < n; ++j) A(k, j) *= inv;
    for (Eigen::Index j = 0; j < B.cols(); ++j) B(k, j) *= inv;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k || A(i, k) == 0) continue;
      const Rational f = A(i, k);
      for (Eigen::Index j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      for (Eigen::Index j = 0; j < B.cols(); ++j) B(i, j) -= f * B(k, j);
    }
  }
  return B;
}

Signature signature(const IntMatrix& S) {
  if (S != S.transpose()) throw UsageError("signature of a non-symmetric matrix");
  RatMatrix A = to_rational(S);
  const Eigen::Index n = A.rows();
  Signature sig;
  auto sym_swap = [&](Eigen::Index i, Eigen::Index j) {
    A.row(i).swap(A.row(j));
    A.col(i).swap(A.col(j));
  };
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    while (p < n && A(p, p) == 0) ++p;
    if (p == n) {
      // zero diagonal: a nonzero A(i, j) gives A(i, i) = 2 A(i, j) after adding j to i
      Eigen::Index bi = -1, bj = -1;
      for (Eigen::Index i = k; i < n && bi < 0; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
          if (A(i, j) != 0) {
            bi = i, bj = j;
            break;
          }
      if (bi < 0) {
        sig.zero += static_cast<int>(n - k);
        break;
      }
      A.row(bi) += A.row(bj);
      A.col(bi) += A.col(bj);
      p = bi;
    }
    sym_swap(k, p);
    const Rational piv = A(k, k);
    (piv > 0 ? sig.pos : sig.neg) += 1;
    // Schur complement; row and column k are never read again
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (A(i, k) == 0) continue;
      const Rational f = A(i, k) / piv;
      for (Eigen::Index j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
    }
  }
  return sig;
}

// ---------------------------------------------------------------- lattices

IntLattice IntLattice::from_gram(IntMatrix gram, std::string name) {
  if (gram.rows() != gram.cols() || gram != gram.transpose()) throw UsageError("Gram matrix is not symmetric");
  if (gram.rows() > 0 && det_bareiss(gram) == 0) throw Degenerate("Gram matrix is degenerate");
  return {std::move(gram), std::move(name)};
}

bool IntLattice::is_even() const {
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    if (gram(i, i) % 2 != 0) return false;
  return true;
}

std::string LatticeInvariants::format() const {
  std::ostringstream os;
  os << "rank " << rank << ", det " << det.get_str() << ", signature (" << sig.pos << "," << sig.neg << "), "
     << (even ? "even" : "odd");
  return os.str();
}

LatticeInvariants invariants(const IntLattice& L) {
  LatticeInvariants inv;
  inv.rank = L.rank();
  inv.det = L.det();
  if (inv.rank > 0 && inv.det == 0) throw Degenerate("lattice is degenerate");
  inv.sig = signature(L.gram);
  inv.even = L.is_even();
  return inv;
}

IntLattice lattice_U() {
  IntMatrix g(2, 2);
  g << Integer(0), Integer(1), Integer(1), Integer(0);
  return {g, "U"};
}

namespace {
std::string scaled_name(const std::string& base, long m) {
  return m == 1 ? base : base + "(" + std::to_string(m) + ")";
}
}  // namespace

IntLattice lattice_A(int n, long m) {
  if (n < 1 || m == 0) throw UsageError("A_n(m) needs n >= 1 and m != 0");
  IntMatrix g = IntMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = 2 * m;
    if (i + 1 < n) g(i, i + 1) = g(i + 1, i) = -m;
  }
  return {g, scaled_name("A" + std::to_string(n), m)};
}

IntLattice lattice_E8(long m) {
  if (m == 0) throw UsageError("E8(m) needs m != 0");
  // Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4
  static const int edges[7][2] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
  IntMatrix g = IntMatrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) g(i, i) = 2 * m;
  for (const auto& e : edges) g(e[0], e[1]) = g(e[1], e[0]) = -m;
  return {g, scaled_name("E8", m)};
}

IntLattice named_lattice(const std::string& name) {
  static const std::regex re(R"(^\s*(U|A_?(\d+)|E_?8)\s*(?:\(\s*(-?\d+)\s*\))?\s*$)");
  std::smatch mt;
  if (!std::regex_match(name, mt, re)) throw UsageError("unknown lattice name: " + name);
  const long m = mt[3].matched ? std::stol(mt[3].str()) : 1;
  const std::string head = mt[1].str();
  if (head == "U") {
    if (m != 1) throw UsageError("U takes no scaling");
    return lattice_U();
  }
  if (head[0] == 'A') return lattice_A(std::stoi(mt[2].str()), m);
  return lattice_E8(m);
}

IntLattice direct_sum(const IntLattice& a, const IntLattice& b) {
  const Eigen::Index n = a.gram.rows(), k = b.gram.rows();
  IntMatrix g = IntMatrix::Zero(n + k, n + k);
  g.topLeftCorner(n, n) = a.gram;
  g.bottomRightCorner(k, k) = b.gram;
  std::string name = a.name.empty() ? b.name : (b.name.empty() ? a.name : a.name + " + " + b.name);
  return {g, name};
}

IntLattice direct_sum(const std::vector<IntLattice>& parts) {
  IntLattice r{IntMatrix(0, 0), ""};
  for (const auto& p : parts) r = direct_sum(r, p);
  return r;
}

IntLattice target_lattice() {
  return direct_sum({lattice_U(), lattice_E8(-1), lattice_A(5, -1), lattice_A(2, -1), lattice_A(2, -4)});
}

Integer DiscGroup::order() const {
  Integer o = 1;
  for (const auto& d : invariants) o *= d;
  return o;
}

std::string DiscGroup::format() const {
  if (invariants.empty()) return "0";
  std::string s;
  for (const auto& d : invariants) s += (s.empty() ? "" : " x ") + std::string("Z/") + d.get_str();
  return s;
}

DiscGroup discriminant_group(const IntLattice& L, const SmithForm& snf) {
  // U G V = D, so G^-1 Z^n / Z^n = V D^-1 Z^n / V Z^n
  DiscGroup A;
  const Eigen::Index n = L.gram.rows();
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Integer& d = snf.D(i, i);
    if (d == 0) throw Degenerate("lattice is degenerate");
    if (d != 1) {
      A.invariants.push_back(d);
      cols.push_back(i);
    }
  }
  A.generators = RatMatrix(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      A.generators(r, static_cast<Eigen::Index>(c)) = Rational(snf.V(r, cols[c])) / Rational(snf.D(cols[c], cols[c]));
  return A;
}

DiscGroup discriminant_group(const IntLattice& L) { return discriminant_group(L, smith_normal_form(L.gram)); }

Rational mod_rational(const Rational& x, long m) {
  // x - m * floor(x / m)
  Integer fl;
  const Rational y = x / m;
  mpz_fdiv_q(fl.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  Rational r = x - Rational(fl * m);
  r.canonicalize();
  return r;
}

DiscForm discriminant_form(const IntLattice& L, const DiscGroup& A) {
  if (!L.is_even()) throw NotEven("discriminant form needs an even lattice");
  DiscForm f;
  f.orders = A.invariants;
  const RatMatrix G = to_rational(L.gram);
  const RatMatrix B = A.generators.transpose() * G * A.generators;
  const Eigen::Index k = B.rows();
  f.b = RatMatrix(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    f.q.push_back(mod_rational(B(i, i), 2));
    for (Eigen::Index j = 0; j < k; ++j) f.b(i, j) = mod_rational(B(i, j), 1);
  }
  return f;
}

DiscForm discriminant_form(const IntLattice& L) { return discriminant_form(L, discriminant_group(L)); }

namespace {

// Discriminant form with values scaled to integers: q * N mod 2N, b * N mod N.
struct ScaledForm {
  std::vector<long> d;
  std::vector<long> q;
  std::vector<std::vector<long>> b;
};

ScaledForm scale_form(const DiscForm& f, long N) {
  ScaledForm s;
  const std::size_t k = f.orders.size();
  for (const auto& d : f.orders) s.d.push_back(d.get_si());
  auto scaled = [&](const Rational& v, long mod) {
    const Rational x = v * N;
    if (x.get_den() != 1) throw UsageError("scaling denominator too small");
    long r = mpz_class(x.get_num() % mod).get_si();
    return r < 0 ? r + mod : r;
  };
  for (std::size_t i = 0; i < k; ++i) s.q.push_back(scaled(f.q[i], 2 * N));
  s.b.assign(k, std::vector<long>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      s.b[i][j] = scaled(f.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), N);
  return s;
}

long denominators_lcm(const DiscForm& f) {
  Integer l = 1;
  for (const auto& v : f.q) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  for (Eigen::Index i = 0; i < f.b.rows(); ++i)
    for (Eigen::Index j = 0; j < f.b.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), f.b(i, j).get_den_mpz_t());
  return l.get_si();
}

}  // namespace

bool finite_qform_isomorphic(const DiscForm& a, const DiscForm& b, long max_order) {
  if (a.orders != b.orders) return false;
  const std::size_t k = a.orders.size();
  if (k == 0) return true;
  Integer order = 1;
  for (const auto& d : a.orders) order *= d;
  if (order > max_order) throw TooLarge("discriminant group of order " + order.get_str());
  const long N = std::lcm(denominators_lcm(a), denominators_lcm(b));
  const ScaledForm sa = scale_form(a, N), sb = scale_form(b, N);

  // elements of B as coefficient tuples
  const long total = order.get_si();
  std::vector<std::vector<long>> elems(static_cast<std::size_t>(total), std::vector<long>(k));
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    for (std::size_t i = 0; i < k; ++i) {
      elems[static_cast<std::size_t>(idx)][i] = r % sb.d[i];
      r /= sb.d[i];
    }
  }
  auto qv = [&](const std::vector<long>& x) {
    long acc = 0;
    for (std::size_t i = 0; i < k; ++i) {
      acc = (acc + x[i] * x[i] % (2 * N) * sb.q[i]) % (2 * N);
      for (std::size_t j = i + 1; j < k; ++j) acc = (acc + 2 * (x[i] * x[j] % N) * sb.b[i][j]) % (2 * N);
    }
    return acc;
  };
  auto bv = [&](const std::vector<long>& x, const std::vector<long>& y) {
    long acc = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) acc = (acc + (x[i] * y[j] % N) * sb.b[i][j]) % N;
    return acc;
  };
  auto kills = [&](const std::vector<long>& x, long d) {
    for (std::size_t i = 0; i < k; ++i)
      if ((x[i] * d) % sb.d[i] != 0) return false;
    return true;
  };
  // candidates per generator: order divides d_i and q matches
  std::vector<std::vector<std::size_t>> cand(k);
  for (std::size_t e = 0; e < elems.size(); ++e)
    for (std::size_t i = 0; i < k; ++i)
      if (kills(elems[e], sa.d[i]) && qv(elems[e]) == sa.q[i]) cand[i].push_back(e);

  // b is nondegenerate on A, so a b-preserving homomorphism is injective; orders agree
  std::vector<std::size_t> img(k);
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == k) return true;
    for (std::size_t e : cand[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = bv(elems[e], elems[img[j]]) == sa.b[i][j];
      if (!ok) continue;
      img[i] = e;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

NikulinResult nikulin_equivalent(const IntLattice& a, const IntLattice& b) {
  NikulinResult r;
  if (a.gram == b.gram) {
    r.outcome = NikulinOutcome::Equivalent;
    r.reason = "identical Gram matrices";
    return r;
  }
  const LatticeInvariants ia = invariants(a), ib = invariants(b);
  if (ia.rank != ib.rank || ia.det != ib.det || !(ia.sig == ib.sig) || ia.even != ib.even) {
    r.outcome = NikulinOutcome::NotEquivalent;
    r.reason = "invariants differ: " + ia.format() + " vs " + ib.format();
    return r;
  }
  const DiscGroup ga = discriminant_group(a), gb = discriminant_group(b);
  r.length = ga.length();
  if (ga.invariants != gb.invariants) {
    r.outcome = NikulinOutcome::NotEquivalent;
    r.reason = "discriminant groups differ: " + ga.format() + " vs " + gb.format();
    return r;
  }
  if (!ia.even) {
    r.reason = "lattices are odd";
    return r;
  }
  if (ia.sig.pos == 0 || ia.sig.neg == 0) {
    r.reason = "lattices are definite";
    return r;
  }
  if (!(ia.rank > r.length + 2)) {
    r.reason = "rank " + std::to_string(ia.rank) + " does not exceed l(A) + 2 = " + std::to_string(r.length + 2);
    return r;
  }
  const bool iso = finite_qform_isomorphic(discriminant_form(a, ga), discriminant_form(b, gb));
  r.outcome = iso ? NikulinOutcome::Equivalent : NikulinOutcome::NotEquivalent;
  r.reason = "l(A) = " + std::to_string(r.length) + " < " + std::to_string(ia.rank - 2) + " = rank - 2; discriminant forms " +
             (iso ? "isometric" : "not isometric");
  return r;
}

Integer index_relation(const IntLattice& L, const IntMatrix& basis) {
  if (basis.rows() != L.gram.rows() || basis.cols() != L.gram.rows()) throw NotFullRank("basis must be square");
  const Integer d = det_bareiss(basis);
  if (d == 0) throw NotFullRank("sublattice is not of full rank");
  const Integer index = iabs(d);
  const IntMatrix sub = basis.transpose() * L.gram * basis;
  if (det_bareiss(sub) != index * index * L.det()) throw VerificationError("index-determinant law fails");
  return index;
}

std::string format_matrix(const IntMatrix& A) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (Eigen::Index j = 0; j < A.cols(); ++j) os << (j ? "," : "") << A(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace k3pic
