#include "stabforge/cyclic_cohomology.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace stabforge {

namespace {

using Vec = std::vector<BigInt>;

BigInt babs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

BigInt bgcd(const BigInt& a, const BigInt& b) {
  BigInt x = babs(a), y = babs(b);
  while (y != 0) {
    BigInt t = x % y;
    x = y;
    y = t;
  }
  return x;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

IntMatrix zeros(std::size_t r, std::size_t c) { return IntMatrix(r, Vec(c, BigInt(0))); }

IntMatrix identity(std::size_t n) {
  IntMatrix I = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

IntMatrix matmul(const IntMatrix& A, const IntMatrix& B) {
  const std::size_t r = A.size(), m = B.size(), c = B.empty() ? 0 : B[0].size();
  IntMatrix C = zeros(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (A[i][k] == 0) continue;
      for (std::size_t j = 0; j < c; ++j) C[i][j] += A[i][k] * B[k][j];
    }
  return C;
}

IntMatrix add(const IntMatrix& A, const IntMatrix& B) {
  IntMatrix C = A;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A[i].size(); ++j) C[i][j] += B[i][j];
  return C;
}

// Entries of row i are taken modulo the relation order of generator i.
IntMatrix reduce_rows(const CycModule& M, IntMatrix A) {
  for (std::size_t i = 0; i < A.size(); ++i) {
    const BigInt d = M.relation(i);
    if (d == 0) continue;
    for (auto& x : A[i]) {
      x %= d;
      if (x < 0) x += d;
    }
  }
  return A;
}

IntMatrix relation_matrix(const CycModule& M) {
  IntMatrix D = zeros(M.dim(), M.dim());
  for (std::size_t i = 0; i < M.dim(); ++i) D[i][i] = M.relation(i);
  return D;
}

IntMatrix hcat(const IntMatrix& A, const IntMatrix& B) {
  IntMatrix C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C[i].insert(C[i].end(), B[i].begin(), B[i].end());
  return C;
}

void col_axpy(IntMatrix& A, std::size_t dst, const BigInt& q, std::size_t src) {
  for (auto& row : A) row[dst] -= q * row[src];
}
void col_swap(IntMatrix& A, std::size_t a, std::size_t b) {
  for (auto& row : A) std::swap(row[a], row[b]);
}

// Column echelon form by unimodular column operations (mirrored on V when given).
// Returns the pivot rows; columns [0, pivots) are a basis of the column lattice.
std::vector<std::size_t> col_echelon(IntMatrix& A, IntMatrix* V) {
  std::vector<std::size_t> pivots;
  if (A.empty()) return pivots;
  const std::size_t m = A.size(), c = A[0].size();
  std::size_t pc = 0;
  for (std::size_t row = 0; row < m && pc < c; ++row) {
    for (;;) {
      std::size_t best = c;
      for (std::size_t j = pc; j < c; ++j)
        if (A[row][j] != 0 && (best == c || babs(A[row][j]) < babs(A[row][best]))) best = j;
      if (best == c) break;
      bool done = true;
      for (std::size_t j = pc; j < c; ++j) {
        if (j == best || A[row][j] == 0) continue;
        BigInt q = floor_div(A[row][j], A[row][best]);
        col_axpy(A, j, q, best);
        if (V) col_axpy(*V, j, q, best);
        if (A[row][j] != 0) done = false;
      }
      if (done) {
        col_swap(A, pc, best);
        if (V) col_swap(*V, pc, best);
        pivots.push_back(row);
        ++pc;
        break;
      }
    }
  }
  return pivots;
}

struct Lattice {
  IntMatrix basis;  // m x k, echelon
  std::vector<std::size_t> pivot_rows;
  std::size_t rank() const { return pivot_rows.size(); }
};

Lattice lattice_from_generators(IntMatrix G, std::size_t m) {
  if (G.empty()) G = zeros(m, 0);
  auto piv = col_echelon(G, nullptr);
  Lattice L;
  L.pivot_rows = piv;
  L.basis = zeros(m, piv.size());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < piv.size(); ++j) L.basis[i][j] = G[i][j];
  return L;
}

bool solve_in(const Lattice& L, Vec g, Vec& coords) {
  coords.assign(L.rank(), BigInt(0));
  for (std::size_t j = 0; j < L.rank(); ++j) {
    const std::size_t r = L.pivot_rows[j];
    const BigInt& piv = L.basis[r][j];
    if (g[r] % piv != 0) return false;
    coords[j] = g[r] / piv;
    if (coords[j] != 0)
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= coords[j] * L.basis[i][j];
  }
  return std::all_of(g.begin(), g.end(), [](const BigInt& x) { return x == 0; });
}

// {x : f x in relation lattice}
Lattice kernel_mod_relations(const CycModule& M, const IntMatrix& f) {
  const std::size_t m = M.dim();
  IntMatrix negD = relation_matrix(M);
  for (auto& row : negD)
    for (auto& x : row) x = -x;
  IntMatrix A = hcat(f, negD);
  IntMatrix V = identity(2 * m);
  auto piv = col_echelon(A, &V);
  IntMatrix G = zeros(m, 2 * m - piv.size());
  for (std::size_t j = piv.size(); j < 2 * m; ++j)
    for (std::size_t i = 0; i < m; ++i) G[i][j - piv.size()] = V[i][j];
  return lattice_from_generators(G, m);
}

void normalize_chain(std::vector<BigInt>& d) {
  for (auto& x : d) x = babs(x);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      BigInt g = bgcd(d[i], d[j]);
      BigInt l = g == 0 ? BigInt(0) : BigInt(d[i] / g * d[j]);
      d[i] = g;
      d[j] = l;
    }
}

CohomologyGroup group_from_diagonal(std::vector<BigInt> d, std::size_t free_extra) {
  normalize_chain(d);
  CohomologyGroup G;
  G.free_rank = unsigned(free_extra);
  for (const auto& x : d) {
    if (x == 0) ++G.free_rank;
    else if (x > 1) G.factors.push_back(x);
  }
  return G;
}

}  // namespace

std::vector<BigInt> smith_diagonal(IntMatrix A) {
  std::vector<BigInt> diag;
  if (A.empty() || A[0].empty()) return diag;
  const std::size_t m = A.size(), c = A[0].size();
  for (std::size_t t = 0; t < std::min(m, c); ++t) {
    for (;;) {
      std::size_t bi = m, bj = c;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (A[i][j] != 0 && (bi == m || babs(A[i][j]) < babs(A[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == m) {
        diag.push_back(0);
        break;
      }
      std::swap(A[t], A[bi]);
      col_swap(A, t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (A[i][t] == 0) continue;
        BigInt q = floor_div(A[i][t], A[t][t]);
        for (std::size_t j = t; j < c; ++j) A[i][j] -= q * A[t][j];
        if (A[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (A[t][j] == 0) continue;
        BigInt q = floor_div(A[t][j], A[t][t]);
        col_axpy(A, j, q, t);
        if (A[t][j] != 0) clean = false;
      }
      if (clean) {
        diag.push_back(babs(A[t][t]));
        break;
      }
    }
  }
  normalize_chain(diag);
  return diag;
}

BigInt CohomologyGroup::order() const {
  BigInt o = 1;
  for (const auto& f : factors) o *= f;
  return o;
}

std::string CohomologyGroup::str() const {
  std::ostringstream os;
  bool first = true;
  for (unsigned i = 0; i < free_rank; ++i) {
    os << (first ? "" : " x ") << "Z";
    first = false;
  }
  for (const auto& f : factors) {
    os << (first ? "" : " x ") << "C" << f;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

CohomologyGroup abelian_group(const std::vector<BigInt>& cyclic_orders) {
  return group_from_diagonal(cyclic_orders, 0);
}

void validate(const CycModule& M) {
  const std::size_t m = M.dim();
  if (M.order < 1) throw Error(ErrorKind::BadAction, "group order must be positive");
  if (M.action.size() != m) throw Error(ErrorKind::BadAction, "action matrix has the wrong size");
  for (const auto& row : M.action)
    if (row.size() != m) throw Error(ErrorKind::BadAction, "action matrix has the wrong size");
  for (const auto& d : M.torsion)
    if (d < 1) throw Error(ErrorKind::BadAction, "torsion orders must be positive");
  for (std::size_t j = M.rank; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      const BigInt v = M.relation(j) * M.action[i][j];
      const BigInt d = M.relation(i);
      if ((d == 0 && v != 0) || (d != 0 && v % d != 0))
        throw Error(ErrorKind::BadAction, "t does not preserve the relations");
    }
  IntMatrix P = identity(m), B = reduce_rows(M, M.action);
  for (u64 e = M.order; e; e >>= 1) {
    if (e & 1) P = reduce_rows(M, matmul(B, P));
    B = reduce_rows(M, matmul(B, B));
  }
  if (P != reduce_rows(M, identity(m))) throw Error(ErrorKind::BadAction, "t^r is not the identity");
}

IntMatrix one_minus_t(const CycModule& M) {
  IntMatrix A = identity(M.dim());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A.size(); ++j) A[i][j] -= M.action[i][j];
  return reduce_rows(M, A);
}

IntMatrix norm_map(const CycModule& M) {
  // S(k) = sum_{i<k} t^i, built from the binary expansion of r.
  const std::size_t m = M.dim();
  IntMatrix S = zeros(m, m), P = identity(m);  // S = S(k), P = t^k
  for (int b = 63; b >= 0; --b) {
    S = reduce_rows(M, add(S, matmul(P, S)));
    P = reduce_rows(M, matmul(P, P));
    if ((M.order >> b) & 1) {
      S = reduce_rows(M, add(identity(m), matmul(M.action, S)));
      P = reduce_rows(M, matmul(M.action, P));
    }
  }
  return S;
}

CohomologyGroup subquotient(const CycModule& M, const IntMatrix& f, const IntMatrix& g) {
  const std::size_t m = M.dim();
  Lattice K = kernel_mod_relations(M, f);
  IntMatrix gens = hcat(g, relation_matrix(M));
  const std::size_t s = gens.empty() ? 0 : gens[0].size();
  IntMatrix C = zeros(K.rank(), s);
  for (std::size_t j = 0; j < s; ++j) {
    Vec col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = gens[i][j];
    Vec coords;
    if (!solve_in(K, col, coords)) throw Error(ErrorKind::InvalidArgument, "image is not inside the kernel");
    for (std::size_t i = 0; i < K.rank(); ++i) C[i][j] = coords[i];
  }
  std::vector<BigInt> d = smith_diagonal(C);
  std::size_t nonzero = 0;
  for (const auto& x : d)
    if (x != 0) ++nonzero;
  std::vector<BigInt> torsion;
  for (const auto& x : d)
    if (x != 0) torsion.push_back(x);
  return group_from_diagonal(torsion, K.rank() - nonzero);
}

CohomologyGroup h0(const CycModule& M) {
  validate(M);
  return subquotient(M, one_minus_t(M), zeros(M.dim(), M.dim()));
}

CohomologyGroup h_odd(const CycModule& M) {
  validate(M);
  return subquotient(M, norm_map(M), one_minus_t(M));
}

CohomologyGroup h_even(const CycModule& M) {
  validate(M);
  return subquotient(M, one_minus_t(M), norm_map(M));
}

CohomologyGroup h_even_from_complex(const CycModule& M, unsigned k) {
  validate(M);
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "positive degree required");
  const IntMatrix a = one_minus_t(M), n = norm_map(M);
  std::vector<const IntMatrix*> maps;
  for (unsigned i = 0; i <= 2 * k; ++i) maps.push_back(i % 2 == 0 ? &a : &n);
  const IntMatrix Z = reduce_rows(M, zeros(M.dim(), M.dim()));
  for (std::size_t i = 0; i + 1 < maps.size(); ++i)
    if (reduce_rows(M, matmul(*maps[i + 1], *maps[i])) != Z)
      throw Error(ErrorKind::BadAction, "consecutive maps do not compose to zero");
  return subquotient(M, *maps[2 * k], *maps[2 * k - 1]);
}

namespace {

BigInt bpow(u64 b, unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

// images[j] = t(e_j)
CycModule make_module(unsigned rank, std::vector<BigInt> torsion, const std::vector<Vec>& images, u64 r) {
  CycModule M;
  M.rank = rank;
  M.torsion = std::move(torsion);
  M.order = r;
  const std::size_t m = M.dim();
  M.action = zeros(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) M.action[i][j] = images[j][i];
  return M;
}

IntMatrix from_images(const std::vector<Vec>& images) {
  const std::size_t m = images.size();
  IntMatrix A = zeros(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) A[i][j] = images[j][i];
  return A;
}

BigInt big_gcd(const BigInt& a, const BigInt& b) { return bgcd(a, b); }

// Z + Z/(p^x - 1), Frobenius on the torsion part, r = x: shared by three unramified statements.
GoldenInstance frobenius_instance(const std::string& tag, unsigned p, unsigned x) {
  GoldenInstance g;
  g.tag = tag;
  g.params = "p=" + std::to_string(p) + " order=" + std::to_string(x);
  const BigInt q1 = bpow(p, x) - 1;
  g.module = make_module(1, {q1}, {{1, 0}, {0, p}}, x);
  g.expect_h0 = abelian_group({0, BigInt(p - 1)});
  g.expect_odd = abelian_group({});
  g.expect_even = abelian_group({BigInt(x)});
  g.displayed_one_minus_t = from_images({{0, 0}, {0, BigInt(1) - p}});
  g.displayed_norm = from_images({{BigInt(x), 0}, {0, q1 / (p - 1)}});
  return g;
}

}  // namespace

std::vector<GoldenInstance> golden_instances() {
  std::vector<GoldenInstance> out;

  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {2, 4}, {3, 2}, {3, 4}, {5, 3}, {7, 2}})
    out.push_back(frobenius_instance("unramified-frobenius:alpha=0", p, n));
  for (auto [p, n1] : std::vector<std::pair<unsigned, unsigned>>{{3, 2}, {5, 2}, {7, 1}, {3, 6}})
    out.push_back(frobenius_instance("unramified-frobenius:alpha=1:fixed-by-C_{p-1}", p, n1));
  for (auto [p, x] : std::vector<std::pair<unsigned, unsigned>>{{3, 3}, {5, 2}, {3, 2}})
    out.push_back(frobenius_instance("unramified-frobenius:quotient-W/W1", p, x));

  // C_{p-1} acting through Aut(C_{p^alpha}): the two trivial pieces of the long exact sequence.
  for (auto [p, na] : std::vector<std::pair<unsigned, unsigned>>{{3, 2}, {5, 1}, {7, 2}, {5, 2}}) {
    const BigInt q1 = bpow(p, na) - 1;
    GoldenInstance g;
    g.tag = "roots-of-unity-part:C_{p-1}";
    g.params = "p=" + std::to_string(p) + " n_alpha=" + std::to_string(na);
    g.module = make_module(0, {q1}, {{1}}, p - 1);
    g.expect_h0 = abelian_group({q1});
    g.expect_odd = abelian_group({BigInt(p - 1)});
    g.expect_even = abelian_group({BigInt(p - 1)});
    g.displayed_one_minus_t = from_images({{0}});
    g.displayed_norm = from_images({{BigInt(p - 1)}});
    out.push_back(g);

    GoldenInstance z;
    z.tag = "uniformizer-part:C_{p-1}";
    z.params = g.params;
    z.module = make_module(1, {}, {{1}}, p - 1);
    z.expect_h0 = abelian_group({0});
    z.expect_odd = abelian_group({});
    z.expect_even = abelian_group({BigInt(p - 1)});
    z.displayed_one_minus_t = from_images({{0}});
    z.displayed_norm = from_images({{BigInt(p - 1)}});
    out.push_back(z);
  }

  // Trivial action of C_{p^{alpha-1}} on Z + Z/(p^x - 1).
  for (auto [p, alpha, x] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{{3, 2, 2}, {3, 3, 1}, {5, 2, 1}, {3, 2, 4}}) {
    const BigInt q1 = bpow(p, x) - 1;
    const u64 r = u64(ipow(p, alpha - 1));
    GoldenInstance g;
    g.tag = "trivial-action:C_{p^(alpha-1)}";
    g.params = "p=" + std::to_string(p) + " alpha=" + std::to_string(alpha) + " x=" + std::to_string(x);
    g.module = make_module(1, {q1}, {{1, 0}, {0, 1}}, r);
    g.expect_h0 = abelian_group({0, q1});
    g.expect_odd = abelian_group({});
    g.expect_even = abelian_group({BigInt(r)});
    g.displayed_one_minus_t = from_images({{0, 0}, {0, 0}});
    g.displayed_norm = from_images({{BigInt(r), 0}, {0, BigInt(r)}});
    out.push_back(g);
  }

  // p = 2: Z + Z/2^alpha + Z/(2^n - 1), C_n acting by Frobenius on the odd part.
  struct P2 {
    const char* tag;
    unsigned alpha, n;
    bool norm_printed_as_zero;
  };
  for (const P2& c : std::vector<P2>{{"p2:alpha<=1:C_n", 1, 3, false},
                                     {"p2:alpha<=1:C_n", 1, 4, false},
                                     {"p2:alpha<=1:C_n", 0, 2, false},
                                     {"p2:alpha<=1:C_n", 1, 6, false},
                                     {"p2:alpha>=2:u=+-3:n_alpha-odd", 2, 3, false},
                                     {"p2:alpha>=2:u=+-3:n_alpha-odd", 3, 1, false},
                                     {"p2:alpha>=2:u=+-3:n_alpha-odd", 2, 5, false},
                                     {"p2:alpha>=2:u=+-1", 2, 2, true},
                                     {"p2:alpha>=2:u=+-1", 3, 4, true},
                                     {"p2:alpha>=2:u=+-1", 4, 6, true}}) {
    const BigInt a = bpow(2, c.alpha), q1 = bpow(2, c.n) - 1;
    GoldenInstance g;
    g.tag = c.tag;
    g.params = "alpha=" + std::to_string(c.alpha) + " n=" + std::to_string(c.n);
    g.module = make_module(1, {a, q1}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 2}}, c.n);
    const BigInt gn = big_gcd(a, BigInt(c.n));
    g.expect_h0 = abelian_group({0, a});
    g.expect_odd = abelian_group({gn});
    g.expect_even = abelian_group({BigInt(c.n), gn});
    g.displayed_one_minus_t = from_images({{0, 0, 0}, {0, 0, 0}, {0, 0, -1}});
    g.displayed_norm = from_images({{BigInt(c.n), 0, 0}, {0, BigInt(c.n), 0}, {0, 0, c.norm_printed_as_zero ? BigInt(0) : q1}});
    out.push_back(g);
  }

  // p = 2, alpha >= 3: C_{2^{alpha-2}} generated by zeta -> zeta^5.
  for (auto [alpha, na] : std::vector<std::pair<unsigned, unsigned>>{{3, 1}, {3, 2}, {4, 3}, {5, 1}, {5, 2}}) {
    const BigInt a = bpow(2, alpha), q1 = bpow(2, na) - 1;
    const u64 r = u64(1) << (alpha - 2);
    GoldenInstance g;
    g.tag = "p2:alpha>=3:zeta->zeta^5";
    g.params = "alpha=" + std::to_string(alpha) + " n_alpha=" + std::to_string(na);
    g.module = make_module(1, {a, q1}, {{1, 0, 0}, {0, 5, 0}, {0, 0, 1}}, r);
    g.expect_h0 = abelian_group({0, 4, q1});
    g.expect_odd = abelian_group({});
    g.expect_even = abelian_group({BigInt(r)});
    g.displayed_one_minus_t = from_images({{0, 0, 0}, {0, -4, 0}, {0, 0, 0}});
    g.displayed_norm = from_images({{BigInt(r), 0, 0}, {0, BigInt(r), 0}, {0, 0, BigInt(r)}});
    out.push_back(g);
  }

  // p = 2: C_2 by zeta -> zeta^{-1}, no half-valuation element.
  for (auto [alpha, x] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {2, 3}, {3, 1}, {4, 5}}) {
    const BigInt a = bpow(2, alpha), q1 = bpow(2, x) - 1;
    GoldenInstance g;
    g.tag = "p2:C_2:inversion:u=+-3:n_alpha-odd";
    g.params = "alpha=" + std::to_string(alpha) + " x=" + std::to_string(x);
    g.module = make_module(1, {a, q1}, {{1, 0, 0}, {0, -1, 0}, {0, 0, 1}}, 2);
    g.expect_h0 = abelian_group({0, 2, q1});
    g.expect_odd = abelian_group({2});
    g.expect_even = abelian_group({2, 2});
    g.displayed_one_minus_t = from_images({{0, 0, 0}, {0, 2, 0}, {0, 0, 0}});
    g.displayed_norm = from_images({{2, 0, 0}, {0, 0, 0}, {0, 0, 2}});
    out.push_back(g);
  }

  // p = 2, alpha = 2: C_2 acting on Z<x_1> + Z/4 with x_1 -> -i x_1.
  {
    GoldenInstance g;
    g.tag = "p2:C_2:inversion:half-valuation";
    g.params = "alpha=2";
    g.module = make_module(1, {4}, {{1, 1}, {0, -1}}, 2);
    g.expect_h0 = abelian_group({0, 2});
    g.expect_odd = abelian_group({});
    g.expect_even = abelian_group({2});
    g.displayed_one_minus_t = from_images({{0, -1}, {0, 2}});
    g.displayed_norm = from_images({{2, 1}, {0, 0}});
    out.push_back(g);
  }
  return out;
}

std::vector<GoldenResult> golden_suite() {
  std::vector<GoldenResult> out;
  for (const auto& inst : golden_instances()) {
    GoldenResult r;
    r.instance = inst;
    r.h0 = h0(inst.module);
    r.odd = h_odd(inst.module);
    r.even = h_even(inst.module);
    r.matches = r.h0 == inst.expect_h0 && r.odd == inst.expect_odd && r.even == inst.expect_even;
    if (!inst.displayed_one_minus_t.empty()) {
      const bool a = reduce_rows(inst.module, inst.displayed_one_minus_t) == one_minus_t(inst.module);
      const bool n = reduce_rows(inst.module, inst.displayed_norm) == norm_map(inst.module);
      r.display_consistent = a && n;
      if (!a) r.note += "printed 1-t differs from the action; ";
      if (!n) r.note += "printed norm differs from sum of t^i; ";
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace stabforge
