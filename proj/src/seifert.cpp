#include <algorithm>
#include <map>
#include <set>

#include <gmpxx.h>

#include "knots/diagram.hpp"

namespace knots {

namespace {

// Seifert circle id of every arc label.
std::vector<int> seifert_circles(const KnotDiagram& d, const std::vector<ArcInfo>& arcs, int* count) {
  std::vector<int> circ(arcs.size(), -1);
  int k = 0;
  for (size_t l = 0; l < arcs.size(); ++l) {
    if (arcs[l].head.c < 0 || circ[l] >= 0) continue;
    int a = static_cast<int>(l);
    while (circ[a] < 0) {
      circ[a] = k;
      Slot h = arcs[a].head;
      int out = h.s == 0 ? d.over_out(h.c) : 2;
      a = d.x[h.c][out];
    }
    ++k;
  }
  *count = k;
  return circ;
}

}  // namespace

namespace {

struct VogelMove {
  int face, e1, e2;
};

// Candidate moves: pairs of edges of one face on distinct Seifert circles, both
// oriented the same way relative to the face boundary.
std::vector<VogelMove> vogel_moves(const KnotDiagram& d, int* defect_pairs) {
  auto arcs = arc_table(d);
  int nc = 0;
  auto circ = seifert_circles(d, arcs, &nc);
  auto fs = faces(d);
  std::vector<VogelMove> out;
  std::set<std::array<int, 3>> pairs;
  for (size_t fi = 0; fi < fs.size(); ++fi) {
    auto& f = fs[fi];
    for (size_t i = 0; i < f.size(); ++i) {
      int li = d.x[f[i].c][f[i].s];
      bool ai = arcs[li].tail == f[i];
      for (size_t j = i + 1; j < f.size(); ++j) {
        int lj = d.x[f[j].c][f[j].s];
        bool aj = arcs[lj].tail == f[j];
        if (ai == aj && circ[li] != circ[lj]) {
          out.push_back({static_cast<int>(fi), static_cast<int>(i), static_cast<int>(j)});
          pairs.insert({static_cast<int>(fi), std::min(circ[li], circ[lj]), std::max(circ[li], circ[lj])});
        }
      }
    }
  }
  if (defect_pairs) *defect_pairs = static_cast<int>(pairs.size());
  return out;
}

}  // namespace

int seifert_circle_count(const KnotDiagram& d) {
  int nc = 0;
  seifert_circles(d, arc_table(d), &nc);
  return nc;
}

int vogel_defects(const KnotDiagram& d) {
  int k = 0;
  vogel_moves(d, &k);
  return k;
}

KnotDiagram vogel_braid(const KnotDiagram& d0, int max_moves) {
  KnotDiagram d = d0;
  for (int move = 0; move <= max_moves; ++move) {
    auto moves = vogel_moves(d, nullptr);
    if (moves.empty()) return d;
    d = add_r2(d, moves[0].face, moves[0].e1, moves[0].e2, true);
  }
  throw DiagramError("Vogel moves did not terminate");
}

Braid braid_form(const KnotDiagram& d0) {
  if (d0.size() == 0) return {};
  KnotDiagram d = vogel_braid(d0);
  auto arcs = arc_table(d);
  int nc = 0;
  auto circ = seifert_circles(d, arcs, &nc);
  int n = d.size();
  std::vector<std::array<int, 2>> cc(n);
  std::vector<std::set<int>> adj(nc);
  for (int c = 0; c < n; ++c) {
    cc[c] = {circ[d.x[c][0]], circ[d.x[c][d.over_in[c]]]};
    if (cc[c][0] == cc[c][1]) throw DiagramError("crossing joins a Seifert circle to itself");
    adj[cc[c][0]].insert(cc[c][1]);
    adj[cc[c][1]].insert(cc[c][0]);
  }
  int start = -1;
  for (int k = 0; k < nc; ++k) {
    if (adj[k].size() > 2) throw DiagramError("Seifert graph is not a path after Vogel moves");
    if (adj[k].size() <= 1 && start < 0) start = k;
  }
  if (start < 0) throw DiagramError("Seifert graph has a cycle");
  std::vector<int> level(nc, -1), at_level;
  for (int k = start, prev = -1; k >= 0;) {
    level[k] = static_cast<int>(at_level.size());
    at_level.push_back(k);
    int nxt = -1;
    for (int j : adj[k])
      if (j != prev) nxt = j;
    prev = k;
    k = nxt;
  }
  if (static_cast<int>(at_level.size()) != nc) throw DiagramError("disconnected Seifert graph");
  // crossings met along each circle, in traversal order
  std::vector<std::vector<int>> seq(nc);
  std::vector<char> seen(arcs.size(), 0);
  for (int k = 0; k < nc; ++k) {
    int a = -1;
    for (size_t l = 0; l < arcs.size(); ++l)
      if (arcs[l].head.c >= 0 && circ[l] == k) {
        a = static_cast<int>(l);
        break;
      }
    while (!seen[a]) {
      seen[a] = 1;
      Slot h = arcs[a].head;
      seq[k].push_back(h.c);
      int out = h.s == 0 ? d.over_out(h.c) : 2;
      a = d.x[h.c][out];
    }
  }
  auto gen = [&](int c) { return std::min(level[cc[c][0]], level[cc[c][1]]); };
  std::vector<int> order = seq[at_level[0]];
  for (int lv = 1; lv + 1 < nc; ++lv) {
    auto& s = seq[at_level[lv]];
    int m = static_cast<int>(s.size());
    int first = -1;
    for (int i = 0; i < m; ++i)
      if (gen(s[i]) == lv - 1) {
        first = i;
        break;
      }
    std::map<int, std::vector<int>> after;
    int anchor = s[first];
    for (int i = 1; i <= m; ++i) {
      int c = s[(first + i) % m];
      if (gen(c) == lv - 1)
        anchor = c;
      else
        after[anchor].push_back(c);
    }
    std::vector<int> merged;
    for (int c : order) {
      merged.push_back(c);
      auto it = after.find(c);
      if (it != after.end()) merged.insert(merged.end(), it->second.begin(), it->second.end());
    }
    order = merged;
  }
  Braid b;
  b.strands = nc;
  for (int c : order) b.word.push_back((gen(c) + 1) * d.sign(c));
  return b;
}

IntMatrix braid_seifert_matrix(const Braid& b) {
  struct Loop {
    int gen, p, q;
  };
  std::vector<Loop> loops;
  for (int i = 1; i < b.strands; ++i) {
    int prev = -1;
    for (int p = 0; p < static_cast<int>(b.word.size()); ++p) {
      if (std::abs(b.word[p]) != i) continue;
      if (prev >= 0) loops.push_back({i, prev, p});
      prev = p;
    }
  }
  int m = static_cast<int>(loops.size());
  IntMatrix V(m, std::vector<long long>(m, 0));
  auto sgn = [&](int p) { return b.word[p] > 0 ? 1 : -1; };
  for (int A = 0; A < m; ++A) {
    auto [i, p, q] = loops[A];
    for (int B = 0; B < m; ++B) {
      auto [i2, p2, q2] = loops[B];
      if (A == B) {
        int e = sgn(p) + sgn(q);
        V[A][A] = e == 2 ? -1 : (e == -2 ? 1 : 0);
      } else if (i == i2 && q == p2) {
        if (sgn(q) > 0)
          V[B][A] = 1;
        else
          V[A][B] = -1;
      } else if (i2 == i + 1) {
        if (p < p2 && p2 < q && q < q2)
          V[A][B] = -1;
        else if (p2 < p && p < q2 && q2 < q)
          V[A][B] = 1;
      }
    }
  }
  return V;
}

namespace {

long long checked(__int128 v) {
  if (v > (__int128)1 << 62 || v < -((__int128)1 << 62)) throw std::overflow_error("Seifert matrix reduction overflow");
  return static_cast<long long>(v);
}

IntMatrix transposed(const IntMatrix& M) {
  size_t n = M.size();
  IntMatrix T(n, std::vector<long long>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) T[j][i] = M[i][j];
  return T;
}

// M has row i zero and a unit entry s = M[j][i]. Returns the S-equivalent matrix on the
// complement of {i, j} after the basis change z -> z - M[z][i] s e_j.
IntMatrix drop_pair(const IntMatrix& M, int i, int j) {
  int n = static_cast<int>(M.size());
  long long s = M[j][i];
  std::vector<int> keep;
  for (int z = 0; z < n; ++z)
    if (z != i && z != j) keep.push_back(z);
  int m = static_cast<int>(keep.size());
  IntMatrix W(m, std::vector<long long>(m));
  for (int u = 0; u < m; ++u) {
    int z1 = keep[u];
    __int128 a1 = M[z1][i];
    for (int v = 0; v < m; ++v) {
      int z2 = keep[v];
      __int128 a2 = M[z2][i];
      W[u][v] = checked(M[z1][z2] - a2 * s * M[z1][j] - a1 * s * M[j][z2] + a1 * a2 * M[j][j]);
    }
  }
  return W;
}

// One reduction using a zero row (or, via transpose, a zero column) with a unit partner.
bool reduce_zero_line(IntMatrix& M) {
  int n = static_cast<int>(M.size());
  for (int tr = 0; tr < 2; ++tr) {
    const IntMatrix& A = tr ? transposed(M) : M;
    for (int i = 0; i < n; ++i) {
      bool zero = true;
      for (int k = 0; k < n && zero; ++k) zero = A[i][k] == 0;
      if (!zero) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i || std::llabs(A[j][i]) != 1) continue;
        IntMatrix W = drop_pair(A, i, j);
        M = tr ? transposed(W) : W;
        return true;
      }
    }
  }
  return false;
}

// Primitive integer vectors spanning the rational left kernel of M.
std::vector<std::vector<mpz_class>> left_kernel(const IntMatrix& M) {
  int n = static_cast<int>(M.size());
  // row reduce M^T; kernel of M^T = left kernel of M
  std::vector<std::vector<mpq_class>> R(n, std::vector<mpq_class>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R[i][j] = static_cast<long>(M[j][i]);
  std::vector<int> pivcol;
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int p = row;
    while (p < n && R[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(R[p], R[row]);
    mpq_class inv = 1 / R[row][col];
    for (int k = col; k < n; ++k) R[row][k] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == row || R[r][col] == 0) continue;
      mpq_class f = R[r][col];
      for (int k = col; k < n; ++k) R[r][k] -= f * R[row][k];
    }
    pivcol.push_back(col);
    ++row;
  }
  std::vector<char> is_piv(n, 0);
  for (int c : pivcol) is_piv[c] = 1;
  std::vector<std::vector<mpz_class>> out;
  for (int f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    std::vector<mpq_class> v(n, 0);
    v[f] = 1;
    for (size_t r = 0; r < pivcol.size(); ++r) v[pivcol[r]] = -R[r][f];
    mpz_class l = 1, g = 0;
    for (auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> z(n);
    for (int k = 0; k < n; ++k) {
      z[k] = v[k].get_num() * (l / v[k].get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z[k].get_mpz_t());
    }
    for (auto& x : z) x /= g;
    out.push_back(z);
  }
  return out;
}

// Basis change e_i -> x for a left-kernel vector x with x_i = +-1, producing a zero row i.
bool reduce_kernel(IntMatrix& M) {
  for (int tr = 0; tr < 2; ++tr) {
    IntMatrix A = tr ? transposed(M) : M;
    for (auto& x : left_kernel(A)) {
      int n = static_cast<int>(A.size());
      int i = -1;
      for (int k = 0; k < n && i < 0; ++k)
        if (abs(x[k]) == 1) i = k;
      if (i < 0) continue;
      bool fits = true;
      for (auto& v : x) fits &= v.fits_slong_p();
      if (!fits) continue;
      // new column i is A x; row i becomes x^T A = 0
      std::vector<long long> xs(n);
      for (int k = 0; k < n; ++k) xs[k] = x[k].get_si();
      std::vector<long long> col(n);
      for (int a = 0; a < n; ++a) {
        __int128 s = 0;
        for (int k = 0; k < n; ++k) s += (__int128)A[a][k] * xs[k];
        col[a] = checked(s);
      }
      bool unit = false;
      for (int a = 0; a < n; ++a) unit |= a != i && std::llabs(col[a]) == 1;
      if (!unit) continue;
      for (int a = 0; a < n; ++a) A[a][i] = col[a];
      for (int b = 0; b < n; ++b) A[i][b] = 0;
      // column i entry for row i: x^T A x = 0
      M = tr ? transposed(A) : A;
      return true;
    }
  }
  return false;
}

}  // namespace

IntMatrix reduce_seifert_matrix(const IntMatrix& V) {
  IntMatrix M = V;
  while (!M.empty()) {
    if (reduce_zero_line(M)) continue;
    if (!reduce_kernel(M)) break;
  }
  return M;
}

IntMatrix seifert_matrix(const KnotDiagram& d, bool reduce) {
  if (d.size() == 0) return {};
  if (components(d).size() + d.free_loops != 1) throw DiagramError("Seifert matrix needs a knot");
  IntMatrix V = braid_seifert_matrix(braid_form(d));
  return reduce ? reduce_seifert_matrix(V) : V;
}

}  // namespace knots
