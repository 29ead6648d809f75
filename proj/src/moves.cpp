#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "knots/diagram.hpp"

namespace knots {

namespace {

int through(int s) { return (s + 2) & 3; }

// Rebuilds a tuple from its four strand ends.
Tuple make_tuple(int under_in, int under_out, int over_in, int over_out, int sign) {
  return sign > 0 ? Tuple{under_in, over_out, under_out, over_in} : Tuple{under_in, over_in, under_out, over_out};
}

struct Ends {
  int u_in, u_out, o_in, o_out;
};

Ends ends_of(const KnotDiagram& d, int c) {
  auto& t = d.x[c];
  return {t[0], t[2], t[d.over_in[c]], t[d.over_out(c)]};
}

// Removes crossings, merging the arcs of each strand that passed through them.
KnotDiagram remove_crossings(const KnotDiagram& d, const std::vector<int>& gone) {
  std::set<int> g(gone.begin(), gone.end());
  std::map<int, int> parent;
  std::function<int(int)> find = [&](int a) {
    auto it = parent.find(a);
    if (it == parent.end() || it->second == a) return a;
    return it->second = find(it->second);
  };
  auto unite = [&](int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent[a] = b;
  };
  for (int c : g) {
    unite(d.x[c][0], d.x[c][2]);
    unite(d.x[c][1], d.x[c][3]);
  }
  KnotDiagram out;
  out.free_loops = d.free_loops;
  std::set<int> alive;
  for (int c = 0; c < d.size(); ++c) {
    if (g.count(c)) continue;
    Tuple t = d.x[c];
    for (int& v : t) {
      v = find(v);
      alive.insert(v);
    }
    out.x.push_back(t);
    out.over_in.push_back(d.over_in[c]);
  }
  std::set<int> dead;
  for (int c : g)
    for (int v : d.x[c])
      if (!alive.count(find(v))) dead.insert(find(v));
  out.free_loops += static_cast<int>(dead.size());
  if (out.x.empty() && out.free_loops == 0) out.free_loops = 1;
  return out;
}

}  // namespace

bool reduce_r1(KnotDiagram& d) {
  for (int c = 0; c < d.size(); ++c) {
    auto& t = d.x[c];
    for (int s = 0; s < 4; ++s) {
      if (t[s] == t[(s + 1) & 3]) {
        d = remove_crossings(d, {c});
        return true;
      }
    }
  }
  return false;
}

bool reduce_r2(KnotDiagram& d) {
  for (auto& f : faces(d)) {
    if (f.size() != 2) continue;
    Slot a = f[0], b = f[1];
    if (a.c == b.c) continue;
    // the bigon edge leaving a ends at b's crossing; same strand parity means one strand is over twice
    int la = d.x[a.c][a.s];
    int sa_other = -1;
    for (int s = 0; s < 4; ++s)
      if (d.x[b.c][s] == la && !(b.c == a.c && s == a.s)) sa_other = s;
    if (sa_other < 0) continue;
    if ((a.s & 1) != (sa_other & 1)) continue;
    d = remove_crossings(d, {a.c, b.c});
    return true;
  }
  return false;
}

std::vector<std::array<int, 3>> r3_triangles(const KnotDiagram& d) {
  std::vector<std::array<int, 3>> out;
  for (auto& f : faces(d)) {
    if (f.size() != 3) continue;
    std::array<int, 3> cs{f[0].c, f[1].c, f[2].c};
    if (cs[0] == cs[1] || cs[1] == cs[2] || cs[0] == cs[2]) continue;
    // labels of the triangle edges
    std::array<int, 3> e{};
    for (int i = 0; i < 3; ++i) e[i] = d.x[f[i].c][f[i].s];
    auto arcs = arc_table(d);
    bool ok = false;
    for (int i = 0; i < 3; ++i) {
      auto& a = arcs[e[i]];
      bool over_t = a.tail.s & 1, over_h = a.head.s & 1;
      if (over_t == over_h) ok = true;
    }
    if (ok) out.push_back(e);
  }
  return out;
}

bool apply_r3(KnotDiagram& d, const std::array<int, 3>& tri) {
  auto arcs = arc_table(d);
  std::array<Ends, 3> cur;
  std::set<int> cs;
  for (int l : tri) cs.insert(arcs[l].head.c), cs.insert(arcs[l].tail.c);
  if (cs.size() != 3) return false;
  std::map<int, Ends> e;
  for (int c : cs) e[c] = ends_of(d, c);
  for (int l : tri) {
    Slot t = arcs[l].tail, h = arcs[l].head;
    int in = d.x[t.c][through(t.s)];
    int out = d.x[h.c][through(h.s)];
    // before: in -> X(t.c) -> l -> Y(h.c) -> out ; after: in -> Y -> l -> X -> out
    auto set_pair = [&](int c, bool under, int a_in, int a_out) {
      if (under)
        e[c].u_in = a_in, e[c].u_out = a_out;
      else
        e[c].o_in = a_in, e[c].o_out = a_out;
    };
    set_pair(h.c, h.s == 0, in, l);
    set_pair(t.c, t.s == 2, l, out);
  }
  for (int c : cs) d.x[c] = make_tuple(e[c].u_in, e[c].u_out, e[c].o_in, e[c].o_out, d.sign(c));
  return true;
}

KnotDiagram add_r1(const KnotDiagram& d, int arc, bool positive, bool left) {
  auto arcs = arc_table(d);
  if (arc < 0 || arc >= static_cast<int>(arcs.size()) || arcs[arc].head.c < 0)
    throw DiagramError("add_r1: no such arc");
  int m = max_label(d);
  int p = arc, l = m + 1, p2 = m + 2;
  KnotDiagram out = d;
  Slot h = arcs[arc].head;
  out.x[h.c][h.s] = p2;
  bool first_under = left ? positive : !positive;
  Tuple t;
  int8_t oi;
  if (left)
    t = first_under ? Tuple{p, p2, l, l} : Tuple{l, p, p2, l}, oi = first_under ? 3 : 1;
  else
    t = first_under ? Tuple{p, l, l, p2} : Tuple{l, l, p2, p}, oi = first_under ? 1 : 3;
  out.x.push_back(t);
  out.over_in.push_back(oi);
  return out;
}

KnotDiagram add_r2(const KnotDiagram& d, int face_idx, int e1, int e2, bool first_over) {
  auto fs = faces(d);
  if (face_idx < 0 || face_idx >= static_cast<int>(fs.size())) throw DiagramError("add_r2: no such face");
  auto& f = fs[face_idx];
  if (e1 == e2 || e1 < 0 || e2 < 0 || e1 >= static_cast<int>(f.size()) || e2 >= static_cast<int>(f.size()))
    throw DiagramError("add_r2: bad edges");
  auto arcs = arc_table(d);
  int P = d.x[f[e1].c][f[e1].s], Q = d.x[f[e2].c][f[e2].s];
  if (P == Q) throw DiagramError("add_r2: edges share an arc");
  // P on the left of the face (traversed downward), Q on the right (traversed upward).
  bool p_down = arcs[P].tail == f[e1];
  bool q_up = arcs[Q].tail == f[e2];
  int m = max_label(d);
  int p1 = m + 1, p2 = m + 2, q1 = m + 3, q2 = m + 4;
  KnotDiagram out = d;
  out.x[arcs[P].head.c][arcs[P].head.s] = p2;
  out.x[arcs[Q].head.c][arcs[Q].head.s] = q2;
  // compass entries: label, incoming, strand (0 = P, 1 = Q); order S,E,N,W is counterclockwise
  struct Pt {
    int label;
    bool in;
    int strand;
  };
  enum { S, E, N, W };
  std::array<Pt, 4> T{}, B{};
  if (p_down) {
    T[W] = {P, true, 0}, T[E] = {p1, false, 0};
    B[E] = {p1, true, 0}, B[W] = {p2, false, 0};
  } else {
    B[W] = {P, true, 0}, B[E] = {p1, false, 0};
    T[E] = {p1, true, 0}, T[W] = {p2, false, 0};
  }
  if (q_up) {
    B[S] = {Q, true, 1}, B[N] = {q1, false, 1};
    T[S] = {q1, true, 1}, T[N] = {q2, false, 1};
  } else {
    T[N] = {Q, true, 1}, T[S] = {q1, false, 1};
    B[N] = {q1, true, 1}, B[S] = {q2, false, 1};
  }
  int under = first_over ? 1 : 0;
  for (auto* X : {&T, &B}) {
    int start = -1;
    for (int k = 0; k < 4; ++k)
      if ((*X)[k].strand == under && (*X)[k].in) start = k;
    Tuple t;
    int8_t oi = 0;
    for (int j = 0; j < 4; ++j) {
      auto& pt = (*X)[(start + j) & 3];
      t[j] = pt.label;
      if (pt.strand != under && pt.in) oi = static_cast<int8_t>(j);
    }
    out.x.push_back(t);
    out.over_in.push_back(oi);
  }
  return out;
}

KnotDiagram simplify(const KnotDiagram& d, int budget, uint64_t seed) {
  auto reduce = [](KnotDiagram k) {
    while (reduce_r1(k) || reduce_r2(k)) {
    }
    return k;
  };
  KnotDiagram best = reduce(d), cur = best;
  std::mt19937_64 rng(seed);
  int stale = 0;
  for (int step = 0; step < budget; ++step) {
    auto tris = r3_triangles(cur);
    if (tris.empty()) break;
    std::uniform_int_distribution<size_t> pick(0, tris.size() - 1);
    KnotDiagram next = cur;
    apply_r3(next, tris[pick(rng)]);
    next = reduce(next);
    cur = next;
    if (cur.size() < best.size()) {
      best = cur;
      stale = 0;
    } else if (++stale > 40) {
      cur = best;
      stale = 0;
    }
  }
  return best;
}

}  // namespace knots
