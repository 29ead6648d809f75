#include "knots/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace knots {

namespace {

bool is_head(const KnotDiagram& d, int c, int s) { return s == 0 || s == d.over_in[c]; }

// Slot on the same strand at the other side of the crossing.
int through(int s) { return (s + 2) & 3; }

}  // namespace

int max_label(const KnotDiagram& d) {
  int m = 0;
  for (auto& t : d.x)
    for (int v : t) m = std::max(m, v);
  return m;
}

std::vector<ArcInfo> arc_table(const KnotDiagram& d, int* max_out) {
  int m = max_label(d);
  if (max_out) *max_out = m;
  std::vector<ArcInfo> arcs(m + 1, ArcInfo{{-1, -1}, {-1, -1}});
  for (int c = 0; c < d.size(); ++c) {
    for (int s = 0; s < 4; ++s) {
      int l = d.x[c][s];
      if (l < 0) throw DiagramError("negative arc label");
      Slot& dst = is_head(d, c, s) ? arcs[l].head : arcs[l].tail;
      if (dst.c >= 0) throw DiagramError("arc " + std::to_string(l) + " has inconsistent orientation");
      dst = {c, s};
    }
  }
  for (int l = 0; l <= m; ++l) {
    bool h = arcs[l].head.c >= 0, t = arcs[l].tail.c >= 0;
    if (h != t) throw DiagramError("arc " + std::to_string(l) + " does not appear exactly twice");
  }
  return arcs;
}

KnotDiagram from_pd(const std::vector<Tuple>& tuples) {
  KnotDiagram d;
  d.x = tuples;
  int n = d.size();
  d.over_in.assign(n, 0);
  if (n == 0) {
    d.free_loops = 1;
    return d;
  }
  std::map<int, std::vector<Slot>> occ;
  for (int c = 0; c < n; ++c)
    for (int s = 0; s < 4; ++s) occ[d.x[c][s]].push_back({c, s});
  for (auto& [l, v] : occ)
    if (v.size() != 2) throw DiagramError("arc " + std::to_string(l) + " appears " + std::to_string(v.size()) + " times");
  auto other = [&](int c, int s) {
    auto& v = occ[d.x[c][s]];
    return v[0] == Slot{c, s} ? v[1] : v[0];
  };
  // Direction of an arc end: +1 incoming, -1 outgoing, 0 unknown.
  auto dir = [&](int c, int s) -> int {
    if (s == 0) return 1;
    if (s == 2) return -1;
    if (d.over_in[c] == 0) return 0;
    return s == d.over_in[c] ? 1 : -1;
  };
  auto settle = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int c = 0; c < n; ++c) {
        if (d.over_in[c]) continue;
        for (int s : {1, 3}) {
          Slot o = other(c, s);
          int od = dir(o.c, o.s);
          if (o.c == c && (o.s == 1 || o.s == 3)) continue;
          if (od != 0) {
            d.over_in[c] = static_cast<int8_t>(od == -1 ? s : through(s));
            changed = true;
            break;
          }
        }
      }
    }
  };
  settle();
  for (int c = 0; c < n; ++c) {
    if (d.over_in[c]) continue;
    int j = d.x[c][1], l = d.x[c][3];
    bool from3 = (j - l == 1) || (l - j > 1);
    d.over_in[c] = from3 ? 3 : 1;
    settle();
  }
  arc_table(d);
  return d;
}

KnotDiagram parse_pd(const std::string& text) {
  std::vector<Tuple> tuples;
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
  };
  skip();
  if (i < text.size() && text.compare(i, 3, "PD[") == 0) i += 3;
  while (true) {
    skip();
    if (i >= text.size() || text[i] == ']') break;
    if (text[i] != 'X' || i + 1 >= text.size() || text[i + 1] != '[')
      throw DiagramError("PD parse error at offset " + std::to_string(i));
    i += 2;
    Tuple t{};
    for (int k = 0; k < 4; ++k) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      size_t used = 0;
      try {
        t[k] = std::stoi(text.substr(i), &used);
      } catch (...) {
        throw DiagramError("PD parse error at offset " + std::to_string(i));
      }
      i += used;
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      char want = k < 3 ? ',' : ']';
      if (i >= text.size() || text[i] != want) throw DiagramError("PD parse error at offset " + std::to_string(i));
      ++i;
    }
    tuples.push_back(t);
  }
  return from_pd(tuples);
}

std::string format_pd(const KnotDiagram& d) {
  std::string out;
  for (int c = 0; c < d.size(); ++c) {
    if (c) out += ',';
    auto& t = d.x[c];
    out += "X[" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + "," +
           std::to_string(t[3]) + "]";
  }
  return out;
}

namespace {

int next_arc(const KnotDiagram& d, const std::vector<ArcInfo>& arcs, int l) {
  Slot h = arcs[l].head;
  return d.x[h.c][through(h.s)];
}

}  // namespace

std::vector<std::vector<int>> components(const KnotDiagram& d) {
  int m = 0;
  auto arcs = arc_table(d, &m);
  std::vector<char> seen(m + 1, 0);
  std::vector<std::vector<int>> comps;
  for (int l = 0; l <= m; ++l) {
    if (seen[l] || arcs[l].head.c < 0) continue;
    std::vector<int> comp;
    int a = l;
    while (!seen[a]) {
      seen[a] = 1;
      comp.push_back(a);
      a = next_arc(d, arcs, a);
    }
    comps.push_back(comp);
  }
  return comps;
}

int num_components(const KnotDiagram& d) { return static_cast<int>(components(d).size()) + d.free_loops; }

std::vector<std::array<int, 2>> crossing_components(const KnotDiagram& d) {
  auto comps = components(d);
  std::map<int, int> comp_of;
  for (int i = 0; i < static_cast<int>(comps.size()); ++i)
    for (int l : comps[i]) comp_of[l] = i;
  std::vector<std::array<int, 2>> out(d.size());
  for (int c = 0; c < d.size(); ++c) out[c] = {comp_of[d.x[c][0]], comp_of[d.x[c][1]]};
  return out;
}

KnotDiagram sublink(const KnotDiagram& d, const std::vector<int>& keep) {
  auto cc = crossing_components(d);
  auto kept = [&](int comp) { return std::find(keep.begin(), keep.end(), comp) != keep.end(); };
  std::map<int, int> parent;
  std::function<int(int)> root = [&](int l) {
    auto it = parent.find(l);
    if (it == parent.end() || it->second == l) return l;
    return it->second = root(it->second);
  };
  KnotDiagram out;
  std::set<int> touched;
  for (int c = 0; c < d.size(); ++c) {
    bool under = kept(cc[c][0]), over = kept(cc[c][1]);
    if (under && over) {
      touched.insert(cc[c][0]);
      touched.insert(cc[c][1]);
      continue;
    }
    if (under) parent[root(d.x[c][2])] = root(d.x[c][0]);
    if (over) parent[root(d.x[c][3])] = root(d.x[c][1]);
  }
  for (int c = 0; c < d.size(); ++c) {
    if (!kept(cc[c][0]) || !kept(cc[c][1])) continue;
    Tuple t;
    for (int s = 0; s < 4; ++s) t[s] = root(d.x[c][s]);
    out.x.push_back(t);
    out.over_in.push_back(d.over_in[c]);
  }
  for (int comp : keep) out.free_loops += !touched.count(comp);
  return out.x.empty() ? out : normalize_labels(out);
}

KnotDiagram normalize_labels(const KnotDiagram& d) {
  auto comps = components(d);
  std::map<int, int> relabel;
  int next = 1;
  for (auto& comp : comps)
    for (int l : comp) relabel[l] = next++;
  KnotDiagram out = d;
  for (auto& t : out.x)
    for (int& v : t) v = relabel.at(v);
  return out;
}

KnotDiagram crossing_change(const KnotDiagram& d, int idx) {
  if (idx < 0 || idx >= d.size()) throw DiagramError("crossing index out of range: " + std::to_string(idx));
  KnotDiagram out = d;
  auto& t = out.x[idx];
  Tuple o = t;
  if (d.sign(idx) > 0) {
    t = {o[3], o[0], o[1], o[2]};
    out.over_in[idx] = 1;
  } else {
    t = {o[1], o[2], o[3], o[0]};
    out.over_in[idx] = 3;
  }
  return out;
}

KnotDiagram mirror(const KnotDiagram& d) {
  KnotDiagram out = d;
  for (int c = 0; c < d.size(); ++c) out = crossing_change(out, c);
  return out;
}

int writhe(const KnotDiagram& d) {
  int w = 0;
  for (int c = 0; c < d.size(); ++c) w += d.sign(c);
  return w;
}

int linking_number(const KnotDiagram& d, int i, int j) {
  int nc = static_cast<int>(components(d).size());
  if (i == j || i < 0 || j < 0 || i >= nc + d.free_loops || j >= nc + d.free_loops)
    throw DiagramError("invalid component ids");
  if (i >= nc || j >= nc) return 0;
  auto cc = crossing_components(d);
  int s = 0;
  for (int c = 0; c < d.size(); ++c)
    if ((cc[c][0] == i && cc[c][1] == j) || (cc[c][0] == j && cc[c][1] == i)) s += d.sign(c);
  return s / 2;
}

std::vector<std::vector<Slot>> faces(const KnotDiagram& d) {
  int n = d.size();
  std::map<int, std::vector<Slot>> occ;
  for (int c = 0; c < n; ++c)
    for (int s = 0; s < 4; ++s) occ[d.x[c][s]].push_back({c, s});
  std::vector<char> used(4 * n, 0);
  std::vector<std::vector<Slot>> out;
  for (int c = 0; c < n; ++c) {
    for (int s = 0; s < 4; ++s) {
      if (used[4 * c + s]) continue;
      std::vector<Slot> face;
      Slot h{c, s};
      while (!used[4 * h.c + h.s]) {
        used[4 * h.c + h.s] = 1;
        face.push_back(h);
        auto& v = occ[d.x[h.c][h.s]];
        Slot o = v[0] == h ? v[1] : v[0];
        h = {o.c, (o.s + 3) & 3};
      }
      out.push_back(face);
    }
  }
  return out;
}

bool is_planar(const KnotDiagram& d) {
  int n = d.size();
  if (n == 0) return true;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  auto arcs = arc_table(d);
  for (auto& a : arcs)
    if (a.head.c >= 0) parent[find(a.head.c)] = find(a.tail.c);
  int pieces = 0;
  for (int c = 0; c < n; ++c) pieces += find(c) == c;
  return static_cast<int>(faces(d).size()) == n + 2 * pieces;
}

std::vector<int> gauss_code(const KnotDiagram& d) {
  auto comps = components(d);
  if (comps.size() > 1) throw DiagramError("Gauss code needs one component, got " + std::to_string(comps.size()));
  std::vector<int> out;
  if (comps.empty()) return out;
  auto arcs = arc_table(d);
  for (int l : comps[0]) {
    Slot h = arcs[l].head;
    out.push_back(h.s == 0 ? -(h.c + 1) : (h.c + 1));
  }
  return out;
}

DTCode dt_from_pd(const KnotDiagram& d) {
  auto comps = components(d);
  if (comps.size() + d.free_loops > 1 && d.size() > 0)
    throw DiagramError("DT code needs one component, got " + std::to_string(comps.size() + d.free_loops));
  if (d.size() == 0) return {};
  auto g = gauss_code(d);
  int n = d.size();
  std::vector<int> odd_pos(n, 0), even_pos(n, 0);
  std::vector<bool> even_over(n, false);
  for (int i = 0; i < 2 * n; ++i) {
    int c = std::abs(g[i]) - 1;
    if ((i + 1) % 2)
      odd_pos[c] = i + 1;
    else {
      even_pos[c] = i + 1;
      even_over[c] = g[i] > 0;
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < n; ++c) {
    if (!odd_pos[c] || !even_pos[c]) throw DiagramError("Gauss code violates odd/even parity");
    pairs.push_back({odd_pos[c], even_over[c] ? -even_pos[c] : even_pos[c]});
  }
  std::sort(pairs.begin(), pairs.end());
  DTCode out;
  for (auto& p : pairs) out.push_back(p.second);
  return out;
}

KnotDiagram pd_from_dt(const DTCode& dt) {
  int n = static_cast<int>(dt.size());
  if (n == 0) return from_pd({});
  std::vector<int> seen(2 * n + 1, 0);
  for (int v : dt) {
    int a = std::abs(v);
    if (a % 2 || a < 2 || a > 2 * n || seen[a]++) throw DiagramError("DT code is not a signed permutation of evens");
  }
  if (n > 22) throw DiagramError("DT realization limited to 22 crossings");
  // Visit i (1..2n) belongs to crossing cross_of[i]; arc i runs from visit i to visit i+1.
  std::vector<int> cross_of(2 * n + 1), other(2 * n + 1);
  std::vector<bool> under_at(2 * n + 1);
  for (int c = 0; c < n; ++c) {
    int o = 2 * c + 1, e = std::abs(dt[c]);
    cross_of[o] = cross_of[e] = c;
    other[o] = e;
    other[e] = o;
    bool even_over = dt[c] < 0;
    under_at[e] = !even_over;
    under_at[o] = even_over;
  }
  auto in_arc = [&](int v) { return v == 1 ? 2 * n : v - 1; };
  auto make = [&](uint32_t bits) {
    KnotDiagram d;
    d.x.resize(n);
    d.over_in.resize(n);
    for (int c = 0; c < n; ++c) {
      int o = 2 * c + 1, e = other[o];
      int u = under_at[o] ? o : e, v = under_at[o] ? e : o;
      bool up = (bits >> c) & 1;
      // over strand enters at slot 3 (up) or slot 1
      if (up)
        d.x[c] = {in_arc(u), v, u, in_arc(v)};
      else
        d.x[c] = {in_arc(u), in_arc(v), u, v};
      d.over_in[c] = up ? 3 : 1;
    }
    return d;
  };
  for (uint32_t bits = 0; bits < (1u << (n - 1)); ++bits) {
    // crossing 0 fixed to over-in slot 3 removes the reflected duplicate
    KnotDiagram d = make((bits << 1) | 1u);
    if (is_planar(d)) return d;
  }
  throw DiagramError("DT code not realizable: no planar rotation system (face count never reaches n+2)");
}

DTCode parse_dt(const std::string& text) {
  DTCode out;
  std::string cleaned;
  for (char ch : text) cleaned += (ch == ',' || ch == '[' || ch == ']' || ch == '(' || ch == ')') ? ' ' : ch;
  std::istringstream is(cleaned);
  int v;
  while (is >> v) out.push_back(v);
  if (!is.eof()) throw DiagramError("DT parse error");
  return out;
}

std::string format_dt(const DTCode& dt) {
  std::string out;
  for (size_t i = 0; i < dt.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(dt[i]);
  }
  return out;
}

namespace {

uint64_t fnv1a(const std::vector<int>& v) {
  uint64_t h = 1469598103934665603ull;
  for (int x : v) {
    uint32_t u = static_cast<uint32_t>(x);
    for (int k = 0; k < 4; ++k) {
      h ^= (u >> (8 * k)) & 0xff;
      h *= 1099511628211ull;
    }
  }
  return h;
}

// Relabels crossings by first appearance; entries encode index, over/under, sign.
std::vector<int> encode_walk(const std::vector<std::pair<int, int>>& walk, const std::vector<int>& sign) {
  std::map<int, int> id;
  std::vector<int> out;
  for (auto [c, over] : walk) {
    auto it = id.find(c);
    if (it == id.end()) it = id.emplace(c, static_cast<int>(id.size()) + 1).first;
    out.push_back((it->second * 2 + (over ? 1 : 0)) * (sign[c] > 0 ? 1 : -1));
  }
  return out;
}

}  // namespace

std::string canonical_hash(const KnotDiagram& d) {
  std::vector<int> best;
  auto comps = components(d);
  if (comps.size() <= 1) {
    std::vector<int> sign(d.size());
    for (int c = 0; c < d.size(); ++c) sign[c] = d.sign(c);
    std::vector<std::pair<int, int>> walk;
    if (!comps.empty()) {
      auto arcs = arc_table(d);
      for (int l : comps[0]) {
        Slot h = arcs[l].head;
        walk.push_back({h.c, h.s != 0});
      }
    }
    int m = static_cast<int>(walk.size());
    bool first = true;
    for (int rev = 0; rev < 2; ++rev) {
      auto w = walk;
      if (rev) std::reverse(w.begin(), w.end());
      for (int b = 0; b < std::max(m, 1); ++b) {
        std::vector<std::pair<int, int>> rot(w.begin() + (m ? b : 0), w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + (m ? b : 0));
        auto code = encode_walk(rot, sign);
        if (first || code < best) best = code, first = false;
      }
    }
    best.push_back(d.free_loops);
  } else {
    KnotDiagram n = normalize_labels(d);
    for (int c = 0; c < n.size(); ++c) {
      for (int v : n.x[c]) best.push_back(v);
      best.push_back(n.sign(c));
    }
    best.push_back(-1000 - d.free_loops);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(best)));
  return buf;
}

int order_girth(const KnotDiagram& d, const std::vector<int>& order) {
  int m = max_label(d);
  std::vector<int> cnt(m + 1, 0);
  int open = 0, girth = 0;
  for (int c : order) {
    for (int v : d.x[c]) {
      if (cnt[v] == 0)
        ++open;
      else if (cnt[v] == 1)
        --open;
      ++cnt[v];
    }
    girth = std::max(girth, open);
  }
  return girth;
}

GirthOrder girth_order(const KnotDiagram& d) {
  int n = d.size();
  GirthOrder res;
  if (n == 0) return res;
  std::vector<int> ident(n);
  std::iota(ident.begin(), ident.end(), 0);
  res.order = ident;
  res.girth = order_girth(d, ident);
  if (n <= 16) {
    // exact: best[S] = min over last crossing of max(best[S \ c], open(S))
    int m = max_label(d);
    std::vector<std::vector<int>> at(m + 1);
    for (int c = 0; c < n; ++c)
      for (int v : d.x[c]) at[v].push_back(c);
    uint32_t full = (1u << n) - 1;
    std::vector<uint8_t> open(1u << n, 0), best(1u << n, 255), last(1u << n, 0);
    for (uint32_t S = 1; S <= full; ++S) {
      int low = __builtin_ctz(S);
      uint32_t P = S & (S - 1);
      int o = open[P];
      for (int v : d.x[low]) {
        auto& a = at[v];
        int other = a[0] == low ? a[1] : a[0];
        if (a[0] == low && a[1] == low) continue;
        if ((P >> other) & 1)
          --o;
        else
          ++o;
      }
      open[S] = static_cast<uint8_t>(o);
    }
    best[0] = 0;
    for (uint32_t S = 1; S <= full; ++S) {
      for (uint32_t T = S; T; T &= T - 1) {
        int c = __builtin_ctz(T);
        int v = std::max<int>(best[S ^ (1u << c)], open[S]);
        if (v < best[S]) best[S] = static_cast<uint8_t>(v), last[S] = static_cast<uint8_t>(c);
      }
    }
    std::vector<int> ord;
    for (uint32_t S = full; S; S ^= 1u << last[S]) ord.push_back(last[S]);
    std::reverse(ord.begin(), ord.end());
    int g = order_girth(d, ord);
    if (g <= res.girth) res = {ord, g};
    return res;
  }
  int m = max_label(d);
  for (int start = 0; start < n; ++start) {
    std::vector<int> cnt(m + 1, 0), ord;
    std::vector<char> used(n, 0);
    int open = 0, girth = 0;
    auto add = [&](int c) {
      for (int v : d.x[c]) {
        if (cnt[v] == 0)
          ++open;
        else if (cnt[v] == 1)
          --open;
        ++cnt[v];
      }
      used[c] = 1;
      ord.push_back(c);
      girth = std::max(girth, open);
    };
    add(start);
    while (static_cast<int>(ord.size()) < n) {
      int bc = -1, bdelta = 1 << 30, bshared = -1;
      for (int c = 0; c < n; ++c) {
        if (used[c]) continue;
        int shared = 0;
        for (int v : d.x[c]) shared += cnt[v] == 1;
        int delta = 4 - 2 * shared;
        if (delta < bdelta || (delta == bdelta && shared > bshared)) bc = c, bdelta = delta, bshared = shared;
      }
      add(bc);
      if (girth >= res.girth) break;
    }
    if (static_cast<int>(ord.size()) == n && girth < res.girth) res = {ord, girth};
  }
  return res;
}

MorseBuilder& MorseBuilder::cup(int i) {
  int s = fresh();
  pos_.insert(pos_.begin() + i, {s, s});
  return *this;
}

MorseBuilder& MorseBuilder::cap(int i) {
  int a = find(pos_[i]), b = find(pos_[i + 1]);
  if (a != b) parent_[a] = b;
  pos_.erase(pos_.begin() + i, pos_.begin() + i + 2);
  return *this;
}

MorseBuilder& MorseBuilder::x(int i, bool slash_over) {
  int bl = pos_[i], br = pos_[i + 1];
  int tl = fresh(), tr = fresh();
  cross_.push_back({bl, br, tr, tl});
  slash_.push_back(slash_over);
  pos_[i] = tl;
  pos_[i + 1] = tr;
  return *this;
}

int MorseBuilder::fresh() {
  int s = static_cast<int>(parent_.size());
  parent_.push_back(s);
  return s;
}

int MorseBuilder::find(int s) const {
  while (parent_[s] != s) s = parent_[s] = parent_[parent_[s]];
  return s;
}

KnotDiagram MorseBuilder::build(std::vector<std::vector<int>>* comps) const {
  if (!pos_.empty()) throw DiagramError("Morse diagram not closed");
  int n = static_cast<int>(cross_.size());
  std::map<int, std::vector<Slot>> slots;
  for (int c = 0; c < n; ++c)
    for (int k = 0; k < 4; ++k) slots[find(cross_[c][k])].push_back({c, k});
  int free = 0;
  std::vector<char> root_seen(parent_.size(), 0);
  for (size_t s = 0; s < parent_.size(); ++s) {
    int r = find(static_cast<int>(s));
    if (!root_seen[r]) {
      root_seen[r] = 1;
      if (!slots.count(r)) ++free;
    }
  }
  std::vector<int> incoming(4 * n, -1), label(4 * n, 0);
  int lab = 0;
  for (int c = 0; c < n; ++c) {
    for (int k0 = 0; k0 < 4; ++k0) {
      if (incoming[4 * c + k0] >= 0) continue;
      std::vector<int> comp;
      int cc = c, kk = k0;
      while (incoming[4 * cc + kk] < 0) {
        incoming[4 * cc + kk] = 1;
        int ko = (kk + 2) & 3;
        incoming[4 * cc + ko] = 0;
        int seg = find(cross_[cc][ko]);
        ++lab;
        label[4 * cc + ko] = lab;
        comp.push_back(lab);
        auto& v = slots[seg];
        Slot nxt = (v[0] == Slot{cc, ko}) ? v[1] : v[0];
        label[4 * nxt.c + nxt.s] = lab;
        cc = nxt.c;
        kk = nxt.s;
      }
      if (comps) comps->push_back(comp);
    }
  }
  KnotDiagram d;
  d.free_loops = free;
  d.x.resize(n);
  d.over_in.resize(n);
  for (int c = 0; c < n; ++c) {
    int slash_in = incoming[4 * c + 0] ? 0 : 2;
    int back_in = incoming[4 * c + 1] ? 1 : 3;
    int under_in = slash_[c] ? back_in : slash_in;
    int over_in = slash_[c] ? slash_in : back_in;
    for (int j = 0; j < 4; ++j) d.x[c][j] = label[4 * c + ((under_in + j) & 3)];
    d.over_in[c] = static_cast<int8_t>((over_in - under_in + 4) & 3);
  }
  return d;
}

}  // namespace knots
