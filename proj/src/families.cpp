#include "knots/families.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace knots {

namespace {

// Column of strands i,i+1 moves right past column i+2,i+3.
void colswap(MorseBuilder& M, int i, bool over) {
  for (int k : {i + 1, i, i + 2, i + 1}) M.x(k, over);
}

// n full twists of the strand pair at i.
void twist(MorseBuilder& M, int i, int n) {
  for (int r = 0; r < std::abs(n); ++r) M.x(i, n > 0).x(i, n > 0);
}

void full_twist(MorseBuilder& M, int lo, int w, int k) {
  for (int r = 0; r < std::abs(k); ++r)
    for (int s = 0; s < w; ++s)
      for (int i = lo; i < lo + w - 1; ++i) M.x(i, k > 0);
}

// Strand at p moves right across the pair p+1,p+2.
void strand_right(MorseBuilder& M, int p, bool over) { M.x(p, over).x(p + 1, over); }

// Pair at p,p+1 moves right across the strand p+2.
void pair_right(MorseBuilder& M, int p, bool over) { M.x(p + 1, over).x(p, over); }

// Band template for the six-parameter family. The parameters enter negated;
// `neck` adds the extra B/G twist that distinguishes the two knots.
KnotDiagram family_template(const FamilyParams& q, int neck) {
  const int ta = 1, te = 1, tc = -1;
  MorseBuilder M;
  M.cup(0).cup(1).cup(3);
  twist(M, 0, q.d + q.f + neck);
  M.cup(1).cup(1);
  twist(M, 2, -neck);
  M.cup(3).cup(3);
  twist(M, 2, q.b);
  M.cup(3);
  twist(M, 2, q.a + ta);
  twist(M, 8, q.e + te);
  twist(M, 4, q.c + tc);
  colswap(M, 0, true);
  colswap(M, 0, true);
  colswap(M, 4, true);
  M.cap(3).cap(2);
  colswap(M, 4, false);
  M.cap(7).cap(6);
  colswap(M, 2, false);
  M.cap(1).cap(0).cap(1).cap(0);
  return M.build();
}

FamilyParams negated(const FamilyParams& p) { return {-p.a, -p.b, -p.c, -p.d, -p.e, -p.f}; }

void require_odd(int m) {
  if (m % 2 == 0) throw std::invalid_argument("annulus parameter m must be odd, got " + std::to_string(m));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, sep)) out.push_back(tok);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace

AnnulusParams AnnulusParams::parse(const std::string& s) {
  auto v = split(s, ',');
  if (v.size() != 2 && v.size() != 3) throw std::invalid_argument("expected m,k or m,k,n: " + s);
  AnnulusParams q{std::stoi(v[0]), std::stoi(v[1]), v.size() == 3 ? std::stoi(v[2]) : 0};
  return q;
}

std::string AnnulusParams::str() const {
  return std::to_string(m) + "," + std::to_string(k) + "," + std::to_string(n);
}

FamilyPair gen_family_pair(const FamilyParams& p) {
  // the template is drawn in the mirrored convention; mirror back so that
  // sigma(K_B) = sigma(A) and the companion s values carry the expected sign
  FamilyParams q = negated(p);
  return {mirror(family_template(q, 0)), mirror(family_template(q, p.b + 1))};
}

RBGLink gen_family_rbg(const FamilyParams& p) {
  // R is an unknot; B and G are meridians of R, split from each other (l = 0).
  MorseBuilder M;
  M.cup(0).cup(2);
  M.x(1, false).x(1, false);
  M.cap(2).cup(2);
  M.x(1, false).x(1, false);
  M.cap(2).cap(0);
  std::vector<std::vector<int>> comps;
  RBGLink L;
  L.diagram = M.build(&comps);
  // components() order: the walk meets R first at crossing 0; identify B and G by their crossings
  auto cc = crossing_components(L.diagram);
  int R = cc[0][0] == cc[2][0] || cc[0][0] == cc[2][1] ? cc[0][0] : cc[0][1];
  int B = cc[0][0] == R ? cc[0][1] : cc[0][0];
  int G = cc[2][0] == R ? cc[2][1] : cc[2][0];
  L.component = {R, B, G};
  L.framing = {Framing{p.a + p.b, 1}, Framing{0, 1}, Framing{0, 1}};
  L.special = true;
  L.small = true;
  return L;
}

KnotDiagram gen_annulus_knot(const AnnulusParams& q) {
  require_odd(q.m);
  if (q.n != 0) throw std::invalid_argument("gen_annulus_knot takes n = 0");
  MorseBuilder M;
  M.cup(0).cup(1);
  const int R = 3;
  M.cup(R + 1);
  for (int i = 0; i < std::abs(q.m); ++i) M.x(R, q.m > 0);
  strand_right(M, R - 1, false);
  strand_right(M, 1, true);
  pair_right(M, 1, true);
  full_twist(M, 0, 2, q.k);
  M.cap(1).cap(1).cap(0);
  return M.build();
}

KnotDiagram gen_annulus_twist(const AnnulusParams& q) {
  require_odd(q.m);
  if (q.n != 1 && q.n != -1) throw std::invalid_argument("annulus twist template covers n = +1 and n = -1 only");
  MorseBuilder M;
  M.cup(0).cup(1).cup(2).cup(3);
  const int R = 7;
  M.cup(R + 1);
  if (q.n == -1) pair_right(M, 1, true);
  for (int i = 0; i < std::abs(q.m); ++i) M.x(R, q.m > 0);
  strand_right(M, 6, false);
  strand_right(M, 5, false);
  strand_right(M, 4, false);
  strand_right(M, 3, true);
  if (q.n == -1) {
    strand_right(M, 2, true);
    strand_right(M, 1, true);
    full_twist(M, 0, 4, q.k);
  } else {
    M.cap(2).cap(1).cup(1).cup(2);
    pair_right(M, 3, true);
    full_twist(M, 0, 4, q.k);
    // the loop strands carry one compensating negative full twist
    full_twist(M, 1, 2, -1);
  }
  M.cap(3).cap(3).cap(2).cap(1).cap(0);
  return M.build();
}

KnotDiagram gen_annulus(const AnnulusParams& q) { return q.n == 0 ? gen_annulus_knot(q) : gen_annulus_twist(q); }

bool ribbon_flag(const AnnulusParams& q) { return q.m == 3 - 2 * q.k; }

const TableEntry* KnotTable::find(const std::string& name) const {
  for (auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

KnotTable parse_knot_table(const std::string& text) {
  KnotTable t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, '|');
    auto fail = [&](const std::string& why) {
      throw TableError("knot table line " + std::to_string(lineno) + ": " + why);
    };
    if (f.size() != 6) fail("expected 6 fields, got " + std::to_string(f.size()));
    TableEntry e;
    e.name = f[0];
    try {
      e.dt = parse_dt(f[1]);
      e.alexander = LaurentPoly::parse(f[2]);
      e.signature = std::stoi(f[3]);
      e.det = std::stoll(f[4]);
    } catch (const std::exception& ex) {
      fail(ex.what());
    }
    if (f[5] != "slice" && f[5] != "-") fail("slice field must be 'slice' or '-'");
    e.slice = f[5] == "slice";
    try {
      e.diagram = pd_from_dt(e.dt);
    } catch (const DiagramError& ex) {
      fail(std::string("DT code of ") + e.name + ": " + ex.what());
    }
    auto fp = fingerprint(e.diagram);
    if (!(fp.alexander == e.alexander.normalized()) || fp.signature != e.signature || fp.det != e.det)
      throw TableError("knot table fingerprint mismatch for " + e.name + " (line " + std::to_string(lineno) +
                       "): computed " + fp.alexander.pretty() + ", sigma " + std::to_string(fp.signature) +
                       ", det " + std::to_string(fp.det));
    e.alexander = fp.alexander;
    t.entries.push_back(std::move(e));
  }
  for (size_t i = 0; i < t.entries.size(); ++i)
    for (size_t j = 0; j < t.entries.size(); ++j) {
      if (i == j) continue;
      auto &a = t.entries[i], &b = t.entries[j];
      if (a.alexander == b.alexander && a.det == b.det && std::abs(a.signature) == std::abs(b.signature))
        a.ambiguous = true;
    }
  return t;
}

KnotTable load_knot_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableError("cannot open knot table " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_knot_table(ss.str());
}

std::string default_table_path() {
  if (const char* env = std::getenv("KNOTS_TABLE")) return env;
  return std::string(KNOTS_DATA_DIR) + "/knot_table.txt";
}

Identification identify_fingerprint(const Fingerprint& f, const KnotTable& table) {
  Identification id;
  if (f.alexander == LaurentPoly(1) && f.signature == 0 && f.det == 1) id.candidates.push_back({"0_1", false});
  for (auto& e : table.entries) {
    if (!(e.alexander == f.alexander) || e.det != f.det) continue;
    if (e.signature == f.signature) id.candidates.push_back({e.name, false});
    if (-e.signature == f.signature && e.signature != 0) id.candidates.push_back({e.name, true});
  }
  id.ambiguous = id.candidates.size() > 1;
  return id;
}

Identification identify(const KnotDiagram& d, const KnotTable& table) {
  if (d.size() == 0) return {{{"0_1", false}}, false};
  return identify_fingerprint(fingerprint(d), table);
}

}  // namespace knots
