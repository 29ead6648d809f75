#include <doctest.h>

#include <random>

#include "../oracles/kh_cube.hpp"
#include "fixtures.hpp"
#include "knots/families.hpp"
#include "knots/khovanov.hpp"

using namespace knots;

namespace {

const Field kFields[] = {Field::Q, Field::F2, Field::F3};

// Oracle prime for each field; Q is checked modulo a large prime.
oracle::u64 prime_for(Field f) { return f == Field::F2 ? 2 : f == Field::F3 ? 3 : 1000000007ULL; }

KnotDiagram unknot() {
  KnotDiagram d;
  d.free_loops = 1;
  return d;
}

const KnotDiagram& right_trefoil() { return fixtures::knot("3_1").pd; }

std::map<int, long long> euler(const KhTable& t) {
  std::map<int, long long> out;
  for (auto [k, v] : t) out[k.second] += (k.first & 1) ? -v : v;
  for (auto it = out.begin(); it != out.end();) it = it->second ? std::next(it) : out.erase(it);
  return out;
}

}  // namespace

TEST_CASE("unknot") {
  for (Field f : kFields) {
    KhTable t = khovanov_homology(unknot(), f);
    CHECK((t == KhTable{{{0, -1}, 1}, {{0, 1}, 1}}));
    auto s = s_invariant(unknot(), f);
    REQUIRE(s.s);
    CHECK(*s.s == 0);
    CHECK((lee_homology(unknot(), FrobeniusSpec::for_field(f)) == std::vector<int>{-1, 1}));
  }
  // a one-crossing diagram of the unknot
  auto kink = parse_pd("X[1,1,2,2]");
  CHECK((khovanov_homology(kink, Field::Q) == KhTable{{{0, -1}, 1}, {{0, 1}, 1}}));
}

TEST_CASE("right trefoil calibration") {
  KhTable t = khovanov_homology(right_trefoil(), Field::Q);
  CHECK((t == KhTable{{{0, 1}, 1}, {{0, 3}, 1}, {{2, 5}, 1}, {{3, 9}, 1}}));
  CHECK(t == oracle::khovanov(right_trefoil(), prime_for(Field::Q)));
  for (Field f : kFields) {
    auto s = s_invariant(right_trefoil(), f);
    REQUIRE(s.s);
    CHECK(*s.s == 2);
    CHECK((lee_homology(right_trefoil(), FrobeniusSpec::for_field(f)) == std::vector<int>{1, 3}));
    CHECK(*s_invariant(mirror(right_trefoil()), f).s == -2);
  }
}

TEST_CASE("figure-eight") {
  auto& d = fixtures::knot("4_1").pd;
  KhTable t = khovanov_homology(d, Field::Q);
  CHECK(euler(t) == oracle::jones_state_sum(d));
  for (Field f : kFields) CHECK(*s_invariant(d, f).s == 0);
  CHECK((oracle::lee_levels(d, 1000000007ULL) == std::pair{-1, 1}));
  CHECK((lee_homology(d, FrobeniusSpec::for_field(Field::Q)) == std::vector<int>{-1, 1}));
}

TEST_CASE("Lee levels agree with the brute-force filtered complex") {
  for (const char* name : {"3_1", "4_1", "5_1", "5_2", "6_1", "6_2"}) {
    auto& d = fixtures::knot(name).pd;
    for (auto D : {d, mirror(d)}) {
      auto [lo, hi] = oracle::lee_levels(D, 1000000007ULL);
      CHECK_MESSAGE((lee_homology(D, FrobeniusSpec::for_field(Field::Q)) == std::vector<int>{lo, hi}), name);
      auto [lo3, hi3] = oracle::lee_levels(D, 3);
      CHECK_MESSAGE((lee_homology(D, FrobeniusSpec::for_field(Field::F3)) == std::vector<int>{lo3, hi3}), name);
    }
  }
}

TEST_CASE("scanning engine equals the brute-force cube for knots up to 8 crossings") {
  for (auto& k : fixtures::knotinfo()) {
    if (k.pd.size() > 8) continue;
    for (Field f : kFields) {
      KhTable scan = khovanov_homology(k.pd, f);
      CHECK_MESSAGE(scan == oracle::khovanov(k.pd, prime_for(f)), k.name << " over " << to_string(f));
    }
  }
}

TEST_CASE("Khovanov tables and s over Q match the knot table") {
  for (auto& k : fixtures::knotinfo()) {
    KhTable t = khovanov_homology(k.pd, Field::Q);
    KhTable expect;
    for (auto [key, v] : k.kh) expect[key] = v;
    CHECK_MESSAGE(t == expect, k.name);
    CHECK_MESSAGE(euler(t) == oracle::jones_state_sum(k.pd), k.name);
    CHECK_MESSAGE(*s_invariant(k.pd, Field::Q).s == k.s, k.name);
  }
}

TEST_CASE("deformed homology has rank two over every field") {
  for (auto& k : fixtures::knotinfo()) {
    if (k.pd.size() > 7) continue;
    for (Field f : kFields) {
      auto r = khovanov_scan(k.pd, FrobeniusSpec::for_field(f));
      REQUIRE(r.free.size() == 2);
      CHECK(r.free[0].first == 0);
      CHECK(r.free[1].first == 0);
      CHECK(r.free[1].second - r.free[0].second == 2);
    }
  }
}

TEST_CASE("s is even and negates under mirror") {
  for (const char* name : {"3_1", "5_2", "7_4", "8_19", "9_42"}) {
    auto& d = fixtures::knot(name).pd;
    for (Field f : kFields) {
      int s = *s_invariant(d, f).s;
      CHECK(s % 2 == 0);
      if (f == Field::Q) CHECK_MESSAGE(*s_invariant(mirror(d), f).s == -s, name);
    }
  }
  auto pr = gen_family_pair({1, 1, -1, 1, 2, -1});
  int s = *s_invariant(pr.kb, Field::Q).s;
  CHECK(*s_invariant(mirror(pr.kb), Field::Q).s == -s);
}

TEST_CASE("s and Khovanov tables are invariant under random Reidemeister moves") {
  std::mt19937_64 rng(7);
  for (const char* name : {"3_1", "4_1", "5_2", "6_2", "7_3", "8_5"}) {
    KnotDiagram d = fixtures::knot(name).pd;
    KhTable t0 = khovanov_homology(d, Field::F3);
    int s0 = *s_invariant(d, Field::Q).s;
    KnotDiagram e = d;
    for (int step = 0; step < 8; ++step) {
      int kind = static_cast<int>(rng() % 3);
      if (kind == 0) {
        int arc = 1 + static_cast<int>(rng() % (2 * e.size()));
        e = add_r1(e, arc, rng() & 1, rng() & 2);
      } else if (kind == 1) {
        auto fs = faces(e);
        int fi = static_cast<int>(rng() % fs.size());
        if (fs[fi].size() < 2) continue;
        int e1 = static_cast<int>(rng() % fs[fi].size());
        int e2 = static_cast<int>(rng() % fs[fi].size());
        if (e1 == e2) continue;
        e = add_r2(e, fi, e1, e2, rng() & 1);
      } else {
        auto tr = r3_triangles(e);
        if (!tr.empty()) apply_r3(e, tr[rng() % tr.size()]);
      }
    }
    CHECK_MESSAGE(khovanov_homology(e, Field::F3) == t0, name);
    KhLimits raw;
    CHECK_MESSAGE(khovanov_scan(e, FrobeniusSpec::for_field(Field::Q), raw).free ==
                      khovanov_scan(d, FrobeniusSpec::for_field(Field::Q), raw).free,
                  name);
    CHECK(*s_invariant(e, Field::Q).s == s0);
  }
}

TEST_CASE("changing a negative crossing to a positive one never decreases s") {
  for (auto& k : fixtures::knotinfo()) {
    if (k.pd.size() > 7) continue;
    int s = *s_invariant(k.pd, Field::Q).s;
    for (int c = 0; c < k.pd.size(); ++c) {
      if (k.pd.sign(c) > 0) continue;
      int s2 = *s_invariant(crossing_change(k.pd, c), Field::Q).s;
      CHECK_MESSAGE(s2 >= s, k.name << " crossing " << c);
    }
  }
}

TEST_CASE("annulus knots") {
  // Table 2 entries and the annulus-twist jump
  CHECK(*s_invariant(gen_annulus_knot({3, 1}), Field::Q).s == -2);
  CHECK(*s_invariant(gen_annulus_knot({7, 1}), Field::Q).s == -2);
  CHECK(*s_invariant(gen_annulus_knot({1, -2}), Field::Q).s == 0);
  CHECK(*s_invariant(gen_annulus_twist({1, -2, 1}), Field::Q).s == 2);
  CHECK(*s_invariant(gen_annulus_twist({1, -2, -1}), Field::Q).s == 2);
}

TEST_CASE("limits produce typed results") {
  auto pr = gen_family_pair({1, 1, 1, 1, 0, -1});
  KhLimits cap;
  cap.crossing_cap = 5;
  auto r = s_invariant(pr.kg, Field::Q, cap);
  CHECK(r.status == "crossing_cap");
  CHECK(!r.s);
  KhLimits fast;
  fast.timeout_ms = 1;
  auto r2 = s_invariant(pr.kg, Field::Q, fast);
  CHECK(r2.status == "timeout");
  CHECK(!r2.s);
  CHECK_THROWS_AS(khovanov_homology(pr.kg, Field::Q, fast), KhTimeout);
  CHECK(r2.to_json().find("\"s\": null") != std::string::npos);
}

TEST_CASE("field parsing") {
  CHECK(parse_field("F2") == Field::F2);
  CHECK(parse_field("Q") == Field::Q);
  CHECK_THROWS(parse_field("F5"));
  CHECK(FrobeniusSpec::for_field(Field::F2).deformation == Deformation::BarNatan);
  CHECK(FrobeniusSpec::for_field(Field::F3).deformation == Deformation::Lee);
}
