#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "knots/pipeline.hpp"

using namespace knots;

namespace {

const KnotTable& table() {
  static const KnotTable t = load_knot_table(default_table_path());
  return t;
}

const std::vector<SearchRecord>& grid_with_fixtures() {
  static const std::vector<SearchRecord> recs = [] {
    PipelineConfig cfg;
    cfg.diagrams = false;
    cfg.metabolizers = false;
    cfg.s_fixtures = default_fixtures_path();
    return run_grid(cfg);
  }();
  return recs;
}

std::string tmpdir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("knots_test_" + name);
  std::filesystem::remove_all(p);
  return p.string();
}

const char* kSigmaZero[] = {"6_1",  "8_8",  "8_9",  "8_20", "9_27", "9_41", "9_46", "4_1",
                            "6_3",  "8_3",  "8_12", "8_17", "8_18", "7_7",  "8_1",  "8_13",
                            "9_14", "9_19", "9_24", "9_30", "9_33", "9_34", "9_37", "9_44"};

}  // namespace

TEST_CASE("grid ranges") {
  GridRanges g;
  CHECK(g.size() == 3375);
  CHECK(g.points().size() == 3375);
  CHECK(GridRanges::parse(g.str()).r == g.r);
  auto one = GridRanges::parse("a=0,b=0,c=0,d=0,e=0,f=0");
  CHECK(one.size() == 1);
  CHECK(GridRanges::single({1, 2, 3, 4, 5, 6}).points()[0] == FamilyParams{1, 2, 3, 4, 5, 6});
  CHECK_THROWS(GridRanges::parse("g=0..1"));
  CHECK_THROWS(GridRanges::parse("a=2..1"));
  CHECK(KnotId::parse("K_G(0,1,0,-1,2,1)").str() == "K_G(0,1,0,-1,2,1)");
  CHECK_THROWS(KnotId::parse("K_R(0,0,0,0,0,0)"));
}

TEST_CASE("exclusion accounting") {
  auto& recs = grid_with_fixtures();
  REQUIRE(recs.size() == 3375);
  size_t after_b = 0, queued = 0;
  for (auto& r : recs) {
    after_b += r.excluded != "b=-1";
    queued += r.queued();
    CHECK(r.failure.empty());
  }
  CHECK(after_b == 2250);
  CHECK(queued == 1800);
}

TEST_CASE("single grid point with diagrams") {
  PipelineConfig cfg;
  cfg.ranges = GridRanges::single({0, 0, 0, 0, 0, 0});
  auto recs = run_grid(cfg);
  REQUIRE(recs.size() == 1);
  auto& r = recs[0];
  // the family matrix at the origin gives -2t+5-2t^-1; both diagrams agree with it
  CHECK(r.alexander == LaurentPoly::parse("-2t+5-2t^-1"));
  CHECK(r.det_b == r.det);
  CHECK(r.det_g == r.det);
  CHECK(r.hbar_n == 0);
  CHECK(r.excluded == "a+b=0");
  CHECK(r.crossings_b > 0);
  CHECK(!r.hash_b.empty());
  CHECK(r.hash_b != r.hash_g);
}

TEST_CASE("monotone fill") {
  std::map<FamilyParams, int> known{{{0, 0, 0, 0, 0, 0}, 0}, {{1, 0, 1, 0, 0, 0}, 0}};
  auto filled = monotone_fill(known);
  CHECK(filled.size() == 4);
  CHECK(filled.at({1, 0, 0, 0, 0, 0}) == 0);
  CHECK(filled.at({0, 0, 1, 0, 0, 0}) == 0);

  std::map<FamilyParams, int> same{{{1, 1, 1, 1, 1, 1}, -2}};
  CHECK(monotone_fill(same) == same);

  std::map<FamilyParams, int> differ{{{0, 0, 0, 0, 0, 0}, 0}, {{0, 0, 2, 0, 0, 0}, -2}};
  CHECK(monotone_fill(differ) == differ);

  std::map<FamilyParams, int> bad{{{0, 0, 0, 0, 0, 0}, -2}, {{0, 1, 0, 0, 0, 0}, 0}};
  CHECK_THROWS_WITH_AS(monotone_fill(bad), doctest::Contains("0,1,0,0,0,0"), MonotonicityError);

  // fill never contradicts a directly known value
  std::map<FamilyParams, int> chain{{{0, 0, 0, 0, 0, 0}, 2}, {{0, 0, 1, 0, 0, 0}, 2}, {{0, 0, 2, 0, 0, 0}, 0},
                                    {{0, 0, 4, 0, 0, 0}, 0}};
  auto fc = monotone_fill(chain);
  for (auto& [p, s] : chain) CHECK(fc.at(p) == s);
  CHECK(fc.at({0, 0, 3, 0, 0, 0}) == 0);
  CHECK(fc.size() == 5);
}

TEST_CASE("fixtures are consistent with monotonicity") {
  auto recs = grid_with_fixtures();
  int inferred = 0;
  for (auto& r : recs)
    for (auto t : {KnotType::B, KnotType::G}) {
      auto& m = r.s_of(t);
      auto it = m.find(Field::Q);
      if (it != m.end() && it->second.source == "inferred") ++inferred;
    }
  // the only comparable equal pair is K_B(-1,1,0,-1,2,1) <= K_B(0,1,0,-1,2,1)
  CHECK(inferred == 0);
  CHECK(fill_records(recs) == 0);
}

TEST_CASE("CP2 exclusion") {
  auto& recs = grid_with_fixtures();
  auto w = cp2_exclusion(KnotId::parse("K_G(0,1,0,-1,2,1)"), recs);
  CHECK(w.verdict == CP2Result::Verdict::Witness);
  REQUIRE(w.chain.size() == 3);
  CHECK(w.chain[0].find("K_G(-1,1,0,-1,2,1)") != std::string::npos);
  CHECK(w.chain[2].find("s(K_B(-1,1,0,-1,2,1)) = -2") != std::string::npos);
  CHECK(cp2_exclusion(KnotId::parse("K_G(2,1,-2,0,2,1)"), recs).verdict == CP2Result::Verdict::None);
  CHECK(cp2_exclusion(KnotId::parse("K_B(1,1,0,-1,1,1)"), recs).verdict == CP2Result::Verdict::NotApplicable);
  // K1 needs s of K_G(-1,1,0,1,2,-1), which no fixture supplies
  CHECK(cp2_exclusion(KnotId::parse("K_B(0,1,0,1,2,-1)"), recs).verdict == CP2Result::Verdict::Inconclusive);
}

TEST_CASE("H-bar slice certificate") {
  CHECK(hbar_slice_certificate({1, 1, -1, 1, 2, -1}) == 2);
  CHECK(hbar_slice_certificate({1, 0, 0, 0, 0, 0}) == 0);
  CHECK(!hbar_slice_certificate({0, -1, 0, 0, 0, 0}));
  for (auto& r : grid_with_fixtures())
    if (r.hbar_n) CHECK(*r.hbar_n == r.params.b + r.params.c + r.params.e);
}

TEST_CASE("promising filter") {
  auto pr = promising_filter(grid_with_fixtures());
  CHECK(pr.pre.size() == 24);
  REQUIRE(pr.candidates.size() == 23);
  REQUIRE(pr.excluded.size() == 1);
  CHECK(pr.excluded[0].first.knot.str() == "K_G(0,1,0,-1,2,1)");
  CHECK(pr.candidates[0].name == "K1");
  CHECK(pr.candidates[0].knot.str() == "K_B(0,1,0,1,2,-1)");
  CHECK(pr.candidates[17].knot.str() == "K_G(2,1,-2,0,2,1)");
  CHECK(pr.candidates[22].knot.str() == "K_G(2,1,2,0,-2,1)");
  for (auto& c : pr.candidates) {
    CHECK(c.rec->sigma == 0);
    auto n = hbar_slice_certificate(c.knot.p);
    REQUIRE(n);
    CHECK(*n >= 1);
    CHECK(*n <= 3);
  }
  CHECK(promising_filter({}).pre.empty());
}

TEST_CASE("BPH classifier") {
  auto& t = table();
  auto r41 = bph_certify("4_1", t);
  CHECK(r41.certified);
  REQUIRE(r41.certificate);
  CHECK(r41.certificate->neg->leaf == "unknot");
  CHECK(r41.certificate->pos->leaf == "unknot");
  CHECK(replay_certificate(*r41.certificate, t));

  auto r61 = bph_certify("6_1", t);
  CHECK(r61.certified);
  CHECK(r61.certificate->leaf == "slice");

  auto r818 = bph_certify("8_18", t);
  CHECK(!r818.certified);
  REQUIRE(r818.evidence.size() == 8);
  for (auto& line : r818.evidence) CHECK(line.find("-> 3_1") != std::string::npos);

  for (const char* name : kSigmaZero) {
    if (std::string(name) == "8_18") continue;
    auto r = bph_certify(name, t);
    CHECK_MESSAGE(r.certified, std::string(name));
    if (r.certified) CHECK_MESSAGE(replay_certificate(*r.certificate, t), std::string(name));
  }
  // a knot with nonzero signature is never certified
  CHECK(!bph_certify("3_1", t).certified);
}

TEST_CASE("cache") {
  auto dir = tmpdir("cache");
  {
    Cache c(dir);
    SResult r;
    r.s = -2;
    r.field = Field::Q;
    r.hash = "abc";
    c.put("abc", r);
    c.put("abc", r);
    SResult bad = r;
    bad.s = 0;
    CHECK_THROWS_AS(c.put("abc", bad), CacheConflict);
    CHECK(c.size() == 1);
  }
  Cache again(dir);
  REQUIRE(again.get("abc", Field::Q));
  CHECK(*again.get("abc", Field::Q)->s == -2);
  CHECK(!again.get("abc", Field::F2));
  std::ifstream in(dir + "/journal.jsonl");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 1);
}

TEST_CASE("s phase computes, caches and fills") {
  PipelineConfig cfg;
  cfg.ranges = GridRanges::parse("a=1..1,b=1..1,c=-1..-1,d=1..1,e=2..2,f=-1..-1");
  cfg.max_s = 4;
  cfg.cache_dir = tmpdir("sphase");
  cfg.limits.timeout_ms = 60000;
  auto recs = run_grid(cfg);
  REQUIRE(recs.size() == 1);
  auto sb = recs[0].s(KnotType::B), sg = recs[0].s(KnotType::G);
  REQUIRE(sb);
  REQUIRE(sg);
  CHECK(*sb % 2 == 0);
  CHECK(*sg % 2 == 0);
  CHECK(Cache(cfg.cache_dir).size() == 2);
  // a rerun reads the cache and reproduces the record
  auto again = run_grid(cfg);
  CHECK(again[0].to_json().find("\"source\":\"computed\"") != std::string::npos);
  CHECK(again[0].s(KnotType::B) == sb);
  CHECK(Cache(cfg.cache_dir).size() == 2);
}

TEST_CASE("reports") {
  auto& recs = grid_with_fixtures();
  auto pr = promising_filter(recs);
  auto csv = table1_report(pr, ReportFormat::CSV);
  CHECK(csv.find("K14,\"K_B(2,1,0,1,0,-1)\"") != std::string::npos);
  CHECK(csv.find("-2t+5-2t^-1") != std::string::npos);
  auto md = table1_report(pr, ReportFormat::Markdown);
  CHECK(md.find("| K22 | K_G(2,1,1,0,-1,1) |") != std::string::npos);
  // header only for empty input
  auto empty = table1_report(PromisingResult{}, ReportFormat::CSV);
  CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);

  std::vector<AnnulusCell> cells{{7, 1, 2, -2, "ok"}, {1, -2, -2, 0, "ok"}};
  auto t2 = table2_report(cells, ReportFormat::CSV);
  CHECK(t2.find("(-2 -2)") != std::string::npos);
  CHECK(t2.find("(2 0)") != std::string::npos);

  auto d1 = tmpdir("report1"), d2 = tmpdir("report2");
  auto p1 = emit_report(recs, cells, ReportFormat::CSV, d1);
  auto p2 = emit_report(recs, cells, ReportFormat::CSV, d2);
  REQUIRE(p1.size() == 3);
  for (size_t i = 0; i < p1.size(); ++i) {
    std::ifstream a(p1[i]), b(p2[i]);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
  }
  CHECK_THROWS(emit_report(recs, cells, ReportFormat::CSV, "/proc/forbidden/x"));
  CHECK(parse_format("md") == ReportFormat::Markdown);
  CHECK_THROWS(parse_format("xml"));
}
