#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "knots/families.hpp"
#include "knots/invariants.hpp"
#include "knots/khovanov.hpp"
#include "knots/rbg.hpp"

namespace knots {

// Inclusive ranges for (a,b,c,d,e,f).
struct GridRanges {
  std::array<std::pair<int, int>, 6> r{{{-2, 2}, {-1, 1}, {-2, 2}, {-1, 1}, {-2, 2}, {-1, 1}}};
  // "a=-2..2,b=-1..1,..."; unnamed coordinates keep the defaults; "a=0" is a single value.
  static GridRanges parse(const std::string& s);
  static GridRanges single(const FamilyParams& p);
  std::vector<FamilyParams> points() const;  // lexicographic in (a,..,f)
  size_t size() const;
  std::string str() const;
};

enum class KnotType { B, G };

struct KnotId {
  KnotType type = KnotType::B;
  FamilyParams p;
  std::string str() const;  // K_B(a,b,c,d,e,f)
  static KnotId parse(const std::string& s);
  KnotId companion() const { return {type == KnotType::B ? KnotType::G : KnotType::B, p}; }
  auto operator<=>(const KnotId&) const = default;
};

struct SValue {
  std::optional<int> s;
  std::string source;           // fixture | computed | inferred | timeout | crossing_cap | memory
  std::optional<int> computed;  // value computed on our diagram when a fixture overrides it
  long long ms = 0;
  bool known() const { return s.has_value(); }
};

struct SearchRecord {
  FamilyParams params;
  PairRecord cls;
  std::string excluded;  // "" | "b=-1" | "a+b=0"
  LaurentPoly alexander;
  int sigma = 0;
  long long det = 1;
  int arf = 0;
  std::optional<LaurentPoly> fox_milnor;
  std::optional<Metabolizer> metabolizer;
  std::optional<int> hbar_n;
  // diagram route
  int crossings_b = 0, crossings_g = 0;
  std::string hash_b, hash_g;
  long long det_b = 0, det_g = 0;
  std::map<Field, SValue> s_b, s_g;
  std::string failure;  // per-point failure, empty if none

  bool queued() const { return excluded.empty(); }
  std::map<Field, SValue>& s_of(KnotType t) { return t == KnotType::B ? s_b : s_g; }
  const std::map<Field, SValue>& s_of(KnotType t) const { return t == KnotType::B ? s_b : s_g; }
  std::optional<int> s(KnotType t, Field f = Field::Q) const;
  std::string to_json() const;
};

// Content-addressed journal of s computations: key = diagram hash + invariant + field.
class Cache {
 public:
  explicit Cache(std::string dir);
  std::optional<SResult> get(const std::string& hash, Field f) const;
  // Appends to the journal; throws if the key already holds a different value.
  void put(const std::string& hash, const SResult& r);
  size_t size() const;
  static std::string key(const std::string& hash, Field f);

 private:
  std::string path_;
  mutable std::mutex mu_;
  std::map<std::string, SResult> entries_;
};

struct CacheConflict : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  GridRanges ranges;
  std::vector<Field> fields{Field::Q};
  bool diagrams = true;      // generate K_B, K_G for crossing counts, hashes, coloring determinants
  bool metabolizers = true;  // search metabolizers where Fox-Milnor passes
  std::string s_fixtures;    // empty: no fixtures
  int max_s = 0;             // knots whose s is computed directly (0: none)
  int batch = 16;            // s computations between monotone-fill passes
  std::string cache_dir;     // empty: no cache
  KhLimits limits;
  uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency
  std::string str() const;  // key=value lines
};

using SMap = std::map<KnotId, int>;

SMap load_s_fixtures(const std::string& path);
std::string default_fixtures_path();

std::vector<SearchRecord> run_grid(const PipelineConfig& cfg);
// Sets s values from fixtures (field Q); computed values are kept alongside.
void apply_s_fixtures(std::vector<SearchRecord>& recs, const SMap& fx);
// Computes s for queued sigma = 0 pairs, cheapest first, filling after each batch.
void s_phase(std::vector<SearchRecord>& recs, const PipelineConfig& cfg, Cache* cache);

struct MonotonicityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Completes a partial map for one knot type: equal values at p <= q propagate to
// every point between them. Throws if some p <= q has s(p) < s(q).
std::map<FamilyParams, int> monotone_fill(const std::map<FamilyParams, int>& known);
// Runs monotone_fill on the Q values of each knot type, marking new values "inferred".
int fill_records(std::vector<SearchRecord>& recs);

struct CP2Result {
  enum class Verdict { NotApplicable, None, Witness, Inconclusive } verdict = Verdict::None;
  std::vector<std::string> chain;
};
std::string to_string(CP2Result::Verdict v);
CP2Result cp2_exclusion(const KnotId& candidate, const std::vector<SearchRecord>& all);

std::optional<int> hbar_slice_certificate(const FamilyParams& p);

struct PromisingPair {
  std::string name;  // K1.. after exclusion, empty before
  KnotId knot, companion;
  int s = 0, s_companion = 0;
  const SearchRecord* rec = nullptr;
};
struct PromisingResult {
  std::vector<PromisingPair> pre;         // sigma = 0, s = 0 / companion s = -2
  std::vector<PromisingPair> candidates;  // after the CP2 exclusion
  std::vector<std::pair<PromisingPair, CP2Result>> excluded;
  std::vector<FamilyParams> undetermined;  // sigma = 0 pairs with an unknown s
};
PromisingResult promising_filter(const std::vector<SearchRecord>& recs);

struct BPHNode {
  std::string knot;  // table name or 0_1
  std::string leaf;  // "slice" or "unknot" at leaves, empty otherwise
  int neg_crossing = -1, pos_crossing = -1;
  std::unique_ptr<BPHNode> neg, pos;
};
struct BPHResult {
  bool certified = false;
  std::unique_ptr<BPHNode> certificate;
  std::vector<std::string> evidence;  // one line per crossing change tried at the root
};
BPHResult bph_certify(const std::string& name, const KnotTable& table, int depth = 3);
// Re-applies every crossing change of the certificate and re-identifies the result.
bool replay_certificate(const BPHNode& node, const KnotTable& table);

enum class ReportFormat { CSV, Markdown };
ReportFormat parse_format(const std::string& s);

struct AnnulusCell {
  int m = 1, k = 0;
  int sigma = 0;
  std::optional<int> s;
  std::string status;
};
std::vector<AnnulusCell> annulus_grid(const std::vector<int>& ms, const std::vector<int>& ks, Field f,
                                      const KhLimits& lim = {});

std::string table1_report(const PromisingResult& pr, ReportFormat fmt);
// Table 2 layout; sigma printed with the table's sign convention (minus the standard sigma).
std::string table2_report(const std::vector<AnnulusCell>& cells, ReportFormat fmt);
std::string grid_report(const std::vector<SearchRecord>& recs, ReportFormat fmt);
// Writes table1, grid and (if cells are given) table2 files into dir; returns the paths.
std::vector<std::string> emit_report(const std::vector<SearchRecord>& recs, const std::vector<AnnulusCell>& cells,
                                     ReportFormat fmt, const std::string& dir);

}  // namespace knots
