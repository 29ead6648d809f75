#include "knots/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <thread>

namespace knots {

namespace {

using json = nlohmann::json;

const char kNames[] = "abcdef";

void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  int w = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  w = static_cast<int>(std::min<size_t>(w, std::max<size_t>(n, 1)));
  if (w <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < n;) fn(i);
    });
  for (auto& th : pool) th.join();
}

bool leq(const FamilyParams& p, const FamilyParams& q) {
  auto a = p.arr(), b = q.arr();
  for (int i = 0; i < 6; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

// 0 means no diagram was generated.
std::string count_cell(int n) { return n ? std::to_string(n) : ""; }

json svalue_json(const SValue& v) {
  json j;
  j["s"] = v.s ? json(*v.s) : json(nullptr);
  j["source"] = v.source;
  if (v.computed) j["computed"] = *v.computed;
  j["ms"] = v.ms;
  return j;
}

SResult sresult_from_json(const json& j) {
  SResult r;
  if (!j.at("s").is_null()) r.s = j.at("s").get<int>();
  r.field = parse_field(j.at("field").get<std::string>());
  r.girth = j.value("girth", 0);
  r.ms = j.value("ms", 0LL);
  r.hash = j.value("hash", "");
  r.status = j.value("status", "ok");
  return r;
}

SearchRecord make_record(const FamilyParams& p, const PipelineConfig& cfg) {
  SearchRecord r;
  r.params = p;
  r.cls = classify_pair(p);
  r.excluded = kb_equals_kg_rule(p) ? "b=-1" : trace_diffeo_rule(p) ? "a+b=0" : "";
  auto A = family_seifert_matrix(p);
  r.alexander = alexander(A);
  r.det = determinant_inv(A);
  r.arf = arf_from_det(r.det);
  try {
    r.sigma = signature(A);
  } catch (const SignatureError& e) {
    r.failure = e.what();
  }
  r.fox_milnor = fox_milnor(r.alexander);
  if (cfg.metabolizers && r.fox_milnor && r.sigma == 0) r.metabolizer = metabolizer_search(A, 8);
  r.hbar_n = hbar_slice_certificate(p);
  if (cfg.diagrams) {
    auto pr = gen_family_pair(p);
    r.crossings_b = pr.kb.size();
    r.crossings_g = pr.kg.size();
    r.hash_b = canonical_hash(pr.kb);
    r.hash_g = canonical_hash(pr.kg);
    r.det_b = coloring_determinant(pr.kb);
    r.det_g = coloring_determinant(pr.kg);
  }
  return r;
}

// Table 1 ordering: trivial Delta, then Fox-Milnor passes, then failures; within a
// group by a, K_B before K_G, then c, d, e, f, b.
std::array<int, 9> table_key(const PromisingPair& pp) {
  const auto& r = *pp.rec;
  int group = r.alexander == LaurentPoly(1) ? 0 : r.fox_milnor ? 1 : 2;
  auto& p = pp.knot.p;
  return {group, p.a, pp.knot.type == KnotType::G, p.c, p.d, p.e, p.f, p.b, 0};
}

std::string fmt_row(const std::vector<std::string>& cells, ReportFormat fmt) {
  std::string out;
  if (fmt == ReportFormat::CSV) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      bool quote = cells[i].find(',') != std::string::npos;
      out += quote ? "\"" + cells[i] + "\"" : cells[i];
    }
  } else {
    out = "|";
    for (auto& c : cells) out += " " + c + " |";
  }
  return out + "\n";
}

std::string fmt_header(const std::vector<std::string>& cells, ReportFormat fmt) {
  std::string out = fmt_row(cells, fmt);
  if (fmt == ReportFormat::Markdown) {
    out += "|";
    for (size_t i = 0; i < cells.size(); ++i) out += "---|";
    out += "\n";
  }
  return out;
}

std::string s_cell(const std::map<Field, SValue>& m, Field f) {
  auto it = m.find(f);
  if (it == m.end()) return "";
  if (it->second.s) return std::to_string(*it->second.s);
  return it->second.source;
}

const SearchRecord* find_record(const std::vector<SearchRecord>& all, const FamilyParams& p) {
  for (auto& r : all)
    if (r.params == p) return &r;
  return nullptr;
}

std::unique_ptr<BPHNode> leaf(const std::string& name, const char* why) {
  auto n = std::make_unique<BPHNode>();
  n->knot = name;
  n->leaf = why;
  return n;
}

// Fingerprint lookup; collisions are split by the Khovanov table over Q.
struct Recognizer {
  const KnotTable& table;
  std::map<std::pair<std::string, bool>, KhTable> kh;

  const KhTable& kh_of(const Candidate& c) {
    auto key = std::pair{c.name, c.mirrored};
    auto it = kh.find(key);
    if (it != kh.end()) return it->second;
    KnotDiagram d = c.name == "0_1" ? KnotDiagram{} : table.find(c.name)->diagram;
    if (c.name == "0_1") d.free_loops = 1;
    if (c.mirrored) d = mirror(d);
    return kh[key] = khovanov_homology(d, Field::Q);
  }

  std::optional<std::string> operator()(const KnotDiagram& d) {
    auto id = identify(d, table);
    if (id.candidates.size() == 1) return id.candidates[0].name;
    if (id.candidates.empty()) return std::nullopt;
    KhTable own = khovanov_homology(d, Field::Q);
    std::set<std::string> left;
    for (auto c : id.candidates)
      for (bool m : {false, true}) {
        c.mirrored = m;
        if (kh_of(c) == own) left.insert(c.name);
      }
    if (left.size() != 1) return std::nullopt;
    return *left.begin();
  }
};

struct BPHSearch {
  const KnotTable& table;
  Recognizer recognize;
  std::map<std::pair<std::string, int>, bool> failed;

  std::unique_ptr<BPHNode> certify(const std::string& name, int depth) {
    if (name == "0_1") return leaf(name, "unknot");
    const TableEntry* e = table.find(name);
    if (!e) return nullptr;
    if (e->slice) return leaf(name, "slice");
    if (depth == 0 || failed.count({name, depth})) return nullptr;
    std::unique_ptr<BPHNode> neg, pos;
    int neg_c = -1, pos_c = -1;
    for (int c = 0; c < e->diagram.size(); ++c) {
      bool negative = e->diagram.sign(c) < 0;
      if (negative ? bool(neg) : bool(pos)) continue;
      auto d2 = crossing_change(e->diagram, c);
      if (fingerprint(d2).signature != 0) continue;
      auto child = recognize(d2);
      if (!child) continue;
      auto node = certify(*child, depth - 1);
      if (!node) continue;
      (negative ? neg : pos) = std::move(node);
      (negative ? neg_c : pos_c) = c;
    }
    if (!neg || !pos) {
      failed[{name, depth}] = true;
      return nullptr;
    }
    auto n = std::make_unique<BPHNode>();
    n->knot = name;
    n->neg_crossing = neg_c;
    n->pos_crossing = pos_c;
    n->neg = std::move(neg);
    n->pos = std::move(pos);
    return n;
  }
};

}  // namespace

// ---- grid ----

GridRanges GridRanges::parse(const std::string& s) {
  GridRanges g;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    auto eq = tok.find('=');
    if (eq != 1 || std::string(kNames).find(tok[0]) == std::string::npos)
      throw std::invalid_argument("bad grid range '" + tok + "' (expected x=lo..hi with x in a..f)");
    int i = static_cast<int>(std::string(kNames).find(tok[0]));
    auto rest = tok.substr(2);
    auto dots = rest.find("..");
    int lo = std::stoi(rest.substr(0, dots));
    int hi = dots == std::string::npos ? lo : std::stoi(rest.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("empty grid range '" + tok + "'");
    g.r[i] = {lo, hi};
  }
  return g;
}

GridRanges GridRanges::single(const FamilyParams& p) {
  GridRanges g;
  auto a = p.arr();
  for (int i = 0; i < 6; ++i) g.r[i] = {a[i], a[i]};
  return g;
}

std::vector<FamilyParams> GridRanges::points() const {
  std::vector<FamilyParams> out;
  std::array<int, 6> v;
  std::function<void(int)> rec = [&](int i) {
    if (i == 6) {
      out.push_back(FamilyParams::from(v));
      return;
    }
    for (v[i] = r[i].first; v[i] <= r[i].second; ++v[i]) rec(i + 1);
  };
  rec(0);
  return out;
}

size_t GridRanges::size() const {
  size_t n = 1;
  for (auto& [lo, hi] : r) n *= static_cast<size_t>(hi - lo + 1);
  return n;
}

std::string GridRanges::str() const {
  std::string out;
  for (int i = 0; i < 6; ++i) {
    if (i) out += ',';
    out += std::string(1, kNames[i]) + "=" + std::to_string(r[i].first) + ".." + std::to_string(r[i].second);
  }
  return out;
}

std::string KnotId::str() const { return std::string(type == KnotType::B ? "K_B(" : "K_G(") + p.str() + ")"; }

KnotId KnotId::parse(const std::string& s) {
  auto open = s.find('('), close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("expected K_B(a,b,c,d,e,f) or K_G(...): " + s);
  auto head = s.substr(0, open);
  KnotId id;
  if (head == "K_B" || head == "KB")
    id.type = KnotType::B;
  else if (head == "K_G" || head == "KG")
    id.type = KnotType::G;
  else
    throw std::invalid_argument("unknown knot type '" + head + "'");
  id.p = FamilyParams::parse(s.substr(open + 1, close - open - 1));
  return id;
}

std::optional<int> SearchRecord::s(KnotType t, Field f) const {
  auto& m = s_of(t);
  auto it = m.find(f);
  return it == m.end() ? std::nullopt : it->second.s;
}

std::string SearchRecord::to_json() const {
  json j;
  j["params"] = params.str();
  j["r"] = cls.r;
  j["parity"] = to_string(cls.parity);
  j["trace_diffeo"] = cls.trace_diffeo;
  j["kb_eq_kg"] = cls.kb_eq_kg;
  j["excluded"] = excluded;
  j["alexander"] = alexander.serialize();
  j["sigma"] = sigma;
  j["det"] = det;
  j["arf"] = arf;
  j["fox_milnor"] = fox_milnor ? json(fox_milnor->serialize()) : json(nullptr);
  if (metabolizer) j["metabolizer"] = *metabolizer;
  j["hbar_n"] = hbar_n ? json(*hbar_n) : json(nullptr);
  j["crossings"] = {crossings_b, crossings_g};
  j["hash"] = {hash_b, hash_g};
  j["det_diagram"] = {det_b, det_g};
  for (auto [t, key] : {std::pair{KnotType::B, "s_b"}, std::pair{KnotType::G, "s_g"}}) {
    json m = json::object();
    for (auto& [f, v] : s_of(t)) m[to_string(f)] = svalue_json(v);
    j[key] = m;
  }
  if (!failure.empty()) j["failure"] = failure;
  return j.dump();
}

// ---- cache ----

Cache::Cache(std::string dir) {
  std::filesystem::create_directories(dir);
  path_ = (std::filesystem::path(dir) / "journal.jsonl").string();
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      auto r = sresult_from_json(j.at("value"));
      entries_[j.at("key").get<std::string>()] = r;
    } catch (const std::exception&) {
      // a torn final line from an interrupted append is skipped
    }
  }
}

std::string Cache::key(const std::string& hash, Field f) { return hash + ":s:" + to_string(f); }

std::optional<SResult> Cache::get(const std::string& hash, Field f) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key(hash, f));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Cache::put(const std::string& hash, const SResult& r) {
  std::lock_guard lock(mu_);
  auto k = key(hash, r.field);
  auto it = entries_.find(k);
  if (it != entries_.end() && it->second.status == "ok") {
    if (r.status == "ok" && it->second.s != r.s)
      throw CacheConflict("cache key " + k + " holds s=" + opt_int(it->second.s) + ", new value " + opt_int(r.s));
    return;
  }
  entries_[k] = r;
  std::ofstream out(path_, std::ios::app);
  out << json{{"key", k}, {"value", json::parse(r.to_json())}}.dump() << "\n";
  out.flush();
}

size_t Cache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

// ---- config ----

std::string PipelineConfig::str() const {
  std::ostringstream os;
  os << "grid=" << ranges.str() << "\n";
  os << "fields=";
  for (size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << to_string(fields[i]);
  os << "\n";
  os << "diagrams=" << diagrams << "\nmetabolizers=" << metabolizers << "\n";
  os << "s_fixtures=" << s_fixtures << "\nmax_s=" << max_s << "\nbatch=" << batch << "\n";
  os << "cache=" << cache_dir << "\ncrossing_cap=" << limits.crossing_cap << "\ntimeout_ms=" << limits.timeout_ms
     << "\nmax_objects=" << limits.max_objects << "\nseed=" << seed << "\n";
  return os.str();
}

// ---- fixtures ----

SMap load_s_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open s fixtures " + path);
  SMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto bar = line.find('|');
    if (bar == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected knot|s");
    out[KnotId::parse(line.substr(0, bar))] = std::stoi(line.substr(bar + 1));
  }
  return out;
}

std::string default_fixtures_path() {
  if (const char* env = std::getenv("KNOTS_S_FIXTURES")) return env;
  return std::string(KNOTS_DATA_DIR) + "/s_fixtures.txt";
}

void apply_s_fixtures(std::vector<SearchRecord>& recs, const SMap& fx) {
  for (auto& r : recs)
    for (auto t : {KnotType::B, KnotType::G}) {
      auto it = fx.find(KnotId{t, r.params});
      if (it == fx.end()) continue;
      auto& v = r.s_of(t)[Field::Q];
      SValue nv;
      nv.s = it->second;
      nv.source = "fixture";
      if (v.source == "computed" && v.s) nv.computed = v.s;
      v = nv;
    }
}

// ---- monotone fill ----

std::map<FamilyParams, int> monotone_fill(const std::map<FamilyParams, int>& known) {
  std::vector<std::pair<FamilyParams, int>> pts(known.begin(), known.end());
  for (auto& [p, sp] : pts)
    for (auto& [q, sq] : pts)
      if (leq(p, q) && sp < sq)
        throw MonotonicityError("monotonicity violated: s(" + p.str() + ") = " + std::to_string(sp) + " < s(" +
                                q.str() + ") = " + std::to_string(sq));
  auto out = known;
  if (pts.empty()) return out;
  GridRanges box;
  for (int i = 0; i < 6; ++i) {
    int lo = pts[0].first.arr()[i], hi = lo;
    for (auto& [p, s] : pts) lo = std::min(lo, p.arr()[i]), hi = std::max(hi, p.arr()[i]);
    box.r[i] = {lo, hi};
  }
  // x lies between equal values iff min over known p <= x equals max over known q >= x
  for (auto& x : box.points()) {
    if (known.count(x)) continue;
    std::optional<int> below, above;
    for (auto& [p, s] : pts) {
      if (leq(p, x)) below = below ? std::min(*below, s) : s;
      if (leq(x, p)) above = above ? std::max(*above, s) : s;
    }
    if (below && above && *below == *above) out[x] = *below;
  }
  return out;
}

int fill_records(std::vector<SearchRecord>& recs) {
  int added = 0;
  for (auto t : {KnotType::B, KnotType::G}) {
    std::map<FamilyParams, int> known;
    for (auto& r : recs)
      if (auto s = r.s(t)) known[r.params] = *s;
    auto filled = monotone_fill(known);
    for (auto& r : recs) {
      if (r.s(t)) continue;
      auto it = filled.find(r.params);
      if (it == filled.end()) continue;
      auto& v = r.s_of(t)[Field::Q];
      v.s = it->second;
      v.source = "inferred";
      ++added;
    }
  }
  return added;
}

// ---- s computation ----

void s_phase(std::vector<SearchRecord>& recs, const PipelineConfig& cfg, Cache* cache) {
  struct Job {
    size_t rec;
    KnotType type;
    KnotDiagram d;
  };
  std::vector<Job> jobs;
  for (size_t i = 0; i < recs.size(); ++i) {
    auto& r = recs[i];
    if (!r.queued() || r.sigma != 0 || !r.failure.empty()) continue;
    auto pr = gen_family_pair(r.params);
    for (auto t : {KnotType::B, KnotType::G})
      if (!r.s(t)) jobs.push_back({i, t, t == KnotType::B ? pr.kb : pr.kg});
  }
  // cheapest first: simplified crossing count, then grid order
  std::vector<int> cost(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](size_t j) {
    jobs[j].d = simplify(jobs[j].d, 200, cfg.seed);
    cost[j] = jobs[j].d.size();
  });
  std::vector<size_t> order(jobs.size());
  for (size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return cost[x] < cost[y]; });

  int done = 0;
  size_t pos = 0;
  while (done < cfg.max_s && pos < order.size()) {
    std::vector<size_t> batch;
    while (batch.size() < static_cast<size_t>(std::max(1, cfg.batch)) && pos < order.size() &&
           done + static_cast<int>(batch.size()) < cfg.max_s) {
      auto& j = jobs[order[pos++]];
      if (!recs[j.rec].s(j.type)) batch.push_back(&j - jobs.data());
    }
    std::vector<std::map<Field, SValue>> out(batch.size());
    parallel_for(batch.size(), cfg.workers, [&](size_t b) {
      auto& j = jobs[batch[b]];
      std::string hash = canonical_hash(j.d);
      for (Field f : cfg.fields) {
        std::optional<SResult> r;
        if (cache) r = cache->get(hash, f);
        if (!r || r->status != "ok") {
          r = s_invariant(j.d, f, cfg.limits);
          r->hash = hash;
          if (cache) cache->put(hash, *r);
        }
        SValue v;
        v.s = r->s;
        v.source = r->status == "ok" ? "computed" : r->status;
        v.ms = r->ms;
        out[b][f] = v;
      }
    });
    for (size_t b = 0; b < batch.size(); ++b) {
      auto& j = jobs[batch[b]];
      for (auto& [f, v] : out[b]) recs[j.rec].s_of(j.type)[f] = v;
    }
    done += static_cast<int>(batch.size());
    fill_records(recs);
  }
}

std::vector<SearchRecord> run_grid(const PipelineConfig& cfg) {
  auto pts = cfg.ranges.points();
  std::vector<SearchRecord> recs(pts.size());
  parallel_for(pts.size(), cfg.workers, [&](size_t i) {
    try {
      recs[i] = make_record(pts[i], cfg);
    } catch (const std::exception& e) {
      recs[i].params = pts[i];
      recs[i].failure = e.what();
    }
  });
  if (!cfg.s_fixtures.empty()) apply_s_fixtures(recs, load_s_fixtures(cfg.s_fixtures));
  if (cfg.max_s > 0) {
    std::unique_ptr<Cache> cache;
    if (!cfg.cache_dir.empty()) cache = std::make_unique<Cache>(cfg.cache_dir);
    s_phase(recs, cfg, cache.get());
  }
  fill_records(recs);
  return recs;
}

// ---- exclusion and filtering ----

std::string to_string(CP2Result::Verdict v) {
  switch (v) {
    case CP2Result::Verdict::NotApplicable: return "not_applicable";
    case CP2Result::Verdict::None: return "none";
    case CP2Result::Verdict::Witness: return "witness";
    case CP2Result::Verdict::Inconclusive: return "inconclusive";
  }
  return "";
}

CP2Result cp2_exclusion(const KnotId& k, const std::vector<SearchRecord>& all) {
  CP2Result res;
  auto* rec = find_record(all, k.p);
  auto s = rec ? rec->s(k.type) : std::nullopt;
  if (!s) {
    res.verdict = CP2Result::Verdict::Inconclusive;
    res.chain.push_back("s(" + k.str() + ") unknown");
    return res;
  }
  if (*s != 0) {
    res.verdict = CP2Result::Verdict::NotApplicable;
    return res;
  }
  KnotId step = k;
  step.p.a -= 1;
  if (!trace_diffeo_rule(step.p)) return res;  // the decremented pair is not trace-diffeomorphic
  KnotId partner = step.companion();
  auto* prec = find_record(all, step.p);
  auto sp = prec ? prec->s(partner.type) : std::nullopt;
  if (!sp) {
    res.verdict = CP2Result::Verdict::Inconclusive;
    res.chain.push_back("s(" + partner.str() + ") unknown");
    return res;
  }
  if (*sp >= 0) return res;
  res.verdict = CP2Result::Verdict::Witness;
  res.chain = {k.str() + " -> " + step.str() + ": a-1 changes a negative crossing to a positive one",
               step.str() + " and " + partner.str() + " have diffeomorphic traces (a+b = 0)",
               "s(" + partner.str() + ") = " + std::to_string(*sp) + " < 0"};
  return res;
}

std::optional<int> hbar_slice_certificate(const FamilyParams& p) {
  int n = p.b + p.c + p.e;
  if (n < 0) return std::nullopt;
  return n;
}

PromisingResult promising_filter(const std::vector<SearchRecord>& recs) {
  PromisingResult out;
  for (auto& r : recs) {
    if (!r.queued() || r.sigma != 0 || !r.failure.empty()) continue;
    auto sb = r.s(KnotType::B), sg = r.s(KnotType::G);
    if (!sb || !sg) {
      out.undetermined.push_back(r.params);
      continue;
    }
    for (auto t : {KnotType::B, KnotType::G}) {
      KnotId k{t, r.params};
      auto s = r.s(t), sc = r.s(k.companion().type);
      if (*s == 0 && *sc == -2) out.pre.push_back({"", k, k.companion(), 0, -2, &r});
    }
  }
  std::stable_sort(out.pre.begin(), out.pre.end(),
                   [](const PromisingPair& x, const PromisingPair& y) { return table_key(x) < table_key(y); });
  for (auto& pp : out.pre) {
    auto ex = cp2_exclusion(pp.knot, recs);
    if (ex.verdict == CP2Result::Verdict::Witness)
      out.excluded.push_back({pp, ex});
    else
      out.candidates.push_back(pp);
  }
  for (size_t i = 0; i < out.candidates.size(); ++i) out.candidates[i].name = "K" + std::to_string(i + 1);
  return out;
}

// ---- BPH ----

BPHResult bph_certify(const std::string& name, const KnotTable& table, int depth) {
  BPHResult res;
  BPHSearch search{table, Recognizer{table, {}}, {}};
  res.certificate = search.certify(name, depth);
  res.certified = res.certificate != nullptr;
  if (const TableEntry* e = table.find(name)) {
    for (int c = 0; c < e->diagram.size(); ++c) {
      auto d2 = crossing_change(e->diagram, c);
      auto fp = fingerprint(d2);
      auto id = identify(d2, table);
      std::string got;
      for (auto& cand : id.candidates) got += (got.empty() ? "" : "/") + cand.name + (cand.mirrored ? "*" : "");
      if (got.empty()) got = "?";
      if (id.candidates.size() > 1) {
        auto kh = search.recognize(d2);
        got += kh ? " (Khovanov: " + *kh + ")" : " (unresolved)";
      }
      res.evidence.push_back("crossing " + std::to_string(c) + (e->diagram.sign(c) < 0 ? " (negative)" : " (positive)") +
                             " -> " + got + " (sigma " + std::to_string(fp.signature) + ")");
    }
  }
  return res;
}

namespace {

bool replay(const BPHNode& node, const KnotTable& table, Recognizer& recognize) {
  if (!node.leaf.empty()) {
    if (node.leaf == "unknot") return node.knot == "0_1";
    auto* e = table.find(node.knot);
    return e && e->slice;
  }
  auto* e = table.find(node.knot);
  if (!e || !node.neg || !node.pos) return false;
  auto check = [&](int c, const BPHNode& child, int want_sign) {
    if (c < 0 || c >= e->diagram.size() || e->diagram.sign(c) != want_sign) return false;
    auto id = recognize(crossing_change(e->diagram, c));
    return id && *id == child.knot && replay(child, table, recognize);
  };
  return check(node.neg_crossing, *node.neg, -1) && check(node.pos_crossing, *node.pos, 1);
}

}  // namespace

bool replay_certificate(const BPHNode& node, const KnotTable& table) {
  Recognizer recognize{table, {}};
  return replay(node, table, recognize);
}

// ---- reports ----

ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::CSV;
  if (s == "md" || s == "markdown") return ReportFormat::Markdown;
  throw std::invalid_argument("unknown report format '" + s + "' (csv or md)");
}

std::vector<AnnulusCell> annulus_grid(const std::vector<int>& ms, const std::vector<int>& ks, Field f,
                                      const KhLimits& lim) {
  std::vector<AnnulusCell> out;
  for (int m : ms)
    for (int k : ks) {
      AnnulusCell c;
      c.m = m;
      c.k = k;
      auto d = gen_annulus_knot({m, k});
      c.sigma = signature(seifert_matrix(d));
      auto s = s_invariant(d, f, lim);
      c.s = s.s;
      c.status = s.status;
      out.push_back(c);
    }
  return out;
}

std::string table1_report(const PromisingResult& pr, ReportFormat fmt) {
  std::string out = fmt_header({"name", "identifier", "crossings", "alexander", "sigma", "s_Q", "s_F2", "s_F3",
                                "companion", "companion_s", "fox_milnor", "metabolizer", "parity", "hbar_n"},
                               fmt);
  for (auto& pp : pr.candidates) {
    auto& r = *pp.rec;
    std::string meta;
    if (r.fox_milnor) {
      auto m = r.metabolizer;
      if (!m) m = metabolizer_search(family_seifert_matrix(r.params), 8);
      if (m) {
        for (auto& col : *m) {
          meta += meta.empty() ? "(" : " (";
          for (int i = 0; i < 4; ++i) meta += (i ? "," : "") + std::to_string(col[i]);
          meta += ")";
        }
      } else {
        meta = "none<=8";
      }
    }
    auto& sm = r.s_of(pp.knot.type);
    out += fmt_row({pp.name, pp.knot.str(),
                    count_cell(pp.knot.type == KnotType::B ? r.crossings_b : r.crossings_g),
                    r.alexander.pretty(), std::to_string(r.sigma), s_cell(sm, Field::Q), s_cell(sm, Field::F2),
                    s_cell(sm, Field::F3), pp.companion.str(), std::to_string(pp.s_companion),
                    r.fox_milnor ? "pass" : "fail", meta, to_string(r.cls.parity),
                    r.hbar_n ? std::to_string(*r.hbar_n) : ""},
                   fmt);
  }
  return out;
}

std::string table2_report(const std::vector<AnnulusCell>& cells, ReportFormat fmt) {
  std::vector<int> ms, ks;
  for (auto& c : cells) {
    if (std::find(ms.begin(), ms.end(), c.m) == ms.end()) ms.push_back(c.m);
    if (std::find(ks.begin(), ks.end(), c.k) == ks.end()) ks.push_back(c.k);
  }
  std::vector<std::string> head{"m\\k"};
  for (int k : ks) head.push_back(std::to_string(k));
  std::string out = fmt_header(head, fmt);
  for (int m : ms) {
    std::vector<std::string> row{std::to_string(m)};
    for (int k : ks) {
      std::string cell;
      for (auto& c : cells)
        if (c.m == m && c.k == k)
          cell = "(" + std::to_string(-c.sigma) + " " + (c.s ? std::to_string(*c.s) : c.status) + ")";
      row.push_back(cell);
    }
    out += fmt_row(row, fmt);
  }
  return out;
}

std::string grid_report(const std::vector<SearchRecord>& recs, ReportFormat fmt) {
  std::string out = fmt_header({"params", "excluded", "r", "parity", "alexander", "sigma", "det", "arf", "fox_milnor",
                                "crossings_b", "crossings_g", "s_b", "s_b_source", "s_g", "s_g_source", "failure"},
                               fmt);
  auto src = [](const SearchRecord& r, KnotType t) {
    auto& m = r.s_of(t);
    auto it = m.find(Field::Q);
    return it == m.end() ? std::string() : it->second.source;
  };
  for (auto& r : recs)
    out += fmt_row({r.params.str(), r.excluded, std::to_string(r.cls.r), to_string(r.cls.parity),
                    r.alexander.pretty(), std::to_string(r.sigma), std::to_string(r.det), std::to_string(r.arf),
                    r.fox_milnor ? "pass" : "fail", count_cell(r.crossings_b), count_cell(r.crossings_g),
                    opt_int(r.s(KnotType::B)), src(r, KnotType::B), opt_int(r.s(KnotType::G)), src(r, KnotType::G),
                    r.failure},
                   fmt);
  return out;
}

std::vector<std::string> emit_report(const std::vector<SearchRecord>& recs, const std::vector<AnnulusCell>& cells,
                                     ReportFormat fmt, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::string ext = fmt == ReportFormat::CSV ? ".csv" : ".md";
  std::vector<std::pair<std::string, std::string>> files{{"table1" + ext, table1_report(promising_filter(recs), fmt)},
                                                         {"grid" + ext, grid_report(recs, fmt)}};
  if (!cells.empty()) files.push_back({"table2" + ext, table2_report(cells, fmt)});
  std::vector<std::string> paths;
  for (auto& [name, body] : files) {
    auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << body;
    if (!out) throw std::runtime_error("cannot write " + path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace knots
