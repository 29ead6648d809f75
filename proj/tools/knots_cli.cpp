#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "knots/families.hpp"
#include "knots/khovanov.hpp"
#include "knots/pipeline.hpp"
#include "knots/rbg.hpp"

using namespace knots;
using json = nlohmann::json;

namespace {

constexpr const char* kCacheEnv = "KNOTS_CACHE_DIR";

// Errors carry a machine-readable kind: "error[kind]: message" on stderr.
struct CliError : std::runtime_error {
  std::string kind;
  int code;
  CliError(std::string k, const std::string& msg, int c = 1) : std::runtime_error(msg), kind(std::move(k)), code(c) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("io", "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// PD text, "@file", "-" for stdin, or the path of an existing file.
KnotDiagram load_pd(const std::string& arg) {
  std::string text;
  if (arg == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    text = os.str();
  } else if (arg.starts_with("@")) {
    text = read_file(arg.substr(1));
  } else if (std::filesystem::is_regular_file(arg)) {
    text = read_file(arg);
  } else {
    text = arg;
  }
  return parse_pd(text);
}

KnotType parse_type(const std::string& s) {
  if (s == "B" || s == "b") return KnotType::B;
  if (s == "G" || s == "g") return KnotType::G;
  throw CliError("usage", "knot type must be B or G, got '" + s + "'");
}

// One knot named by --pd, --params/--type or --annulus.
struct KnotSource {
  std::string pd, params, type = "B", annulus;

  void add(CLI::App* sub) {
    sub->add_option("--pd", pd, "PD code: text, @file, file path or - for stdin");
    sub->add_option("--params", params, "family parameters a,b,c,d,e,f");
    sub->add_option("--type", type, "family knot type B or G")->check(CLI::IsMember({"B", "G", "b", "g"}));
    sub->add_option("--annulus", annulus, "annulus knot m,k or annulus twist m,k,n");
  }
  int given() const { return !pd.empty() + !params.empty() + !annulus.empty(); }
  KnotDiagram diagram() const {
    if (given() != 1) throw CliError("usage", "give exactly one of --pd, --params, --annulus");
    if (!pd.empty()) return load_pd(pd);
    if (!annulus.empty()) return gen_annulus(AnnulusParams::parse(annulus));
    auto pr = gen_family_pair(FamilyParams::parse(params));
    return parse_type(type) == KnotType::B ? pr.kb : pr.kg;
  }
};

std::vector<Field> parse_fields(const std::string& s) {
  std::vector<Field> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ','))
    if (!tok.empty()) out.push_back(parse_field(tok));
  if (out.empty()) throw CliError("usage", "empty field list");
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stoi(tok));
      continue;
    }
    int lo = std::stoi(tok.substr(0, dots)), hi = std::stoi(tok.substr(dots + 2));
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

// Pipeline options. Keys match PipelineConfig::str(), so a written config reads back.
// Precedence: flag, then the cache environment variable, then --config, then defaults.
struct PipelineOptions {
  std::map<std::string, std::string> value{{"grid", ""},
                                           {"fields", "Q"},
                                           {"diagrams", "1"},
                                           {"metabolizers", "1"},
                                           {"s_fixtures", default_fixtures_path()},
                                           {"max_s", "0"},
                                           {"batch", "16"},
                                           {"cache", ""},
                                           {"crossing_cap", "45"},
                                           {"timeout_ms", "0"},
                                           {"max_objects", "4000000"},
                                           {"seed", "1"},
                                           {"workers", "0"}};
  std::map<std::string, CLI::Option*> opt;
  std::string config;

  void add(CLI::App* sub) {
    const std::map<std::string, std::string> help{
        {"grid", "parameter ranges, e.g. a=-2..2,b=-1..1 (unnamed keep the full grid)"},
        {"fields", "s fields, comma separated: Q,F2,F3"},
        {"diagrams", "generate diagrams for crossing counts and hashes (0/1)"},
        {"metabolizers", "search metabolizers where Fox-Milnor passes (0/1)"},
        {"s_fixtures", "file of K_X(params)|s values; empty or 'none' disables"},
        {"max_s", "number of knots whose s is computed directly"},
        {"batch", "s computations between monotone fill passes"},
        {"cache", std::string("cache directory (overridden by ") + kCacheEnv + ")"},
        {"crossing_cap", "crossing cap after simplification"},
        {"timeout_ms", "per-knot s timeout in ms, 0 for none"},
        {"max_objects", "generator budget of the s engine"},
        {"seed", "simplification seed"},
        {"workers", "worker threads, 0 for all cores"}};
    for (auto& [key, v] : value) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      opt[key] = sub->add_option(flag, v, help.at(key));
    }
    sub->add_option("--config", config, "key=value file with the keys above");
  }

  PipelineConfig resolve() {
    if (!config.empty()) {
      std::istringstream is(read_file(config));
      std::string line;
      int no = 0;
      while (std::getline(is, line)) {
        ++no;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
          throw CliError("config", config + ":" + std::to_string(no) + ": expected key=value");
        auto key = line.substr(0, eq);
        if (key == "format") continue;
        if (!value.count(key)) throw CliError("config", config + ":" + std::to_string(no) + ": unknown key '" + key + "'");
        if (!opt[key]->count()) value[key] = line.substr(eq + 1);
      }
    }
    if (const char* env = std::getenv(kCacheEnv); env && !opt["cache"]->count()) value["cache"] = env;

    PipelineConfig cfg;
    try {
      if (!value["grid"].empty()) cfg.ranges = GridRanges::parse(value["grid"]);
      cfg.fields = parse_fields(value["fields"]);
      cfg.diagrams = std::stoi(value["diagrams"]) != 0;
      cfg.metabolizers = std::stoi(value["metabolizers"]) != 0;
      cfg.s_fixtures = value["s_fixtures"] == "none" ? "" : value["s_fixtures"];
      cfg.max_s = std::stoi(value["max_s"]);
      cfg.batch = std::max(1, std::stoi(value["batch"]));
      cfg.cache_dir = value["cache"];
      cfg.limits.crossing_cap = std::stoi(value["crossing_cap"]);
      cfg.limits.timeout_ms = std::stoll(value["timeout_ms"]);
      cfg.limits.max_objects = std::stoull(value["max_objects"]);
      cfg.seed = std::stoull(value["seed"]);
      cfg.workers = std::stoi(value["workers"]);
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError("config", e.what());
    }
    return cfg;
  }
};

bool s_failed(const SValue& v) { return !v.s && v.source != "inferred"; }

int count_failures(const std::vector<SearchRecord>& recs) {
  int n = 0;
  for (auto& r : recs) {
    bool bad = !r.failure.empty();
    for (auto t : {KnotType::B, KnotType::G})
      for (auto& [f, v] : r.s_of(t)) bad |= s_failed(v);
    n += bad;
  }
  return n;
}

json summary(const std::vector<SearchRecord>& recs) {
  auto pr = promising_filter(recs);
  int surviving = 0, sigma0 = 0;
  for (auto& r : recs) {
    surviving += r.queued();
    sigma0 += r.queued() && r.sigma == 0;
  }
  json j;
  j["total"] = recs.size();
  j["surviving"] = surviving;
  j["sigma_zero"] = sigma0;
  j["promising"] = pr.pre.size();
  j["candidates"] = pr.candidates.size();
  for (auto& [pp, cp] : pr.excluded) j["cp2_excluded"].push_back(pp.knot.str());
  j["undetermined"] = pr.undetermined.size();
  j["failures"] = count_failures(recs);
  return j;
}

int run_search(PipelineOptions& po, const std::string& out_dir) {
  auto cfg = po.resolve();
  std::cerr << "info: grid " << cfg.ranges.str() << " (" << cfg.ranges.size() << " points)\n";
  auto recs = run_grid(cfg);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream rec_out(std::filesystem::path(out_dir) / "records.jsonl");
    for (auto& r : recs) rec_out << r.to_json() << "\n";
    std::ofstream(std::filesystem::path(out_dir) / "config.txt") << cfg.str();
  }
  auto j = summary(recs);
  std::cout << j.dump() << "\n";
  return j["failures"].get<int>() > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knots: family generation, slice obstructions and the candidate search"};
  app.require_subcommand(1);

  // family
  auto* family = app.add_subcommand("family", "print the PD code of a family or annulus knot");
  std::string fam_params, fam_annulus, fam_type = "B";
  bool fam_rbg = false;
  family->add_option("--params", fam_params, "family parameters a,b,c,d,e,f");
  family->add_option("--type", fam_type, "B or G")->check(CLI::IsMember({"B", "G", "b", "g"}));
  family->add_option("--annulus", fam_annulus, "annulus knot m,k or twist m,k,n");
  family->add_flag("--rbg", fam_rbg, "print the family RBG link as JSON instead");

  // annulus
  auto* annulus = app.add_subcommand("annulus", "sigma and s over an annulus knot grid (Table 2 layout)");
  std::string ann_m = "-5,-3,-1,1,3,5,7", ann_k = "-2..3", ann_field = "Q", ann_format = "md";
  KhLimits ann_lim;
  annulus->add_option("--m", ann_m, "odd m values, list or lo..hi");
  annulus->add_option("--k", ann_k, "k values, list or lo..hi");
  annulus->add_option("--field", ann_field, "Q, F2 or F3");
  annulus->add_option("--format", ann_format, "csv or md");
  annulus->add_option("--timeout-ms", ann_lim.timeout_ms, "per-knot timeout in ms");
  annulus->add_option("--crossing-cap", ann_lim.crossing_cap, "crossing cap after simplification");

  // invariants
  auto* invariants = app.add_subcommand("invariants", "Alexander polynomial, signature, determinant, Arf");
  KnotSource inv_src;
  bool inv_json = false, inv_diagram = false;
  inv_src.add(invariants);
  invariants->add_flag("--diagram", inv_diagram, "with --params: use the generated diagram, not the family matrix");
  invariants->add_flag("--json", inv_json, "JSON output");

  // s
  auto* s_cmd = app.add_subcommand("s", "s-invariant as JSON, one line per field");
  KnotSource s_src;
  std::string s_fields = "Q";
  KhLimits s_lim;
  s_src.add(s_cmd);
  s_cmd->add_option("--field", s_fields, "Q, F2, F3 or a comma separated list");
  s_cmd->add_option("--timeout-ms", s_lim.timeout_ms, "timeout in ms, 0 for none");
  s_cmd->add_option("--crossing-cap", s_lim.crossing_cap, "crossing cap after simplification");
  s_cmd->add_option("--max-objects", s_lim.max_objects, "generator budget");

  // rbg check
  auto* rbg = app.add_subcommand("rbg", "RBG link checks");
  rbg->require_subcommand(1);
  auto* rbg_check = rbg->add_subcommand("check", "print H_1, parity and property U verdicts of an RBG link JSON file");
  std::string rbg_file;
  rbg_check->add_option("file", rbg_file, "RBG link JSON")->required();

  // search
  auto* search = app.add_subcommand("search", "run the grid search and print a JSON summary");
  PipelineOptions search_opts;
  std::string search_out;
  search_opts.add(search);
  search->add_option("--out", search_out, "write records.jsonl and config.txt here");

  // bph
  auto* bph = app.add_subcommand("bph", "crossing-change certificates for knots in the table");
  std::string bph_table;
  int bph_depth = 3;
  std::vector<std::string> bph_knots;
  bph->add_option("--table", bph_table, "knot table file (default: bundled table)");
  bph->add_option("--depth", bph_depth, "recursion depth");
  bph->add_option("knots", bph_knots, "knot names (default: every signature-zero table entry)");

  // report
  auto* report = app.add_subcommand("report", "write Table 1, grid and (optionally) Table 2 reports");
  PipelineOptions report_opts;
  std::string rep_format = "csv", rep_out = "report";
  bool rep_table2 = false;
  report_opts.add(report);
  report->add_option("--format", rep_format, "csv or md");
  report->add_option("--out", rep_out, "output directory");
  report->add_flag("--table2", rep_table2, "also compute the annulus grid over Q");

  // identify
  auto* identify_cmd = app.add_subcommand("identify", "fingerprint lookup in the knot table");
  KnotSource id_src;
  std::string id_table;
  id_src.add(identify_cmd);
  identify_cmd->add_option("--table", id_table, "knot table file (default: bundled table)");

  if (argc <= 1) {
    std::cerr << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (*family) {
      if (fam_params.empty() == fam_annulus.empty()) throw CliError("usage", "give exactly one of --params, --annulus");
      if (!fam_annulus.empty()) {
        std::cout << format_pd(gen_annulus(AnnulusParams::parse(fam_annulus))) << "\n";
      } else if (fam_rbg) {
        std::cout << gen_family_rbg(FamilyParams::parse(fam_params)).to_json() << "\n";
      } else {
        auto pr = gen_family_pair(FamilyParams::parse(fam_params));
        std::cout << format_pd(parse_type(fam_type) == KnotType::B ? pr.kb : pr.kg) << "\n";
      }
      return 0;
    }

    if (*annulus) {
      auto ms = parse_ints(ann_m), ks = parse_ints(ann_k);
      for (int m : ms)
        if (m % 2 == 0) throw CliError("usage", "m must be odd, got " + std::to_string(m));
      auto cells = annulus_grid(ms, ks, parse_field(ann_field), ann_lim);
      std::cout << table2_report(cells, parse_format(ann_format));
      for (auto& c : cells)
        if (!c.s) return 2;
      return 0;
    }

    if (*invariants) {
      SeifertMatrix A;
      if (!inv_src.params.empty() && !inv_diagram && inv_src.given() == 1)
        A = family_seifert_matrix(FamilyParams::parse(inv_src.params));
      else
        A = seifert_matrix(inv_src.diagram());
      auto delta = alexander(A);
      int sigma = signature(A);
      long long det = determinant_inv(A);
      auto fm = fox_milnor(delta);
      if (inv_json) {
        json j{{"alexander", delta.pretty()}, {"signature", sigma}, {"det", det}, {"arf", arf(A)},
               {"fox_milnor", fm ? json(fm->pretty()) : json(nullptr)}};
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "Delta = " << delta.pretty() << "\nsigma = " << sigma << "\ndet = " << det << "\narf = " << arf(A)
                  << "\nfox_milnor = " << (fm ? "pass (f = " + fm->pretty() + ")" : std::string("fail")) << "\n";
      }
      return 0;
    }

    if (*s_cmd) {
      auto d = s_src.diagram();
      int rc = 0;
      for (Field f : parse_fields(s_fields)) {
        auto r = s_invariant(d, f, s_lim);
        std::cout << r.to_json() << "\n";
        if (r.status != "ok") rc = 2;
      }
      return rc;
    }

    if (*rbg_check) {
      RBGLink L;
      try {
        L = RBGLink::from_json(read_file(rbg_file));
      } catch (const CliError&) {
        throw;
      } catch (const std::exception& e) {
        throw CliError("input", rbg_file + ": " + e.what());
      }
      bool h1 = h1_check(L);
      PairRecord rec;
      rec.r = L.framing[0].value();
      rec.parity = parity(rec);
      auto R = sublink(L.diagram, {L.component[0]});
      auto table = load_knot_table(default_table_path());
      auto id = identify(R, table);
      bool r_unknot = id.candidates.size() == 1 && id.candidates[0].name == "0_1";
      json j{{"h1_is_Z", h1},
             {"r", rec.r},
             {"parity", to_string(rec.parity)},
             {"r_unknot_fingerprint", r_unknot},
             {"property_u", property_u(rec, r_unknot)},
             {"special", L.special}};
      std::cout << j.dump() << "\n";
      return 0;
    }

    if (*search) return run_search(search_opts, search_out);

    if (*bph) {
      auto table = load_knot_table(bph_table.empty() ? default_table_path() : bph_table);
      if (bph_knots.empty())
        for (auto& e : table.entries)
          if (e.signature == 0) bph_knots.push_back(e.name);
      for (auto& name : bph_knots) {
        if (!table.find(name)) throw CliError("input", "unknown knot " + name);
        auto r = bph_certify(name, table, bph_depth);
        json j{{"knot", name}, {"certified", r.certified}, {"evidence", r.evidence}};
        if (r.certificate) {
          std::function<json(const BPHNode&)> node = [&](const BPHNode& n) {
            json o{{"knot", n.knot}};
            if (!n.leaf.empty()) return o["leaf"] = n.leaf, o;
            o["neg_crossing"] = n.neg_crossing;
            o["pos_crossing"] = n.pos_crossing;
            o["neg"] = node(*n.neg);
            o["pos"] = node(*n.pos);
            return o;
          };
          j["certificate"] = node(*r.certificate);
        }
        std::cout << j.dump() << "\n";
      }
      return 0;
    }

    if (*report) {
      auto fmt = parse_format(rep_format);
      auto cfg = report_opts.resolve();
      auto recs = run_grid(cfg);
      std::vector<AnnulusCell> cells;
      if (rep_table2) cells = annulus_grid({-5, -3, -1, 1, 3, 5, 7}, {-2, -1, 0, 1, 2, 3}, Field::Q, cfg.limits);
      auto paths = emit_report(recs, cells, fmt, rep_out);
      auto cfg_path = (std::filesystem::path(rep_out) / "config.txt").string();
      std::ofstream(cfg_path) << cfg.str() << "format=" << rep_format << "\n";
      paths.push_back(cfg_path);
      for (auto& p : paths) std::cout << p << "\n";
      return count_failures(recs) > 0 ? 2 : 0;
    }

    if (*identify_cmd) {
      auto table = load_knot_table(id_table.empty() ? default_table_path() : id_table);
      auto d = id_src.diagram();
      auto fp = fingerprint(d);
      auto id = identify(d, table);
      json names = json::array();
      for (auto& c : id.candidates) names.push_back(c.name + (c.mirrored ? "*" : ""));
      json j{{"alexander", fp.alexander.pretty()},
             {"signature", fp.signature},
             {"det", fp.det},
             {"candidates", names},
             {"ambiguous", id.ambiguous}};
      std::cout << j.dump() << "\n";
      return 0;
    }
  } catch (const CliError& e) {
    std::cerr << "error[" << e.kind << "]: " << e.what() << "\n";
    return e.code;
  } catch (const UnsupportedInput& e) {
    std::cerr << "error[unsupported]: " << e.what() << "\n";
    return 1;
  } catch (const TableError& e) {
    std::cerr << "error[table]: " << e.what() << "\n";
    return 1;
  } catch (const DiagramError& e) {
    std::cerr << "error[diagram]: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error[input]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[fatal]: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
