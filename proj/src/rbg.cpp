#include "knots/rbg.hpp"

#include <nlohmann/json.hpp>
#include <numeric>

namespace knots {

Framing Framing::parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return {std::stoll(s), 1};
  Framing f{std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
  if (f.den == 0) throw std::invalid_argument("zero denominator in framing " + s);
  return f;
}

std::string Framing::str() const {
  if (integral()) return std::to_string(value());
  return std::to_string(num) + "/" + std::to_string(den);
}

IntMatrix RBGLink::linking_matrix() const {
  for (auto& f : framing)
    if (!f.integral()) throw UnsupportedInput("rational framings are not supported by the homology check");
  IntMatrix M(3, std::vector<long long>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      M[i][j] = i == j ? framing[i].value() : linking_number(diagram, component[i], component[j]);
  return M;
}

std::string RBGLink::to_json() const {
  nlohmann::json j;
  j["pd"] = format_pd(diagram);
  j["free_loops"] = diagram.free_loops;
  j["components"] = {{"R", component[0]}, {"B", component[1]}, {"G", component[2]}};
  j["framings"] = {{"r", framing[0].str()}, {"b", framing[1].str()}, {"g", framing[2].str()}};
  j["special"] = special;
  j["small"] = small;
  return j.dump();
}

RBGLink RBGLink::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  RBGLink L;
  L.diagram = parse_pd(j.at("pd").get<std::string>());
  L.diagram.free_loops = j.value("free_loops", L.diagram.free_loops);
  auto& c = j.at("components");
  L.component = {c.at("R").get<int>(), c.at("B").get<int>(), c.at("G").get<int>()};
  auto& f = j.at("framings");
  auto fr = [&](const char* k) {
    auto& v = f.at(k);
    return v.is_string() ? Framing::parse(v.get<std::string>()) : Framing{v.get<long long>(), 1};
  };
  L.framing = {fr("r"), fr("b"), fr("g")};
  L.special = j.value("special", false);
  L.small = j.value("small", false);
  int nc = num_components(L.diagram);
  for (int id : L.component)
    if (id < 0 || id >= nc) throw std::invalid_argument("component index out of range");
  return L;
}

std::vector<long long> smith_diagonal(IntMatrix M) {
  size_t rows = M.size(), cols = rows ? M[0].size() : 0;
  std::vector<long long> diag;
  for (size_t t = 0; t < std::min(rows, cols); ++t) {
    // pivot: smallest nonzero absolute value in the remaining block
    while (true) {
      size_t pi = rows, pj = cols;
      for (size_t i = t; i < rows; ++i)
        for (size_t j = t; j < cols; ++j)
          if (M[i][j] && (pi == rows || std::llabs(M[i][j]) < std::llabs(M[pi][pj]))) pi = i, pj = j;
      if (pi == rows) {
        while (diag.size() < std::min(rows, cols)) diag.push_back(0);
        return diag;
      }
      std::swap(M[t], M[pi]);
      for (auto& r : M) std::swap(r[t], r[pj]);
      bool clean = true;
      for (size_t i = t + 1; i < rows; ++i) {
        long long q = M[i][t] / M[t][t];
        for (size_t j = t; j < cols; ++j) M[i][j] -= q * M[t][j];
        clean &= M[i][t] == 0;
      }
      for (size_t j = t + 1; j < cols; ++j) {
        long long q = M[t][j] / M[t][t];
        for (size_t i = t; i < rows; ++i) M[i][j] -= q * M[i][t];
        clean &= M[t][j] == 0;
      }
      if (!clean) continue;
      // divisibility: fold in any entry not divisible by the pivot
      bool divides = true;
      for (size_t i = t + 1; i < rows && divides; ++i)
        for (size_t j = t + 1; j < cols && divides; ++j)
          if (M[i][j] % M[t][t]) {
            for (size_t k = t; k < cols; ++k) M[t][k] += M[i][k];
            divides = false;
          }
      if (divides) break;
    }
    diag.push_back(std::llabs(M[t][t]));
  }
  return diag;
}

bool h1_check(const RBGLink& link) {
  auto d = smith_diagonal(link.linking_matrix());
  return d == std::vector<long long>{1, 1, 0};
}

long long special_framing_det(long long r, long long l) { return 2 * l - r * l * l; }

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

Parity parity(const PairRecord& rec) { return rec.r % 2 == 0 ? Parity::Even : Parity::Odd; }

bool property_u(const PairRecord& rec, bool r_is_unknot) { return r_is_unknot && rec.r == 0; }

bool kb_equals_kg_rule(const FamilyParams& p) { return p.b == -1; }

bool trace_diffeo_rule(const FamilyParams& p) { return p.a + p.b == 0; }

PairRecord classify_pair(const FamilyParams& p) {
  PairRecord rec;
  rec.params = p;
  rec.r = p.a + p.b;
  rec.parity = parity(rec);
  rec.property_u = property_u(rec, true);
  rec.kb_eq_kg = kb_equals_kg_rule(p);
  rec.trace_diffeo = rec.property_u || trace_diffeo_rule(p);
  return rec;
}

ConsistencyCheck odd_arf_consistency(const PairRecord& rec, int arf_b, int arf_g) {
  if (rec.parity == Parity::Odd && (arf_b != 0 || arf_g != 0))
    return {false, "odd pair " + rec.params.str() + " has Arf (" + std::to_string(arf_b) + "," +
                       std::to_string(arf_g) + ")"};
  return {true, ""};
}

}  // namespace knots
