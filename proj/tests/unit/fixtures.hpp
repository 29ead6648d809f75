#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "knots/diagram.hpp"
#include "knots/laurent.hpp"

namespace fixtures {

struct TableKnot {
  std::string name;
  knots::KnotDiagram pd;
  knots::LaurentPoly alexander;
  int signature = 0;
  long long det = 0;
  int s = 0;
  std::map<std::pair<int, int>, int> kh;  // free part, (h, q) -> rank
  int four_genus = 0;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, sep)) out.push_back(tok);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

inline const std::vector<TableKnot>& knotinfo() {
  static const std::vector<TableKnot> table = [] {
    std::vector<TableKnot> out;
    std::ifstream in(std::string(KNOTS_TEST_DATA) + "/knotinfo.txt");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto f = split(line, '|');
      TableKnot k;
      k.name = f[0];
      k.pd = knots::parse_pd(f[1]);
      k.alexander = knots::LaurentPoly::parse(f[2]).normalized();
      k.signature = std::stoi(f[3]);
      k.det = std::stoll(f[4]);
      k.s = std::stoi(f[5]);
      for (auto& e : split(f[6], ';')) {
        auto v = split(e, ',');
        if (v.size() == 3) k.kh[{std::stoi(v[0]), std::stoi(v[1])}] = std::stoi(v[2]);
      }
      k.four_genus = std::stoi(f[7]);
      out.push_back(std::move(k));
    }
    return out;
  }();
  return table;
}

inline const TableKnot& knot(const std::string& name) {
  for (auto& k : knotinfo())
    if (k.name == name) return k;
  throw std::runtime_error("no fixture knot " + name);
}

}  // namespace fixtures
