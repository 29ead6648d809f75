#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knots/diagram.hpp"

namespace knots {

enum class Field { Q, F2, F3 };
std::string to_string(Field f);
Field parse_field(const std::string& s);

enum class Deformation { Lee, BarNatan };

// Lee (X^2 = 1) in characteristic 0 and 3, Bar-Natan (X^2 = X) in characteristic 2.
struct FrobeniusSpec {
  Field field = Field::Q;
  Deformation deformation = Deformation::Lee;
  static FrobeniusSpec for_field(Field f);
};

struct KhLimits {
  int crossing_cap = 45;          // applied after simplification
  long long timeout_ms = 0;       // 0: no limit
  size_t max_objects = 4000000;   // generators alive at any stage
};

struct KhTimeout : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (homological degree, quantum degree) -> dimension.
using KhTable = std::map<std::pair<int, int>, long long>;

// Khovanov homology over the field. Throws KhTimeout when a limit is hit.
KhTable khovanov_homology(const KnotDiagram& d, Field f, const KhLimits& lim = {});

// Quantum degrees of the free generators of the deformed homology (the filtration
// levels of the Lee/Bar-Natan classes), sorted, with their homological degree 0.
std::vector<int> lee_homology(const KnotDiagram& d, const FrobeniusSpec& spec, const KhLimits& lim = {});

struct SResult {
  std::optional<int> s;    // empty on timeout
  Field field = Field::Q;
  int girth = 0;
  long long ms = 0;
  std::string hash;
  std::string status = "ok";  // ok | timeout | crossing_cap | memory
  std::string to_json() const;
};

SResult s_invariant(const KnotDiagram& d, const FrobeniusSpec& spec, const KhLimits& lim = {});
inline SResult s_invariant(const KnotDiagram& d, Field f, const KhLimits& lim = {}) {
  return s_invariant(d, FrobeniusSpec::for_field(f), lim);
}

// Both outputs of one scan: the Khovanov table and the free generator degrees.
struct KhResult {
  KhTable table;
  std::vector<std::pair<int, int>> free;  // (h, q) of free generators
  int girth = 0;
};
KhResult khovanov_scan(const KnotDiagram& d, const FrobeniusSpec& spec, const KhLimits& lim = {});

}  // namespace knots
