#pragma once

#include <array>
#include <optional>
#include <string>

#include "knots/diagram.hpp"
#include "knots/invariants.hpp"

namespace knots {

struct Framing {
  long long num = 0, den = 1;
  bool integral() const { return den == 1 || num % den == 0; }
  long long value() const { return num / den; }
  static Framing parse(const std::string& s);
  std::string str() const;
  bool operator==(const Framing&) const = default;
};

// Three framed components R, B, G of one link diagram.
struct RBGLink {
  KnotDiagram diagram;
  std::array<int, 3> component{0, 1, 2};  // component index (as in components()) of R, B, G
  std::array<Framing, 3> framing;         // r, b, g
  bool special = false;                   // asserted by the constructor, not verified
  bool small = false;

  IntMatrix linking_matrix() const;  // requires integral framings
  std::string to_json() const;
  static RBGLink from_json(const std::string& text);
};

struct UnsupportedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Smith normal form diagonal of an integer matrix (nonnegative entries, each dividing the next).
std::vector<long long> smith_diagonal(IntMatrix M);

bool h1_check(const RBGLink& link);
long long special_framing_det(long long r, long long l);

enum class Parity { Even, Odd };
std::string to_string(Parity p);

struct PairRecord {
  FamilyParams params;
  long long r = 0;
  Parity parity = Parity::Even;
  bool property_u = false;
  bool kb_eq_kg = false;
  bool trace_diffeo = false;
};

Parity parity(const PairRecord& rec);
bool property_u(const PairRecord& rec, bool r_is_unknot);
bool kb_equals_kg_rule(const FamilyParams& p);
bool trace_diffeo_rule(const FamilyParams& p);
// Classification record of a family grid point.
PairRecord classify_pair(const FamilyParams& p);

struct ConsistencyCheck {
  bool pass = true;
  std::string message;
};
ConsistencyCheck odd_arf_consistency(const PairRecord& rec, int arf_b, int arf_g);

}  // namespace knots
