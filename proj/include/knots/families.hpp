#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knots/diagram.hpp"
#include "knots/invariants.hpp"
#include "knots/rbg.hpp"

namespace knots {

struct AnnulusParams {
  int m = 1, k = 0, n = 0;
  static AnnulusParams parse(const std::string& s);  // "m,k" or "m,k,n"
  std::string str() const;
};

struct FamilyPair {
  KnotDiagram kb, kg;
};

FamilyPair gen_family_pair(const FamilyParams& p);
RBGLink gen_family_rbg(const FamilyParams& p);
KnotDiagram gen_annulus_knot(const AnnulusParams& q);
KnotDiagram gen_annulus_twist(const AnnulusParams& q);
// Dispatches on q.n.
KnotDiagram gen_annulus(const AnnulusParams& q);
bool ribbon_flag(const AnnulusParams& q);

struct TableEntry {
  std::string name;
  DTCode dt;
  KnotDiagram diagram;
  LaurentPoly alexander;
  int signature = 0;
  long long det = 1;
  bool slice = false;
  bool ambiguous = false;  // another entry shares the fingerprint up to mirror
};

struct KnotTable {
  std::vector<TableEntry> entries;
  const TableEntry* find(const std::string& name) const;
};

struct TableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses `name|dt|alexander|signature|det|slice` lines; recomputes the fingerprint
// from the DT code and rejects mismatches.
KnotTable load_knot_table(const std::string& path);
KnotTable parse_knot_table(const std::string& text);
std::string default_table_path();

struct Candidate {
  std::string name;  // "0_1" for the unknot
  bool mirrored = false;
};
struct Identification {
  std::vector<Candidate> candidates;
  bool ambiguous = false;
};
// Fingerprint (Delta, sigma, det) lookup, up to mirror image. The unknot is built in.
Identification identify(const KnotDiagram& d, const KnotTable& table);
Identification identify_fingerprint(const Fingerprint& f, const KnotTable& table);

}  // namespace knots
