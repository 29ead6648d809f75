#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace knots {

// PD tuple: arc labels counterclockwise starting at the incoming under-strand.
using Tuple = std::array<int, 4>;

struct DiagramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KnotDiagram {
  std::vector<Tuple> x;
  // Slot (1 or 3) through which the over-strand enters; positive iff 3.
  std::vector<int8_t> over_in;
  // Crossingless unknotted components not visible in the PD tuples.
  int free_loops = 0;

  int size() const { return static_cast<int>(x.size()); }
  int sign(int c) const { return over_in[c] == 3 ? 1 : -1; }
  int over_out(int c) const { return over_in[c] == 3 ? 1 : 3; }
  bool operator==(const KnotDiagram&) const = default;
};

// Slot position of an arc end.
struct Slot {
  int c, s;
  bool operator==(const Slot&) const = default;
};

struct ArcInfo {
  Slot head, tail;  // head: where the arc enters a crossing
};

// Builds a diagram from raw tuples, inferring over-strand directions by
// propagating along components; components that never pass under fall back
// to the consecutive-label rule.
KnotDiagram from_pd(const std::vector<Tuple>& tuples);
KnotDiagram parse_pd(const std::string& text);
std::string format_pd(const KnotDiagram& d);

// Arc label -> (head, tail). Throws on malformed codes.
std::vector<ArcInfo> arc_table(const KnotDiagram& d, int* max_label = nullptr);
int max_label(const KnotDiagram& d);

// Components as ordered arc-label lists (following orientation).
std::vector<std::vector<int>> components(const KnotDiagram& d);
int num_components(const KnotDiagram& d);
// Component id of each crossing's under and over strand.
std::vector<std::array<int, 2>> crossing_components(const KnotDiagram& d);

// Relabels arcs 1..2n consecutively along components.
KnotDiagram normalize_labels(const KnotDiagram& d);
// The components listed (indices as in components()), other strands deleted.
KnotDiagram sublink(const KnotDiagram& d, const std::vector<int>& keep);

KnotDiagram mirror(const KnotDiagram& d);
KnotDiagram crossing_change(const KnotDiagram& d, int idx);
int writhe(const KnotDiagram& d);
int linking_number(const KnotDiagram& d, int i, int j);

// Faces traced as half-edge cycles; each entry is the slot an edge leaves from.
std::vector<std::vector<Slot>> faces(const KnotDiagram& d);
bool is_planar(const KnotDiagram& d);

// Gauss code: signed crossing visits along the knot (+ over, - under), 1-based.
std::vector<int> gauss_code(const KnotDiagram& d);

// DT codes: pairs (odd, even); even entry negated when the even-labelled
// passage is an over-crossing.
using DTCode = std::vector<int>;
KnotDiagram pd_from_dt(const DTCode& dt);
DTCode dt_from_pd(const KnotDiagram& d);
DTCode parse_dt(const std::string& text);
std::string format_dt(const DTCode& dt);

// Integer Seifert matrix from a braided Seifert surface (Vogel moves).
using IntMatrix = std::vector<std::vector<long long>>;
// Seifert matrix of the braid-form Seifert surface; with `reduce`, trivial summands are
// split off by S-equivalence until the matrix is nonsingular or no unimodular reduction applies.
IntMatrix seifert_matrix(const KnotDiagram& d, bool reduce = true);
IntMatrix reduce_seifert_matrix(const IntMatrix& V);

// Braid word of a braided form of the diagram (signed 1-based generators).
struct Braid {
  int strands = 1;
  std::vector<int> word;
};
Braid braid_form(const KnotDiagram& d);
IntMatrix braid_seifert_matrix(const Braid& b);
int seifert_circle_count(const KnotDiagram& d);
int vogel_defects(const KnotDiagram& d);
KnotDiagram vogel_braid(const KnotDiagram& d, int max_moves = 10000);

// Reidemeister moves used by simplify and the randomized property tests.
bool reduce_r1(KnotDiagram& d);
bool reduce_r2(KnotDiagram& d);
std::vector<std::array<int, 3>> r3_triangles(const KnotDiagram& d);
bool apply_r3(KnotDiagram& d, const std::array<int, 3>& tri);
KnotDiagram add_r1(const KnotDiagram& d, int arc, bool positive, bool left);
KnotDiagram add_r2(const KnotDiagram& d, int face_idx, int e1, int e2, bool first_over);
KnotDiagram simplify(const KnotDiagram& d, int budget = 200, uint64_t seed = 1);

std::string canonical_hash(const KnotDiagram& d);

struct GirthOrder {
  std::vector<int> order;
  int girth = 0;
};
int order_girth(const KnotDiagram& d, const std::vector<int>& order);
GirthOrder girth_order(const KnotDiagram& d);

// Morse-style builder: strands at positions, cups/caps/crossings added from
// the bottom up. x(i, slash_over) crosses strands i and i+1; the strand going
// from bottom-left to top-right is over iff slash_over.
class MorseBuilder {
 public:
  MorseBuilder& cup(int i);
  MorseBuilder& cap(int i);
  MorseBuilder& x(int i, bool slash_over);
  int width() const { return static_cast<int>(pos_.size()); }
  // Closes the diagram; requires width()==0.
  KnotDiagram build(std::vector<std::vector<int>>* comps = nullptr) const;

 private:
  int fresh();
  int find(int s) const;
  std::vector<int> pos_;
  mutable std::vector<int> parent_;
  std::vector<std::array<int, 4>> cross_;  // BL, BR, TR, TL segments
  std::vector<bool> slash_;
};

}  // namespace knots
