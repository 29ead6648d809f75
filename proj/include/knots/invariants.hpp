#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "knots/diagram.hpp"
#include "knots/laurent.hpp"

namespace knots {

using SeifertMatrix = IntMatrix;

struct FamilyParams {
  int a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;
  std::array<int, 6> arr() const { return {a, b, c, d, e, f}; }
  static FamilyParams from(const std::array<int, 6>& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }
  static FamilyParams parse(const std::string& s);
  std::string str() const;
  auto operator<=>(const FamilyParams&) const = default;
};

// The 4x4 Seifert matrix of the six-parameter family.
SeifertMatrix family_seifert_matrix(const FamilyParams& p);

// det(tA - A^T), normalized (symmetric, value 1 at t=1).
LaurentPoly alexander(const SeifertMatrix& A);
// Unnormalized det(tA - A^T) as a polynomial in t (exponents from 0).
LaurentPoly alexander_raw(const SeifertMatrix& A);

struct SignatureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Exact signature of A + A^T. Throws if A + A^T is singular.
int signature(const SeifertMatrix& A);
// Exact inertia (positive, negative, zero) of a symmetric integer matrix.
std::array<int, 3> inertia(const IntMatrix& M);

struct LTProfile {
  std::vector<std::pair<double, int>> samples;       // (theta, signature)
  std::vector<std::pair<double, double>> root_windows;  // excluded theta ranges
  std::vector<double> skipped;                        // grid points inside windows
};
LTProfile lt_signature(const SeifertMatrix& A, int resolution = 64);
// Levine-Tristram signature at a single angle (no window handling).
int lt_signature_at(const SeifertMatrix& A, double theta, double* min_abs_eig = nullptr);

long long determinant_inv(const SeifertMatrix& A);
int arf(const SeifertMatrix& A);
int arf_from_det(long long det);

// f with Delta = f(t) f(t^-1) (f as coefficients of t^0..t^g), if one exists.
std::optional<LaurentPoly> fox_milnor(const LaurentPoly& delta);

using Metabolizer = std::array<std::array<long long, 4>, 2>;  // two columns
std::optional<Metabolizer> metabolizer_search(const SeifertMatrix& A, int bound = 8);
bool verify_metabolizer(const SeifertMatrix& A, const std::vector<std::vector<long long>>& S);
bool verify_metabolizer(const SeifertMatrix& A, const Metabolizer& S);

// Diagram-level fingerprint used for identification.
struct Fingerprint {
  LaurentPoly alexander;
  int signature = 0;
  long long det = 1;
  bool operator==(const Fingerprint&) const = default;
};
Fingerprint fingerprint(const KnotDiagram& d);
Fingerprint fingerprint_of_matrix(const SeifertMatrix& A);

// |Delta(-1)| from the Fox coloring matrix of the diagram; independent of Seifert surfaces.
long long coloring_determinant(const KnotDiagram& d);

}  // namespace knots
