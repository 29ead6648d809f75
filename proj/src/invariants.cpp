#include "knots/invariants.hpp"

#include <gmpxx.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace knots {

FamilyParams FamilyParams::parse(const std::string& s) {
  std::vector<int> v;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, ',')) v.push_back(std::stoi(tok));
  if (v.size() != 6) throw std::invalid_argument("expected six comma-separated integers: " + s);
  return from({v[0], v[1], v[2], v[3], v[4], v[5]});
}

std::string FamilyParams::str() const {
  std::ostringstream os;
  os << a << ',' << b << ',' << c << ',' << d << ',' << e << ',' << f;
  return os.str();
}

SeifertMatrix family_seifert_matrix(const FamilyParams& p) {
  long long a = p.a, b = p.b, c = p.c, d = p.d, e = p.e, f = p.f;
  return {{0, 0, 0, -1},
          {1, a + c + d + f, c + 1, f + c + d + 1},
          {0, c, b + c + e, b + c + 1},
          {0, f + c + d, b + c + 1, b + c + d + f}};
}

namespace {

using u64 = unsigned long long;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<unsigned __int128>(a) * b % p; }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  for (a %= p; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

u64 inv(u64 a, u64 p) { return powmod(a, p - 2, p); }

u64 reduce(long long v, u64 p) {
  long long r = v % static_cast<long long>(p);
  return r < 0 ? r + p : r;
}

u64 det_mod(std::vector<std::vector<u64>> M, u64 p) {
  size_t n = M.size();
  u64 det = 1;
  for (size_t i = 0; i < n; ++i) {
    size_t piv = i;
    while (piv < n && M[piv][i] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != i) std::swap(M[piv], M[i]), det = det ? p - det : 0;
    det = mulmod(det, M[i][i], p);
    u64 iv = inv(M[i][i], p);
    for (size_t r = i + 1; r < n; ++r) {
      if (!M[r][i]) continue;
      u64 fct = mulmod(M[r][i], iv, p);
      for (size_t k = i; k < n; ++k) M[r][k] = (M[r][k] + p - mulmod(fct, M[i][k], p)) % p;
    }
  }
  return det;
}

// Coefficients mod p of det(tA - A^T), degree <= n, by interpolation at t = 0..n.
std::vector<u64> alexander_mod(const SeifertMatrix& A, u64 p) {
  size_t n = A.size();
  std::vector<u64> xs(n + 1), ys(n + 1);
  for (size_t k = 0; k <= n; ++k) {
    std::vector<std::vector<u64>> M(n, std::vector<u64>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        M[i][j] = (mulmod(k, reduce(A[i][j], p), p) + p - reduce(A[j][i], p)) % p;
    xs[k] = k;
    ys[k] = det_mod(M, p);
  }
  // Newton divided differences, then expand to monomial basis.
  std::vector<u64> coef = ys;
  for (size_t j = 1; j <= n; ++j)
    for (size_t i = n; i >= j; --i) {
      u64 num = (coef[i] + p - coef[i - 1]) % p;
      coef[i] = mulmod(num, inv((xs[i] + p - xs[i - j]) % p, p), p);
      if (i == j) break;
    }
  std::vector<u64> poly(n + 1, 0);
  for (size_t i = n + 1; i-- > 0;) {
    // poly = poly * (t - xs[i]) + coef[i]
    std::vector<u64> next(n + 1, 0);
    for (size_t k = 0; k <= n; ++k) {
      if (!poly[k]) continue;
      if (k + 1 <= n) next[k + 1] = (next[k + 1] + poly[k]) % p;
      next[k] = (next[k] + p - mulmod(poly[k], xs[i] % p, p)) % p;
    }
    next[0] = (next[0] + coef[i]) % p;
    poly = next;
  }
  return poly;
}

}  // namespace

LaurentPoly alexander_raw(const SeifertMatrix& A) {
  size_t n = A.size();
  if (n == 0) return LaurentPoly(1);
  // Coefficients are bounded by max |det| on the unit circle <= prod of (row norm + column norm).
  double log2bound = 1;
  for (size_t i = 0; i < n; ++i) {
    double r = 0, c = 0;
    for (size_t j = 0; j < n; ++j) r += double(A[i][j]) * A[i][j], c += double(A[j][i]) * A[j][i];
    log2bound += std::log2(std::sqrt(r) + std::sqrt(c) + 1e-12);
  }
  static const std::vector<u64> primes = [] {
    std::vector<u64> ps;
    mpz_class q = mpz_class(1) << 62;
    for (int i = 0; i < 64; ++i) {
      q -= 1;
      while (mpz_probab_prime_p(q.get_mpz_t(), 30) == 0) q -= 1;
      u64 v = 0;
      mpz_export(&v, nullptr, 1, sizeof(u64), 0, 0, q.get_mpz_t());
      ps.push_back(v);
    }
    return ps;
  }();
  std::vector<u64> used;
  std::vector<mpz_class> residue(n + 1, 0);
  mpz_class modulus = 1;
  double bits = 0;
  for (u64 p : primes) {
    auto r = alexander_mod(A, p);
    mpz_class mp;
    mpz_import(mp.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &p);
    for (size_t k = 0; k <= n; ++k) {
      // CRT: x = residue + modulus * ((r - residue) * modulus^-1 mod p)
      mpz_class rk;
      mpz_import(rk.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &r[k]);
      mpz_class diff = rk - residue[k];
      mpz_class minv;
      mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), mp.get_mpz_t());
      mpz_class t = diff * minv;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), mp.get_mpz_t());
      residue[k] += modulus * t;
    }
    modulus *= mp;
    bits += std::log2(double(p));
    if (bits > log2bound + 2) break;
  }
  if (bits <= log2bound + 2) throw std::runtime_error("Alexander polynomial exceeds CRT capacity");
  std::vector<long long> out(n + 1);
  mpz_class half = modulus / 2;
  for (size_t k = 0; k <= n; ++k) {
    mpz_class v = residue[k];
    if (v > half) v -= modulus;
    if (!v.fits_slong_p()) throw std::runtime_error("Alexander coefficient overflow");
    out[k] = v.get_si();
  }
  return LaurentPoly::from_coeffs(0, out);
}

LaurentPoly alexander(const SeifertMatrix& A) { return alexander_raw(A).normalized(); }

std::array<int, 3> inertia(const IntMatrix& M0) {
  int n = static_cast<int>(M0.size());
  std::vector<std::vector<mpz_class>> M(n, std::vector<mpz_class>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[i][j] = static_cast<long>(M0[i][j]);
  // Symmetric fraction-free elimination; congruence row/col additions when the diagonal vanishes.
  mpz_class prev = 1;
  int pos = 0, neg = 0, zero = 0;
  std::vector<int> alive(n);
  for (int i = 0; i < n; ++i) alive[i] = i;
  while (!alive.empty()) {
    int piv = -1;
    for (int i : alive)
      if (M[i][i] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) {
      int pi = -1, pj = -1;
      for (int i : alive)
        for (int j : alive)
          if (i != j && M[i][j] != 0 && pi < 0) pi = i, pj = j;
      if (pi < 0) {
        zero += static_cast<int>(alive.size());
        break;
      }
      // row_i += row_j, col_i += col_j
      for (int k : alive) M[pi][k] += M[pj][k];
      for (int k : alive) M[k][pi] += M[k][pj];
      piv = pi;
    }
    mpz_class p = M[piv][piv];
    int s = sgn(p) * sgn(prev);
    (s > 0 ? pos : neg)++;
    std::vector<int> rest;
    for (int i : alive)
      if (i != piv) rest.push_back(i);
    for (int i : rest)
      for (int j : rest) {
        mpz_class v = p * M[i][j] - M[i][piv] * M[piv][j];
        mpz_divexact(M[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
    prev = p;
    alive = rest;
  }
  return {pos, neg, zero};
}

int signature(const SeifertMatrix& A) {
  size_t n = A.size();
  IntMatrix S(n, std::vector<long long>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) S[i][j] = A[i][j] + A[j][i];
  auto in = inertia(S);
  if (in[2]) throw SignatureError("A + A^T is singular");
  return in[0] - in[1];
}

int lt_signature_at(const SeifertMatrix& A, double theta, double* min_abs) {
  int n = static_cast<int>(A.size());
  if (n == 0) {
    if (min_abs) *min_abs = INFINITY;
    return 0;
  }
  std::complex<double> w = std::polar(1.0, theta);
  Eigen::MatrixXcd H(n, n);
  double norm = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      H(i, j) = (1.0 - w) * double(A[i][j]) + (1.0 - std::conj(w)) * double(A[j][i]);
      norm = std::max(norm, std::abs(H(i, j)));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  int s = 0;
  double m = INFINITY;
  double tol = 1e-9 * std::max(1.0, norm) * n;
  for (int i = 0; i < n; ++i) {
    double ev = es.eigenvalues()(i);
    m = std::min(m, std::abs(ev));
    if (ev > tol)
      ++s;
    else if (ev < -tol)
      --s;
  }
  if (min_abs) *min_abs = m / std::max(1.0, norm);
  return s;
}

LTProfile lt_signature(const SeifertMatrix& A, int resolution) {
  LTProfile prof;
  // Unit-circle roots of Delta located by sign changes / near-zeros of the real function
  // t^-g Delta(t) on the upper half circle.
  LaurentPoly delta = alexander(A);
  auto val = [&](double th) {
    double s = 0;
    for (auto [e, v] : delta.terms()) s += v * std::cos(e * th);
    return s;
  };
  const int fine = 4096;
  std::vector<double> roots;
  for (int i = 0; i < fine; ++i) {
    double a = M_PI * i / fine, b = M_PI * (i + 1) / fine;
    double va = val(a), vb = val(b);
    if (va == 0 || va * vb < 0 || std::abs(va) < 1e-9) roots.push_back((a + b) / 2);
  }
  double win = M_PI / fine * 2;
  for (double r : roots) prof.root_windows.push_back({r - win, r + win});
  int exact_pi = signature(A);
  for (int k = 1; k <= resolution; ++k) {
    double th = M_PI * k / resolution;
    bool inside = false;
    for (auto [lo, hi] : prof.root_windows)
      if (th >= lo && th <= hi) inside = true;
    double mabs = 0;
    int s = k == resolution ? exact_pi : lt_signature_at(A, th, &mabs);
    if (inside || (k != resolution && mabs < 1e-9)) {
      prof.skipped.push_back(th);
      continue;
    }
    prof.samples.push_back({th, s});
  }
  return prof;
}

long long determinant_inv(const SeifertMatrix& A) {
  long long v = alexander(A).eval(-1);
  return v < 0 ? -v : v;
}

int arf_from_det(long long det) {
  long long r = det % 8;
  return (r == 1 || r == 7) ? 0 : 1;
}

int arf(const SeifertMatrix& A) { return arf_from_det(determinant_inv(A)); }

std::optional<LaurentPoly> fox_milnor(const LaurentPoly& delta0) {
  LaurentPoly delta = delta0.normalized();
  if (delta.is_zero()) return std::nullopt;
  int lo = delta.min_exp(), hi = delta.max_exp();
  if (lo != -hi) return std::nullopt;
  int g = hi;
  std::vector<long long> c(g + 1);
  for (int k = 0; k <= g; ++k) c[k] = delta.coeff(k);  // c[k] = sum_j a_j a_{j+k}
  long long c0 = c[0];
  if (c0 <= 0) return std::nullopt;
  std::vector<long long> a(g + 1, 0);
  std::optional<LaurentPoly> found;
  // choose a pairs (a_k, a_{g-k}) from the outside in; c[g-k] is then fully determined
  std::function<void(int, long long)> rec = [&](int k, long long used) {
    if (found) return;
    int lo_i = k, hi_i = g - k;
    if (lo_i > hi_i) {
      for (int s = 0; s <= g; ++s) {
        long long v = 0;
        for (int j = 0; j + s <= g; ++j) v += a[j] * a[j + s];
        if (v != c[s]) return;
      }
      std::vector<long long> f(a.begin(), a.end());
      found = LaurentPoly::from_coeffs(0, f);
      return;
    }
    long long room = c0 - used;
    long long lim = static_cast<long long>(std::sqrt(double(room))) + 1;
    auto check = [&]() {
      long long v = 0;
      for (int j = 0; j <= k; ++j) v += a[j] * a[g - k + j];
      return v == c[g - k];
    };
    if (lo_i == hi_i) {
      for (long long x = (k == 0 ? 1 : -lim); x <= lim; ++x) {
        if (x * x > room) continue;
        a[k] = x;
        if (check()) rec(k + 1, used + x * x);
      }
      a[k] = 0;
      return;
    }
    for (long long x = (k == 0 ? 1 : -lim); x <= lim; ++x) {
      if (x * x > room || (k == 0 && x == 0)) continue;
      for (long long y = -lim; y <= lim; ++y) {
        if (x * x + y * y > room || (k == 0 && y == 0)) continue;
        a[k] = x;
        a[g - k] = y;
        if (check()) rec(k + 1, used + x * x + y * y);
        if (found) return;
      }
    }
    a[k] = a[g - k] = 0;
  };
  rec(0, 0);
  return found;
}

namespace {

long long form(const SeifertMatrix& A, const std::array<long long, 4>& v, const std::array<long long, 4>& w) {
  long long s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += v[i] * A[i][j] * w[j];
  return s;
}

bool rank2(const std::array<long long, 4>& v, const std::array<long long, 4>& w) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (v[i] * w[j] - v[j] * w[i] != 0) return true;
  return false;
}

}  // namespace

std::optional<Metabolizer> metabolizer_search(const SeifertMatrix& A, int B) {
  if (A.size() != 4) return std::nullopt;
  std::vector<std::array<long long, 4>> iso;
  std::array<long long, 4> v{};
  for (v[0] = -B; v[0] <= B; ++v[0])
    for (v[1] = -B; v[1] <= B; ++v[1])
      for (v[2] = -B; v[2] <= B; ++v[2])
        for (v[3] = -B; v[3] <= B; ++v[3]) {
          int lead = 0;
          while (lead < 4 && v[lead] == 0) ++lead;
          if (lead == 4 || v[lead] < 0) continue;
          long long g = 0;
          for (long long x : v) g = std::gcd(g, x < 0 ? -x : x);
          if (g != 1) continue;
          if (form(A, v, v) == 0) iso.push_back(v);
        }
  for (size_t i = 0; i < iso.size(); ++i)
    for (size_t j = i + 1; j < iso.size(); ++j)
      if (form(A, iso[i], iso[j]) == 0 && form(A, iso[j], iso[i]) == 0 && rank2(iso[i], iso[j]))
        return Metabolizer{iso[i], iso[j]};
  return std::nullopt;
}

bool verify_metabolizer(const SeifertMatrix& A, const std::vector<std::vector<long long>>& S) {
  size_t n = A.size();
  if (S.size() != n) throw std::invalid_argument("metabolizer rows must match the Seifert matrix size");
  for (auto& r : S)
    if (r.size() != 2) throw std::invalid_argument("metabolizer must have two columns");
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      long long s = 0;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) s += S[i][x] * A[i][j] * S[j][y];
      if (s != 0) return false;
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (S[i][0] * S[j][1] - S[j][0] * S[i][1] != 0) return true;
  return false;
}

bool verify_metabolizer(const SeifertMatrix& A, const Metabolizer& m) {
  std::vector<std::vector<long long>> S(4, std::vector<long long>(2));
  for (int i = 0; i < 4; ++i) S[i] = {m[0][i], m[1][i]};
  return verify_metabolizer(A, S);
}

Fingerprint fingerprint_of_matrix(const SeifertMatrix& A) {
  Fingerprint f;
  f.alexander = alexander(A);
  f.signature = signature(A);
  long long v = f.alexander.eval(-1);
  f.det = v < 0 ? -v : v;
  return f;
}

Fingerprint fingerprint(const KnotDiagram& d) { return fingerprint_of_matrix(seifert_matrix(d)); }

long long coloring_determinant(const KnotDiagram& d) {
  int n = d.size();
  if (n == 0) return 1;
  // over-arcs: PD labels joined through the over-strand of each crossing
  int L = max_label(d);
  std::vector<int> parent(L + 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (int c = 0; c < n; ++c) parent[find(d.x[c][1])] = find(d.x[c][3]);
  std::map<int, int> arc;
  for (int l = 1; l <= L; ++l) arc.emplace(find(l), static_cast<int>(arc.size()));
  int m = static_cast<int>(arc.size());
  std::vector<std::vector<mpz_class>> M(n, std::vector<mpz_class>(m));
  for (int c = 0; c < n; ++c) {
    M[c][arc[find(d.x[c][1])]] += 2;
    M[c][arc[find(d.x[c][0])]] -= 1;
    M[c][arc[find(d.x[c][2])]] -= 1;
  }
  // any (k-1)-minor; Bareiss elimination on the leading block
  int k = std::min(n, m) - 1;
  if (k <= 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (int i = 0; i < k; ++i) {
    int piv = i;
    while (piv < k && M[piv][i] == 0) ++piv;
    if (piv == k) return 0;
    if (piv != i) std::swap(M[piv], M[i]), sign = -sign;
    for (int r = i + 1; r < k; ++r) {
      for (int j = i + 1; j < k; ++j) M[r][j] = (M[r][j] * M[i][i] - M[r][i] * M[i][j]) / prev;
      M[r][i] = 0;
    }
    prev = M[i][i];
  }
  mpz_class v = abs(M[k - 1][k - 1]);
  return v.get_si();
}

}  // namespace knots
