#pragma once

#include <map>
#include <string>
#include <vector>

namespace knots {

// Integer Laurent polynomial in t, stored as exponent -> nonzero coefficient.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(long long constant) {
    if (constant) c_[0] = constant;
  }
  static LaurentPoly monomial(long long coeff, int exp);
  // Coefficients of t^lo, t^(lo+1), ...
  static LaurentPoly from_coeffs(int lo, const std::vector<long long>& coeffs);
  // Parses "exp:coeff" lists ("-1:-2,0:5,1:-2") or human form ("t^2-2t+3-2t^-1+t^-2").
  static LaurentPoly parse(const std::string& s);

  const std::map<int, long long>& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }
  int max_exp() const { return c_.empty() ? 0 : c_.rbegin()->first; }
  long long coeff(int e) const {
    auto it = c_.find(e);
    return it == c_.end() ? 0 : it->second;
  }
  long long eval(long long t) const;  // requires t = +-1 when negative exponents exist
  bool is_symmetric() const;

  // Shift so the exponent range is centred on 0 (lower half for odd span),
  // sign so the value at t=1 is positive.
  LaurentPoly normalized() const;

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly shifted(int k) const;
  LaurentPoly reciprocal() const;  // p(t^-1)
  bool operator==(const LaurentPoly& o) const { return c_ == o.c_; }

  std::string serialize() const;  // sorted "exp:coeff" pairs
  std::string pretty() const;     // e.g. -2t+5-2t^-1

 private:
  void set(int e, long long v) {
    if (v)
      c_[e] = v;
    else
      c_.erase(e);
  }
  std::map<int, long long> c_;
};

}  // namespace knots
