#include "knots/laurent.hpp"

#include <cctype>
#include <stdexcept>

namespace knots {

LaurentPoly LaurentPoly::monomial(long long coeff, int exp) {
  LaurentPoly p;
  p.set(exp, coeff);
  return p;
}

LaurentPoly LaurentPoly::from_coeffs(int lo, const std::vector<long long>& coeffs) {
  LaurentPoly p;
  for (size_t i = 0; i < coeffs.size(); ++i) p.set(lo + static_cast<int>(i), coeffs[i]);
  return p;
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  LaurentPoly p;
  if (s.empty()) return p;
  if (s.find(':') != std::string::npos) {
    size_t i = 0;
    while (i < s.size()) {
      size_t colon = s.find(':', i), comma = s.find(',', i);
      if (colon == std::string::npos) throw std::invalid_argument("bad exp:coeff list: " + text);
      if (comma == std::string::npos) comma = s.size();
      int e = std::stoi(s.substr(i, colon - i));
      long long v = std::stoll(s.substr(colon + 1, comma - colon - 1));
      p.set(e, p.coeff(e) + v);
      i = comma + 1;
    }
    return p;
  }
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') sign = s[i++] == '-' ? -1 : 1;
    long long coef = 1;
    bool have_num = false;
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) coef = std::stoll(s.substr(i, j - i)), have_num = true;
    i = j;
    if (i < s.size() && s[i] == '*') ++i;
    int e = 0;
    if (i < s.size() && s[i] == 't') {
      ++i;
      e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        bool paren = i < s.size() && s[i] == '(';
        if (paren) ++i;
        size_t k = i;
        if (k < s.size() && (s[k] == '-' || s[k] == '+')) ++k;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        e = std::stoi(s.substr(i, k - i));
        i = k;
        if (paren) {
          if (i >= s.size() || s[i] != ')') throw std::invalid_argument("bad polynomial: " + text);
          ++i;
        }
      }
    } else if (!have_num) {
      throw std::invalid_argument("bad polynomial: " + text);
    }
    p.set(e, p.coeff(e) + sign * coef);
  }
  return p;
}

long long LaurentPoly::eval(long long t) const {
  long long r = 0;
  for (auto [e, v] : c_) {
    long long pw = 1;
    if (e < 0 && t != 1 && t != -1) throw std::invalid_argument("eval of negative power at non-unit");
    for (int k = 0; k < std::abs(e); ++k) pw *= t;
    r += v * pw;
  }
  return r;
}

bool LaurentPoly::is_symmetric() const { return *this == reciprocal(); }

LaurentPoly LaurentPoly::normalized() const {
  if (c_.empty()) return *this;
  int lo = min_exp(), hi = max_exp();
  int shift = -(lo + (hi - lo) / 2);
  LaurentPoly p = shifted(shift);
  long long at1 = 0;
  for (auto [e, v] : p.c_) at1 += v;
  if (at1 < 0 || (at1 == 0 && p.c_.rbegin()->second < 0))
    for (auto& [e, v] : p.c_) v = -v;
  return p;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (auto [e, v] : o.c_) r.set(e, r.coeff(e) + v);
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (auto [e, v] : o.c_) r.set(e, r.coeff(e) - v);
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (auto [e1, v1] : c_)
    for (auto [e2, v2] : o.c_) r.set(e1 + e2, r.coeff(e1 + e2) + v1 * v2);
  return r;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r;
  for (auto [e, v] : c_) r.c_[e + k] = v;
  return r;
}

LaurentPoly LaurentPoly::reciprocal() const {
  LaurentPoly r;
  for (auto [e, v] : c_) r.c_[-e] = v;
  return r;
}

std::string LaurentPoly::serialize() const {
  std::string out;
  for (auto [e, v] : c_) {
    if (!out.empty()) out += ',';
    out += std::to_string(e) + ":" + std::to_string(v);
  }
  return out.empty() ? "0:0" : out;
}

std::string LaurentPoly::pretty() const {
  if (c_.empty()) return "0";
  std::string out;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    auto [e, v] = *it;
    long long a = v < 0 ? -v : v;
    if (v < 0)
      out += '-';
    else if (!out.empty())
      out += '+';
    if (a != 1 || e == 0) out += std::to_string(a);
    if (e != 0) {
      out += 't';
      if (e != 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

}  // namespace knots
