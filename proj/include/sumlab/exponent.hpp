#pragma once
// Extended exponents q in [1, inf].  Infinity is a distinct state, never a
// large sentinel float.  Exponents built from integer or rational literals
// ("4/3") keep an exact num/den form so conjugation and scale-of-exponent
// identities can be decided without floating-point slop.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumlab {

// Bad caller-supplied data (files, CLI flags, out-of-range parameters).
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A computation that cannot proceed (LP blowup, degenerate normalization).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Exponent {
 public:
  Exponent() : val_(1.0), num_(1), den_(1) {}

  static Exponent infinity() {
    Exponent e;
    e.inf_ = true;
    e.num_ = 0;
    return e;
  }

  static Exponent from_double(double v) {
    if (!(v >= 1.0)) throw input_error("exponent must satisfy q >= 1");
    Exponent e;
    e.val_ = v;
    // Recognize small integers so "2.0" still conjugates exactly.
    auto r = static_cast<int64_t>(v);
    if (static_cast<double>(r) == v && r <= (1 << 20)) {
      e.num_ = r;
      e.den_ = 1;
    } else {
      e.num_ = 0;
    }
    return e;
  }

  static Exponent rational(int64_t num, int64_t den) {
    if (den <= 0 || num <= 0) throw input_error("exponent rational must be positive");
    int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (num < den) throw input_error("exponent must satisfy q >= 1");
    Exponent e;
    e.num_ = num;
    e.den_ = den;
    e.val_ = static_cast<double>(num) / static_cast<double>(den);
    return e;
  }

  // Accepts "inf", integer, decimal, or "a/b".
  static Exponent parse(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF") return infinity();
    auto slash = text.find('/');
    try {
      if (slash != std::string::npos) {
        size_t pa = 0, pb = 0;
        int64_t a = std::stoll(text.substr(0, slash), &pa);
        int64_t b = std::stoll(text.substr(slash + 1), &pb);
        if (pa != slash || pb != text.size() - slash - 1)
          throw input_error("bad exponent literal: " + text);
        return rational(a, b);
      }
      size_t pos = 0;
      double v = std::stod(text, &pos);
      if (pos != text.size()) throw input_error("bad exponent literal: " + text);
      return from_double(v);
    } catch (const std::invalid_argument&) {
      throw input_error("bad exponent literal: " + text);
    } catch (const std::out_of_range&) {
      throw input_error("exponent literal out of range: " + text);
    }
  }

  bool is_inf() const { return inf_; }
  bool is_one() const { return !inf_ && num_ == 1 && den_ == 1; }
  bool is_rational() const { return inf_ || num_ > 0; }

  double value() const {
    if (inf_) throw numeric_error("exponent is infinite");
    return val_;
  }
  // 1/q, with 1/inf = 0.
  double inverse() const { return inf_ ? 0.0 : 1.0 / val_; }

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  // Conjugate exponent: 1/q + 1/q* = 1, with 1 <-> inf.
  Exponent conjugate() const {
    if (inf_) return rational(1, 1);
    if (is_one()) return infinity();
    if (num_ > 0) return rational(num_, num_ - den_);
    return from_double(val_ / (val_ - 1.0));
  }

  bool same(const Exponent& o) const {
    if (inf_ || o.inf_) return inf_ == o.inf_;
    if (num_ > 0 && o.num_ > 0) return num_ == o.num_ && den_ == o.den_;
    return std::abs(val_ - o.val_) <= 1e-12 * (1.0 + std::abs(val_));
  }

  std::string str() const {
    if (inf_) return "inf";
    if (num_ > 0) {
      if (den_ == 1) return std::to_string(num_);
      return std::to_string(num_) + "/" + std::to_string(den_);
    }
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", val_);
    return buf;
  }

 private:
  double val_;
  int64_t num_;  // 0 when no exact form is known
  int64_t den_ = 1;
  bool inf_ = false;
};

// Decides 1/lhs == sum_j 1/rhs[j] exactly when every exponent carries a
// rational form, otherwise within 1e-12.
inline bool inverse_sum_matches(const Exponent& lhs, const std::vector<Exponent>& rhs) {
  bool exact = lhs.is_rational();
  for (const auto& e : rhs) exact = exact && e.is_rational();
  if (exact) {
    // Accumulate sum of 1/q_j as a fraction; magnitudes here are tiny.
    __int128 num = 0, den = 1;
    auto add = [&](int64_t n, int64_t d) {
      num = num * d + den * n;
      den = den * d;
    };
    for (const auto& e : rhs) {
      if (e.is_inf()) continue;  // contributes 0
      add(e.den(), e.num());
    }
    __int128 ln = lhs.is_inf() ? 0 : lhs.den();
    __int128 ld = lhs.is_inf() ? 1 : lhs.num();
    return num * ld == ln * den;
  }
  double s = 0;
  for (const auto& e : rhs) s += e.inverse();
  return std::abs(lhs.inverse() - s) <= 1e-12;
}

}  // namespace sumlab
