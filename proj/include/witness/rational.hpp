#pragma once

// Exact rational arithmetic used everywhere in this library. No floating
// point is involved in any objective computation; doubles appear only in
// the non-authoritative decimal rendering helper, and even that is computed
// by exact integer division.

#include <gmpxx.h>

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace witness {

// Raised when input data (files, flags, instances) is malformed.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal exact assertion fails (a bound or identity that
// the algorithms guarantee). Mapped to a distinct process exit code by the CLI.
struct check_error : std::runtime_error {
  explicit check_error(const std::string& what) : std::runtime_error(what) {}
};

// Arbitrary-precision rational, always in lowest terms with positive
// denominator. Thin wrapper over GMP's mpq_class; the wrapper pins the
// canonical serialization "num/den" and the exact decimal rendering.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long num) : v_(static_cast<long>(num)) {}
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw input_error("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Parses the canonical form "num/den" or a bare integer "num".
  static Rational parse(const std::string& text) {
    if (text.empty()) throw input_error("empty rational literal");
    std::size_t slash = text.find('/');
    try {
      if (slash == std::string::npos) {
        mpq_class q(mpz_class(text), 1);
        return Rational(q);
      }
      std::string num = text.substr(0, slash);
      std::string den = text.substr(slash + 1);
      if (num.empty() || den.empty()) throw input_error("malformed rational: " + text);
      mpz_class d(den);
      if (d == 0) throw input_error("rational with zero denominator: " + text);
      mpq_class q(mpz_class(num), d);
      q.canonicalize();
      return Rational(q);
    } catch (const std::invalid_argument&) {
      throw input_error("malformed rational: " + text);
    }
  }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw input_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  // Canonical serialization: "num/den" in lowest terms, "num" when den == 1.
  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  // Fixed-point decimal with `digits` fractional digits, round half to even.
  // Non-authoritative: for human-readable report fields only.
  std::string decimal(int digits = 12) const {
    mpz_class n = v_.get_num();
    mpz_class d = v_.get_den();
    bool neg = n < 0;
    if (neg) n = -n;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpz_class scaled = n * scale;
    mpz_class quot, rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), d.get_mpz_t());
    mpz_class twice = rem * 2;
    if (twice > d || (twice == d && mpz_odd_p(quot.get_mpz_t()))) quot += 1;
    mpz_class ip = quot / scale;
    mpz_class fp = quot % scale;
    std::string frac = fp.get_str();
    frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
    std::string out = ip.get_str() + "." + frac;
    if (neg && quot != 0) out = "-" + out;
    return out;
  }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// Exact harmonic numbers H_n = 1 + 1/2 + ... + 1/n, with H_0 = 0.
// Values are memoized; the table is guarded by a mutex so concurrent
// readers are safe. Large-index streaming scans in the audit module keep
// their own running sums instead of going through this table.
inline const Rational& harmonic(std::size_t n) {
  static std::vector<Rational> table{Rational(0)};
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  while (table.size() <= n) {
    std::size_t k = table.size();
    table.push_back(table.back() + Rational(1, static_cast<long>(k)));
  }
  return table[n];
}

// Exact constants of the deterministic node-variant construction.
// bound = 781/420 (= 1.86 - 1/2100), margin = 97/420, and the child
// selection threshold bound - margin - H_2 = 9/70.
namespace constants {
inline const Rational& phi() {
  static const Rational v(781, 420);
  return v;
}
inline const Rational& delta() {
  static const Rational v(97, 420);
  return v;
}
inline const Rational& select_threshold() {
  static const Rational v = phi() - delta() - harmonic(2);
  return v;
}
// Extra slack charged to nodes with many children: 0 for k <= 8,
// 1/3 - margin = 43/420 for k >= 9.
inline Rational beta(std::size_t k) {
  if (k <= 8) return Rational(0);
  return Rational(1, 3) - delta();
}
// Expectation bound certified by the randomized path-host construction.
inline const Rational& claw_bound() {
  static const Rational v(991, 732);
  return v;
}
}  // namespace constants

}  // namespace witness
