#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace switchlab {

/// Exact rational scalar. Thin value wrapper over GMP's mpq_class that
/// materializes every result (no dangling expression templates) and keeps the
/// canonical form: lowest terms, positive denominator.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}                // NOLINT: implicit by design
  Rational(long n) : v_(static_cast<long>(n)) {}
  Rational(long long n) { set_int(n); }
  Rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    Rational n;
    n.set_int(num);
    Rational d;
    d.set_int(den);
    v_ = n.v_ / d.v_;
  }

  static Rational from_mpq(mpq_class q) {
    Rational r;
    r.v_ = std::move(q);
    return r;
  }

  /// Parses "p", "p/q", or a plain integer string. Throws on malformed input.
  static Rational parse(std::string_view s) {
    mpq_class q;
    if (q.set_str(std::string(s), 10) != 0)
      throw std::invalid_argument("Rational: cannot parse '" + std::string(s) + "'");
    q.canonicalize();
    return from_mpq(std::move(q));
  }

  friend Rational operator+(const Rational& a, const Rational& b) { return from_mpq(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return from_mpq(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return from_mpq(mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.v_ == 0) throw std::domain_error("Rational: division by zero");
    return from_mpq(mpq_class(a.v_ / b.v_));
  }
  Rational operator-() const { return from_mpq(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.v_ == 0) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }
  Rational abs() const { return from_mpq(::abs(v_)); }

  double to_double() const { return v_.get_d(); }
  std::string str() const { return v_.get_str(); }  // "p" or "p/q"
  std::string num_str() const { return v_.get_num().get_str(); }
  std::string den_str() const { return v_.get_den().get_str(); }
  bool fits_int64() const { return v_.get_den() == 1 && v_.get_num().fits_slong_p(); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_.get_str(); }

 private:
  void set_int(long long n) {
    // mpq_class has no long long constructor on LP64-agnostic paths; go via string
    // only when the value does not fit in a long.
    if (n >= static_cast<long long>(std::numeric_limits<long>::min()) &&
        n <= static_cast<long long>(std::numeric_limits<long>::max())) {
      v_ = static_cast<long>(n);
    } else {
      v_ = mpq_class(std::to_string(n), 10);
    }
  }

  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.abs(); }
using std::abs;

/// Uniform construction/query interface for the two numeric modes. The mode of
/// a computation is its scalar type: Rational = Exact, double = Approx.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational from_int(long long n) { return Rational(n); }
  static Rational ratio(long long num, long long den) { return Rational(num, den); }
  static double to_double(const Rational& v) { return v.to_double(); }
  static std::string to_string(const Rational& v) { return v.str(); }
  static Rational abs(const Rational& v) { return v.abs(); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_int(long long n) { return static_cast<double>(n); }
  static double ratio(long long num, long long den) { return static_cast<double>(num) / static_cast<double>(den); }
  static double to_double(double v) { return v; }
  static std::string to_string(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  static double abs(double v) { return v < 0 ? -v : v; }
};

}  // namespace switchlab
