#pragma once

#include <array>
#include <type_traits>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <string>

namespace switchlab {

/// Site of the d-dimensional integer lattice. Ordering is lexicographic so
/// that ordered containers iterate deterministically.
template <int D>
using Point = std::array<std::int64_t, D>;

/// Point parameter in signatures that also carry D through another argument:
/// keeps the array out of template deduction.
template <int D>
using PointArg = std::type_identity_t<Point<D>>;

template <int D>
constexpr Point<D> origin() {
  Point<D> p{};
  return p;
}


template <std::size_t N>
inline std::array<std::int64_t, N> operator+(std::array<std::int64_t, N> a,
                                             const std::array<std::int64_t, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
  return a;
}

template <std::size_t N>
inline std::array<std::int64_t, N> operator-(std::array<std::int64_t, N> a,
                                             const std::array<std::int64_t, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] -= b[i];
  return a;
}

template <std::size_t N>
inline std::int64_t sup_norm(const std::array<std::int64_t, N>& p) {
  std::int64_t m = 0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(p[i]));
  return m;
}

template <std::size_t N>
inline std::int64_t l1_norm(const std::array<std::int64_t, N>& p) {
  std::int64_t m = 0;
  for (std::size_t i = 0; i < N; ++i) m += std::abs(p[i]);
  return m;
}

/// Applies f to each of the 2d lattice neighbours of p.
template <std::size_t N, class F>
inline void for_each_neighbor(const std::array<std::int64_t, N>& p, F&& f) {
  for (std::size_t i = 0; i < N; ++i) {
    std::array<std::int64_t, N> q = p;
    q[i] = p[i] + 1;
    f(q);
    q[i] = p[i] - 1;
    f(q);
  }
}

template <std::size_t N>
inline std::string point_str(const std::array<std::int64_t, N>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < N; ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  s += ")";
  return s;
}

/// Integer time extended with both infinities. Barrier entry times live here;
/// -inf only ever arises from reflecting a Rost barrier.
class ExtTime {
 public:
  constexpr ExtTime() : v_(0) {}
  constexpr explicit ExtTime(std::int64_t t) : v_(t) {}
  static constexpr ExtTime plus_inf() { return ExtTime(kPos, tag{}); }
  static constexpr ExtTime minus_inf() { return ExtTime(kNeg, tag{}); }

  constexpr bool is_plus_inf() const { return v_ == kPos; }
  constexpr bool is_minus_inf() const { return v_ == kNeg; }
  constexpr bool finite() const { return v_ != kPos && v_ != kNeg; }
  constexpr std::int64_t value() const { return v_; }  // only meaningful when finite()

  friend constexpr bool operator==(ExtTime a, ExtTime b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(ExtTime a, ExtTime b) { return a.v_ != b.v_; }

  // t < e and t >= e for finite query times t, with the usual infinity rules.
  friend constexpr bool operator<(std::int64_t t, ExtTime e) {
    if (e.is_plus_inf()) return true;
    if (e.is_minus_inf()) return false;
    return t < e.v_;
  }
  friend constexpr bool operator>=(std::int64_t t, ExtTime e) { return !(t < e); }

  std::string str() const {
    if (is_plus_inf()) return "inf";
    if (is_minus_inf()) return "-inf";
    return std::to_string(v_);
  }

 private:
  struct tag {};
  constexpr ExtTime(std::int64_t v, tag) : v_(v) {}
  static constexpr std::int64_t kPos = std::numeric_limits<std::int64_t>::max();
  static constexpr std::int64_t kNeg = std::numeric_limits<std::int64_t>::min();
  std::int64_t v_;
};

/// Finite horizon T or infinite horizon.
class Horizon {
 public:
  static Horizon finite(std::int64_t t) { return Horizon(t); }
  static Horizon infinite() { return Horizon(); }

  bool is_finite() const { return finite_; }
  std::int64_t T() const { return t_; }  // only when finite

 private:
  Horizon() : finite_(false), t_(0) {}
  explicit Horizon(std::int64_t t) : finite_(true), t_(t) {}
  bool finite_;
  std::int64_t t_;
};

}  // namespace switchlab
