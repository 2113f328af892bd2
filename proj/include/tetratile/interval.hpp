#pragma once
// Closed intervals with outward rounding. Every primitive result has its lower
// endpoint pushed one ulp down and its upper endpoint one ulp up, so the exact
// real result is enclosed regardless of the rounding mode in effect. libm's
// sin/cos/sqrt are faithfully rounded on glibc; they get two ulps of slack.

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "core.hpp"

namespace tetratile {

inline double down(double x, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, -std::numeric_limits<double>::infinity());
  return x;
}
inline double up(double x, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, std::numeric_limits<double>::infinity());
  return x;
}

struct Interval {
  double lo = 0, hi = 0;

  constexpr Interval() = default;
  constexpr Interval(double x) : lo(x), hi(x) {}  // NOLINT: exact point
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  double mid() const { return lo == hi ? lo : 0.5 * lo + 0.5 * hi; }
  double width() const { return hi - lo; }
  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool strictly_positive() const { return lo > 0.0; }
  bool strictly_negative() const { return hi < 0.0; }
};

inline bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }

inline std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << "[" << x.lo << ", " << x.hi << "]";
}

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}
inline bool intersects(const Interval& a, const Interval& b) { return a.lo <= b.hi && b.lo <= a.hi; }
inline Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// pi enclosed by two adjacent doubles.
inline const Interval kPiI{3.141592653589793, up(3.141592653589793)};

inline Interval operator+(const Interval& a, const Interval& b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }
inline Interval operator-(const Interval& a, const Interval& b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }
inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator*(const Interval& a, const Interval& b) {
  if (a.lo == a.hi && b.lo == b.hi) {
    double p = a.lo * b.lo;
    if (a.lo == 0 || b.lo == 0) return {0.0, 0.0};
    return {down(p), up(p)};
  }
  double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  double lo = std::min({p1, p2, p3, p4}), hi = std::max({p1, p2, p3, p4});
  return {down(lo), up(hi)};
}

inline Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw Error(ErrorCode::DivisorStraddlesZero, "interval divisor contains 0");
  double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
  return {down(std::min({q1, q2, q3, q4})), up(std::max({q1, q2, q3, q4}))};
}

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }

inline Interval sqr(const Interval& a) {
  double l = a.lo * a.lo, h = a.hi * a.hi;
  if (a.contains_zero()) return {0.0, up(std::max(l, h))};
  return {std::max(0.0, down(std::min(l, h))), up(std::max(l, h))};
}

// Negative parts of the operand are discarded; a fully negative operand is an error.
inline Interval sqrt(const Interval& a) {
  if (a.hi < 0) throw Error(ErrorCode::NegativeSqrt, "interval sqrt of negative interval");
  double l = a.lo <= 0 ? 0.0 : std::max(0.0, down(std::sqrt(a.lo), 2));
  return {l, up(std::sqrt(a.hi), 2)};
}

inline Interval abs(const Interval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return {0.0, std::max(-a.lo, a.hi)};
}

namespace detail {

// Does some point c*pi + k*2*pi (k integer) possibly lie in [lo, hi]? c is 0, 0.5, 1 or 1.5.
inline bool may_contain_phase(double lo, double hi, double c) {
  double k_lo = std::floor(lo / (2 * kPi) - c / 2) - 1;
  double k_hi = std::ceil(hi / (2 * kPi) - c / 2) + 1;
  for (double k = k_lo; k <= k_hi; k += 1.0) {
    Interval pt = Interval(2 * k + c) * kPiI;
    if (pt.lo <= hi && lo <= pt.hi) return true;
  }
  return false;
}

inline Interval clip_unit(double lo, double hi) { return {std::max(-1.0, lo), std::min(1.0, hi)}; }

}  // namespace detail

inline Interval cos(const Interval& a) {
  if (a.width() >= 2 * kPi || !std::isfinite(a.width())) return {-1.0, 1.0};
  double cl = std::cos(a.lo), ch = std::cos(a.hi);
  double lo = down(std::min(cl, ch), 2), hi = up(std::max(cl, ch), 2);
  if (detail::may_contain_phase(a.lo, a.hi, 0.0)) hi = 1.0;
  if (detail::may_contain_phase(a.lo, a.hi, 1.0)) lo = -1.0;
  return detail::clip_unit(lo, hi);
}

inline Interval sin(const Interval& a) {
  if (a.width() >= 2 * kPi || !std::isfinite(a.width())) return {-1.0, 1.0};
  double sl = std::sin(a.lo), sh = std::sin(a.hi);
  double lo = down(std::min(sl, sh), 2), hi = up(std::max(sl, sh), 2);
  if (detail::may_contain_phase(a.lo, a.hi, 0.5)) hi = 1.0;
  if (detail::may_contain_phase(a.lo, a.hi, 1.5)) lo = -1.0;
  return detail::clip_unit(lo, hi);
}

// Monotone on [-1, 1]; operands are clipped to the domain first.
inline Interval asin(const Interval& a) {
  double l = std::max(-1.0, a.lo), h = std::min(1.0, a.hi);
  if (l > h) throw Error(ErrorCode::OutOfRange, "interval asin outside [-1,1]");
  return {down(std::asin(l), 2), up(std::asin(h), 2)};
}

inline Interval acos(const Interval& a) {
  double l = std::max(-1.0, a.lo), h = std::min(1.0, a.hi);
  if (l > h) throw Error(ErrorCode::OutOfRange, "interval acos outside [-1,1]");
  return {std::max(0.0, down(std::acos(h), 2)), up(std::acos(l), 2)};
}

inline Interval cbrt(const Interval& a) { return {down(std::cbrt(a.lo), 2), up(std::cbrt(a.hi), 2)}; }

inline Interval pi_rational(const PiRational& q) {
  return Interval(static_cast<double>(q.num)) * kPiI / Interval(static_cast<double>(q.den));
}

}  // namespace tetratile
