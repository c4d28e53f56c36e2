#pragma once

// Double-double arithmetic: a number held as an unevaluated sum of two
// doubles, giving ~31 significant decimal digits. The verification
// identities in this library subtract products of exponentially large
// solution samples down to O(1) results; plain double loses those results
// entirely once |psi| exceeds ~1e4, so the cancellation-critical pipelines
// run on this type. Kernels follow Dekker (1971) and the QD library of
// Hida, Li and Bailey. Requires strict IEEE double semantics (no
// -ffast-math) and a correctly rounded std::fma.

#include <cmath>
#include <limits>

namespace milne {

struct ddouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr ddouble() = default;
  constexpr ddouble(double x) : hi(x), lo(0.0) {}
  constexpr ddouble(double h, double l) : hi(h), lo(l) {}
};

namespace dd_detail {

inline ddouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

// requires |a| >= |b| or a == 0
inline ddouble quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline ddouble two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

} // namespace dd_detail

inline ddouble operator+(ddouble a, ddouble b) {
  ddouble s = dd_detail::two_sum(a.hi, b.hi);
  ddouble t = dd_detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd_detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline ddouble operator-(ddouble a) { return {-a.hi, -a.lo}; }
inline ddouble operator-(ddouble a, ddouble b) { return a + (-b); }

inline ddouble operator*(ddouble a, ddouble b) {
  ddouble p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline ddouble operator*(ddouble a, double b) {
  ddouble p = dd_detail::two_prod(a.hi, b);
  p.lo += a.lo * b;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}
inline ddouble operator*(double a, ddouble b) { return b * a; }

inline ddouble operator/(ddouble a, ddouble b) {
  double q1 = a.hi / b.hi;
  ddouble r = a - b * ddouble(q1);
  double q2 = r.hi / b.hi;
  r = r - b * ddouble(q2);
  double q3 = r.hi / b.hi;
  ddouble q = dd_detail::quick_two_sum(q1, q2);
  return q + ddouble(q3);
}

inline ddouble& operator+=(ddouble& a, ddouble b) { return a = a + b; }
inline ddouble& operator-=(ddouble& a, ddouble b) { return a = a - b; }
inline ddouble& operator*=(ddouble& a, ddouble b) { return a = a * b; }
inline ddouble& operator/=(ddouble& a, ddouble b) { return a = a / b; }

inline bool operator==(ddouble a, ddouble b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(ddouble a, ddouble b) { return !(a == b); }
inline bool operator<(ddouble a, ddouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(ddouble a, ddouble b) { return b < a; }
inline bool operator<=(ddouble a, ddouble b) { return !(b < a); }
inline bool operator>=(ddouble a, ddouble b) { return !(a < b); }

inline double to_double(ddouble a) { return a.hi + a.lo; }
inline double to_double(double a) { return a; }

inline ddouble abs(ddouble a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline bool isfinite(ddouble a) { return std::isfinite(a.hi) && std::isfinite(a.lo); }

inline ddouble sqrt(ddouble a) {
  if (a.hi == 0.0 && a.lo == 0.0) return {};
  // one dd Newton step on the double estimate; relative error O(eps_dd)
  ddouble r(std::sqrt(a.hi));
  return (r + a / r) * 0.5;
}

/// a*b - c*d with the full cancellation resolved at dd accuracy.
inline ddouble cross_difference(ddouble a, ddouble b, ddouble c, ddouble d) {
  return a * b - c * d;
}

} // namespace milne
