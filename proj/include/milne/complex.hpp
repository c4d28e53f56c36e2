#pragma once

// Minimal complex type usable with both double and ddouble scalars.
// std::complex is only specified for the builtin floating types, so the
// extended-precision paths need their own.

#include <cmath>

#include "milne/ddouble.hpp"

namespace milne {

template <class R>
struct cplx {
  R re{};
  R im{};

  constexpr cplx() = default;
  constexpr cplx(R r) : re(r), im(R(0.0)) {}
  constexpr cplx(R r, R i) : re(r), im(i) {}
};

using cxd = cplx<double>;
using cxdd = cplx<ddouble>;

template <class R> cplx<R> operator+(cplx<R> a, cplx<R> b) { return {a.re + b.re, a.im + b.im}; }
template <class R> cplx<R> operator-(cplx<R> a, cplx<R> b) { return {a.re - b.re, a.im - b.im}; }
template <class R> cplx<R> operator-(cplx<R> a) { return {-a.re, -a.im}; }

template <class R> cplx<R> operator*(cplx<R> a, cplx<R> b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R> cplx<R> operator*(cplx<R> a, R s) { return {a.re * s, a.im * s}; }
template <class R> cplx<R> operator*(R s, cplx<R> a) { return a * s; }
inline cplx<ddouble> operator*(cplx<ddouble> a, double s) { return {a.re * s, a.im * s}; }
inline cplx<double> operator*(cplx<double> a, double s) { return {a.re * s, a.im * s}; }

template <class R> cplx<R> operator/(cplx<R> a, R s) { return {a.re / s, a.im / s}; }

template <class R> cplx<R> operator/(cplx<R> a, cplx<R> b) {
  R d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

template <class R> cplx<R>& operator+=(cplx<R>& a, cplx<R> b) { return a = a + b; }
template <class R> cplx<R>& operator-=(cplx<R>& a, cplx<R> b) { return a = a - b; }

template <class R> cplx<R> conj(cplx<R> a) { return {a.re, -a.im}; }

template <class R> R norm_sq(cplx<R> a) { return a.re * a.re + a.im * a.im; }

/// Exact-scalar modulus (dd accurate for R = ddouble).
template <class R> R modulus(cplx<R> a) { return sqrt(norm_sq(a)); }
inline double modulus(cplx<double> a) { return std::hypot(a.re, a.im); }

inline cxd to_cxd(cplx<double> a) { return a; }
inline cxd to_cxd(cplx<ddouble> a) { return {to_double(a.re), to_double(a.im)}; }

inline cplx<ddouble> promote(cplx<double> a) { return {ddouble(a.re), ddouble(a.im)}; }

/// Magnitude as plain double, for error norms and reporting.
inline double mag(double a) { return std::abs(a); }
inline double mag(ddouble a) { return std::abs(to_double(a)); }
template <class R> double mag(cplx<R> a) { return std::hypot(to_double(a.re), to_double(a.im)); }

inline bool all_finite(double a) { return std::isfinite(a); }
inline bool all_finite(ddouble a) { return isfinite(a); }
template <class R> bool all_finite(cplx<R> a) { return all_finite(a.re) && all_finite(a.im); }

/// e^{i s} for double phase.
inline cxd unit_phasor(double s) { return {std::cos(s), std::sin(s)}; }

} // namespace milne
