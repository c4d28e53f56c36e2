#pragma once

// The amplitude-phase (Milne) representation psi = N u e^{iS} of solutions
// of psi'' + k^2 psi = 0:
//
//   amplitude:   u'' + k^2 u = c^2 / u^3,    u > 0
//   phase:       S' = c / u^2
//   identity:    psi' u - u' psi = i c N e^{iS}
//   constraint:  K = c^2 (psi/u)^2 + (psi' u - u' psi)^2
//
// For any consistent triple the two terms of K are equal and opposite
// unit-scale quantities, so K vanishes identically; evaluate_K measures how
// well a sampled triple realizes that cancellation.

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

#include "milne/complex.hpp"
#include "milne/finite_difference.hpp"
#include "milne/hermite.hpp"
#include "milne/integrate.hpp"
#include "milne/potential.hpp"
#include "milne/report.hpp"
#include "milne/schrodinger.hpp"

namespace milne {

/// Positive amplitude samples with the Milne constant c of S' = c/u^2.
/// c = 0 marks the degenerate real-solution case (constant phase).
template <class R = double>
struct MilneSolution {
  Grid grid;
  std::vector<R> u;
  std::vector<R> u_prime;
  R c{};
};

/// Continuous (unwrapped) phase samples with S' stored exactly as c/u^2.
struct PhaseFunction {
  Grid grid;
  std::vector<double> S;
  std::vector<double> S_prime;
};

/// Normalization constant plus compatible amplitude and phase.
struct PolarTriple {
  double N = 1.0;
  MilneSolution<double> amp;
  PhaseFunction phase;
};

namespace polar_detail {

template <class R>
R amp_hypot(R a, R b) {
  return sqrt(a * a + b * b);
}
inline double amp_hypot(double a, double b) { return std::hypot(a, b); }

} // namespace polar_detail

/// Principal value of the argument increment, in [-pi, pi].
inline double principal_delta(double a) {
  return std::remainder(a, 2.0 * M_PI);
}

/// Continuous argument of complex samples, anchored at the principal value
/// of the first sample. When enforce_resolution is set, an increment within
/// 0.1% of pi raises GridTooCoarse (the branch can no longer be tracked).
inline std::vector<double> unwrapped_argument(const std::vector<cxd>& psi,
                                              bool enforce_resolution = true) {
  std::vector<double> S(psi.size());
  if (psi.empty()) return S;
  S[0] = std::atan2(psi[0].im, psi[0].re);
  double prev = S[0];
  for (std::size_t i = 1; i < psi.size(); ++i) {
    double raw = std::atan2(psi[i].im, psi[i].re);
    double d = principal_delta(raw - prev);
    if (enforce_resolution && std::abs(d) >= 0.999 * M_PI)
      throw GridTooCoarse("unwrapped_argument: phase advances by ~pi per "
                          "sample; refine the grid");
    S[i] = S[i - 1] + d;
    prev = raw;
  }
  return S;
}

/// Solve the Milne equation u'' + k^2 u = c^2/u^3 from (u0, du0) > 0.
inline MilneSolution<double> solve_milne(const KSquaredProfile& k2, double c,
                                         double u0, double du0, const Grid& grid,
                                         const IntegratorConfig& cfg = {}) {
  if (!(u0 > 0.0)) throw InvalidConfig("solve_milne: u0 must be positive");
  const double c2 = c * c;
  bool collapsed = false;
  auto rhs = [&](double x, const std::array<double, 2>& y,
                 std::array<double, 2>& dy) {
    if (y[0] <= 0.0) {
      collapsed = true;
      dy[0] = dy[1] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    dy[0] = y[1];
    double u3 = y[0] * y[0] * y[0];
    dy[1] = c2 / u3 - k2.eval(x) * y[0];
  };

  Trajectory<double, 2> tr;
  try {
    tr = integrate<double, 2>(rhs, grid.x_start, {u0, du0}, grid, cfg);
  } catch (const NonFiniteState&) {
    if (collapsed)
      throw AmplitudeCollapse("solve_milne: amplitude reached zero");
    throw;
  } catch (const StepSizeUnderflow&) {
    if (collapsed)
      throw AmplitudeCollapse("solve_milne: amplitude reached zero");
    throw;
  }

  MilneSolution<double> out;
  out.grid = grid;
  out.c = c;
  out.u.resize(grid.n_points);
  out.u_prime.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    out.u[i] = tr.values[i][0];
    out.u_prime[i] = tr.values[i][1];
    if (!(out.u[i] > 0.0))
      throw AmplitudeCollapse("solve_milne: non-positive amplitude at node " +
                              std::to_string(i));
  }
  return out;
}

/// Finite-difference residual of u'' + k^2 u = c^2/u^3. This is also the
/// amplitude-side polar equation with S' eliminated through S' = c/u^2.
/// The R = ddouble instantiation keeps the carrier noise eps*u/h^2 below
/// the truncation error on exponentially growing amplitudes.
template <class R = double>
ResidualReport milne_residual(const MilneSolution<R>& amp,
                              const KSquaredProfile& k2, double rel_tol = 1e-6) {
  const int n = amp.grid.n_points;
  auto d2 = fd_derivative(amp.grid, amp.u, 2);
  std::vector<double> res(n);
  double scale = 0.0;
  const R c2 = amp.c * amp.c;
  for (int i = 0; i < n; ++i) {
    R u = amp.u[i];
    R k2u;
    if constexpr (std::is_same_v<R, ddouble>)
      k2u = k2.eval_dd(amp.grid.x(i)) * u;
    else
      k2u = k2.eval(amp.grid.x(i)) * u;
    R barrier = c2 / (u * u * u);
    res[i] = std::abs(to_double(d2[i] + k2u - barrier));
    scale = std::max(scale, std::abs(to_double(d2[i])) +
                                std::abs(to_double(k2u)) +
                                std::abs(to_double(barrier)));
  }
  return make_report("milne_eq_residual", res, rel_tol * std::max(scale, 1e-300));
}

/// Finite-difference residual of the phase-side polar equation
/// u S'' + 2 u' S' = 0 with S' taken in its quadrature form c/u^2.
template <class R = double>
ResidualReport phase_equation_residual(const MilneSolution<R>& amp,
                                       double rel_tol = 1e-6) {
  const int n = amp.grid.n_points;
  std::vector<R> sp(n);
  for (int i = 0; i < n; ++i) sp[i] = amp.c / (amp.u[i] * amp.u[i]);
  auto dsp = fd_derivative(amp.grid, sp, 1);
  std::vector<double> res(n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    R a = amp.u[i] * dsp[i];
    R b = amp.u_prime[i] * sp[i] * 2.0;
    res[i] = std::abs(to_double(a + b));
    scale = std::max(scale,
                     std::abs(to_double(a)) + std::abs(to_double(b)));
  }
  return make_report("polar_phase_eq", res, rel_tol * std::max(scale, 1e-300));
}

/// Milne amplitude from two independent real solutions of the same linear
/// equation: u = sqrt(f^2 + g^2), u' = (f f' + g g')/u, c = W(f, g).
template <class R = double>
MilneSolution<R> amplitude_from_pair(const WaveFunction<R>& f,
                                     const WaveFunction<R>& g) {
  require_same_grid(f.grid, g.grid, "amplitude_from_pair");
  const int n = f.grid.n_points;

  double re_scale = 0.0, im_scale = 0.0, fmag = 0.0, gmag = 0.0;
  for (int i = 0; i < n; ++i) {
    re_scale = std::max({re_scale, std::abs(to_double(f.psi[i].re)),
                         std::abs(to_double(g.psi[i].re))});
    im_scale = std::max({im_scale, std::abs(to_double(f.psi[i].im)),
                         std::abs(to_double(g.psi[i].im))});
    fmag = std::max(fmag, std::abs(to_double(f.psi[i].re)) +
                              std::abs(to_double(f.psi_prime[i].re)));
    gmag = std::max(gmag, std::abs(to_double(g.psi[i].re)) +
                              std::abs(to_double(g.psi_prime[i].re)));
  }
  if (im_scale > 1e-9 * std::max(re_scale, 1e-300))
    throw InvalidConfig("amplitude_from_pair: expected a real-valued pair");

  R acc{};
  std::vector<R> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = f.psi[i].re * g.psi_prime[i].re - f.psi_prime[i].re * g.psi[i].re;
    acc += w[i];
  }
  R c = acc / R(double(n));
  if (std::abs(to_double(c)) <= 1e-12 * fmag * gmag)
    throw DegeneratePair("amplitude_from_pair: Wronskian below threshold");

  MilneSolution<R> out;
  out.grid = f.grid;
  out.c = c;
  out.u.resize(n);
  out.u_prime.resize(n);
  for (int i = 0; i < n; ++i) {
    R fv = f.psi[i].re, gv = g.psi[i].re;
    R fp = f.psi_prime[i].re, gp = g.psi_prime[i].re;
    out.u[i] = polar_detail::amp_hypot(fv, gv);
    out.u_prime[i] = (fv * fp + gv * gp) / out.u[i];
  }
  return out;
}

/// Quadrature of S' = c/u^2 from S(x_start) = S0, using the cubic Hermite
/// interpolant of the sampled amplitude between nodes. S' is stored as
/// c/u_i^2 exactly. With c = 0 the phase is constant.
inline PhaseFunction integrate_phase(const MilneSolution<double>& amp, double S0,
                                     const IntegratorConfig& cfg = {}) {
  const int n = amp.grid.n_points;
  PhaseFunction out;
  out.grid = amp.grid;
  out.S.assign(n, S0);
  out.S_prime.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (!(amp.u[i] > 0.0))
      throw InvalidConfig("integrate_phase: amplitude must be positive");
  if (amp.c == 0.0) return out;

  CubicHermite<double> uh(amp.grid, amp.u, amp.u_prime);
  const double c = amp.c;
  auto rhs = [&](double x, const std::array<double, 1>& /*y*/,
                 std::array<double, 1>& dy) {
    double u = uh(x);
    dy[0] = c / (u * u);
  };
  auto tr = integrate<double, 1>(rhs, amp.grid.x_start, {S0}, amp.grid, cfg);
  for (int i = 0; i < n; ++i) {
    out.S[i] = tr.values[i][0];
    out.S_prime[i] = c / (amp.u[i] * amp.u[i]);
  }
  return out;
}

/// psi = N u e^{iS}; psi' by the product rule, psi' = N(u' + i u S')e^{iS}.
inline WaveFunction<double> compose_psi(const PolarTriple& t) {
  require_same_grid(t.amp.grid, t.phase.grid, "compose_psi");
  if (!(t.N > 0.0)) throw InvalidConfig("compose_psi: N must be positive");
  const int n = t.amp.grid.n_points;
  WaveFunction<double> out;
  out.grid = t.amp.grid;
  out.psi.resize(n);
  out.psi_prime.resize(n);
  for (int i = 0; i < n; ++i) {
    cxd ph = unit_phasor(t.phase.S[i]);
    out.psi[i] = ph * (t.N * t.amp.u[i]);
    cxd radial{t.amp.u_prime[i], t.amp.u[i] * t.phase.S_prime[i]};
    out.psi_prime[i] = ph * radial * t.N;
  }
  return out;
}

/// Recover (N, u, S, c) from a nodeless sampled psi: u = |psi|/N, S the
/// unwrapped argument anchored in (-pi, pi], c the mean of u^2 S'.
inline PolarTriple polar_decompose(const WaveFunction<double>& psi, double N = 1.0) {
  if (!(N > 0.0)) throw InvalidConfig("polar_decompose: N must be positive");
  const int n = psi.grid.n_points;
  double max_abs = 0.0, min_abs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double a = mag(psi.psi[i]);
    max_abs = std::max(max_abs, a);
    min_abs = std::min(min_abs, a);
  }
  if (min_abs <= 1e-12 * max_abs)
    throw NodeEncountered("polar_decompose: |psi| reaches zero; no smooth "
                          "polar form with positive amplitude exists");

  PolarTriple t;
  t.N = N;
  t.amp.grid = psi.grid;
  t.phase.grid = psi.grid;
  t.amp.u.resize(n);
  t.amp.u_prime.resize(n);
  t.phase.S = unwrapped_argument(psi.psi);
  t.phase.S_prime.resize(n);
  double c_acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double a = mag(psi.psi[i]);
    cxd cross = conj(psi.psi[i]) * psi.psi_prime[i];
    t.amp.u[i] = a / N;
    t.amp.u_prime[i] = cross.re / (a * N);
    t.phase.S_prime[i] = cross.im / (a * a);
    c_acc += cross.im / (N * N); // S' u^2
  }
  t.amp.c = c_acc / n;
  return t;
}

/// Samples of K = c^2 (psi/u)^2 + (psi' u - u' psi)^2 plus a report of
/// max|K| against rel_tol times the magnitude of the cancelling terms.
template <class R>
struct KEvaluation {
  Grid grid;
  std::vector<cplx<R>> K;
  double term1_max = 0.0; ///< max_i |c^2 (psi_i/u_i)^2|
  ResidualReport report;
};

template <class R = double>
KEvaluation<R> evaluate_K(const WaveFunction<R>& psi, const MilneSolution<R>& amp,
                          double rel_tol = 1e-7) {
  require_same_grid(psi.grid, amp.grid, "evaluate_K");
  const int n = psi.grid.n_points;
  KEvaluation<R> out;
  out.grid = psi.grid;
  out.K.resize(n);
  const R c2 = amp.c * amp.c;
  std::vector<double> absK(n);
  for (int i = 0; i < n; ++i) {
    cplx<R> q = psi.psi[i] / amp.u[i];
    cplx<R> w = psi.psi_prime[i] * amp.u[i] - psi.psi[i] * amp.u_prime[i];
    cplx<R> term1 = q * q * c2;
    out.K[i] = term1 + w * w;
    absK[i] = mag(out.K[i]);
    out.term1_max = std::max(out.term1_max, mag(term1));
  }
  out.report = make_report("K_vanishing", absK,
                           rel_tol * std::max(out.term1_max, 1e-300));
  return out;
}

/// Residual of psi' u - u' psi = i c N e^{iS} over the grid, reported
/// against rel_tol * |c| N.
inline ResidualReport wronskian_identity_residual(const PolarTriple& t,
                                                  const WaveFunction<double>& psi,
                                                  double rel_tol = 1e-8) {
  require_same_grid(t.amp.grid, psi.grid, "wronskian_identity_residual");
  const int n = psi.grid.n_points;
  std::vector<double> res(n);
  for (int i = 0; i < n; ++i) {
    cxd w = psi.psi_prime[i] * t.amp.u[i] - psi.psi[i] * t.amp.u_prime[i];
    cxd rhs = cxd{0.0, 1.0} * unit_phasor(t.phase.S[i]) * (t.amp.c * t.N);
    res[i] = mag(w - rhs);
  }
  double scale = std::max(std::abs(t.amp.c) * t.N, 1e-300);
  return make_report("wronskian_identity", res, rel_tol * scale);
}

/// Finite-difference residuals of the polar-form equations
///   u'' + [k^2 - S'^2] u = 0   and   u S'' + 2 u' S' = 0.
/// Tolerances are rel_tol times the largest term magnitude of each equation.
inline std::pair<ResidualReport, ResidualReport>
polar_equation_residuals(const PolarTriple& t, const KSquaredProfile& k2,
                         double rel_tol = 1e-6) {
  require_same_grid(t.amp.grid, t.phase.grid, "polar_equation_residuals");
  const Grid& grid = t.amp.grid;
  const int n = grid.n_points;

  auto d2u = fd_derivative(grid, t.amp.u, 2);
  auto dSp = fd_derivative(grid, t.phase.S_prime, 1);

  std::vector<double> ra(n), rp(n);
  double sa = 0.0, sp = 0.0;
  for (int i = 0; i < n; ++i) {
    double k2x = k2.eval(grid.x(i));
    double spi = t.phase.S_prime[i];
    double amp_terms[3] = {d2u[i], k2x * t.amp.u[i], -spi * spi * t.amp.u[i]};
    ra[i] = std::abs(amp_terms[0] + amp_terms[1] + amp_terms[2]);
    sa = std::max(sa, std::abs(amp_terms[0]) + std::abs(amp_terms[1]) +
                          std::abs(amp_terms[2]));
    double ph_terms[2] = {t.amp.u[i] * dSp[i], 2.0 * t.amp.u_prime[i] * spi};
    rp[i] = std::abs(ph_terms[0] + ph_terms[1]);
    sp = std::max(sp, std::abs(ph_terms[0]) + std::abs(ph_terms[1]));
  }
  auto amp_report =
      make_report("polar_amplitude_eq", ra, rel_tol * std::max(sa, 1e-300));
  auto phase_report =
      make_report("polar_phase_eq", rp, rel_tol * std::max(sp, 1e-300));
  return {amp_report, phase_report};
}

/// Constancy of u^2 S' (= c), the quadrature form of the phase equation.
inline ResidualReport polar_compatibility_report(const PolarTriple& t,
                                                 double rel_tol = 1e-9) {
  const int n = t.amp.grid.n_points;
  std::vector<double> res(n);
  for (int i = 0; i < n; ++i)
    res[i] = std::abs(t.phase.S_prime[i] * t.amp.u[i] * t.amp.u[i] - t.amp.c);
  return make_report("phase_quadrature_constant", res,
                     rel_tol * std::max(std::abs(t.amp.c), 1e-300));
}

} // namespace milne
