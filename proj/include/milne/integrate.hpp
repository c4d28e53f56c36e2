#pragma once

// Initial-value-problem integration on a uniform output grid.
//
// Two methods:
//  * FixedRk4    - classical 4th-order Runge-Kutta landing exactly on the
//                  grid nodes (optionally substepping each interval when
//                  max_step is set). Two solutions of the same linear
//                  system advanced this way share one discrete flow map,
//                  which keeps their Wronskian constant to the drift of
//                  det(step matrix) alone; the verification pipelines rely
//                  on that.
//  * Adaptive45  - Dormand-Prince 5(4) embedded pair with the standard
//                  4th-order dense-output interpolant evaluated at the
//                  grid nodes.
//
// States are std::array<S, N> where S is double, ddouble, or cplx of
// either. Step-size control always runs in plain double on magnitudes.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "milne/complex.hpp"
#include "milne/errors.hpp"
#include "milne/grid.hpp"

namespace milne {

enum class Method { FixedRk4, Adaptive45 };

struct IntegratorConfig {
  Method method = Method::Adaptive45;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
};

inline void validate(const IntegratorConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
    throw InvalidConfig("IntegratorConfig: tolerances must be positive");
  if (!(cfg.max_step > 0.0))
    throw InvalidConfig("IntegratorConfig: max_step must be positive");
}

/// Solution samples on a grid. derivatives[i] is the right-hand side
/// evaluated at (x_i, values[i]) and is bitwise reproducible.
template <class S, int N>
struct Trajectory {
  Grid grid;
  std::vector<std::array<S, N>> values;
  std::vector<std::array<S, N>> derivatives;
  static constexpr int state_dim = N;
};

namespace ode_detail {

template <class S, int N>
bool finite_state(const std::array<S, N>& y) {
  for (const auto& v : y)
    if (!all_finite(v)) return false;
  return true;
}

template <class S, int N, class F>
void rk4_step(F& rhs, double x, double h, const std::array<S, N>& y,
              std::array<S, N>& out) {
  std::array<S, N> k1, k2, k3, k4, t;
  rhs(x, y, k1);
  for (int i = 0; i < N; ++i) t[i] = y[i] + k1[i] * (h * 0.5);
  rhs(x + 0.5 * h, t, k2);
  for (int i = 0; i < N; ++i) t[i] = y[i] + k2[i] * (h * 0.5);
  rhs(x + 0.5 * h, t, k3);
  for (int i = 0; i < N; ++i) t[i] = y[i] + k3[i] * h;
  rhs(x + h, t, k4);
  for (int i = 0; i < N; ++i)
    out[i] = y[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
}

// Dormand-Prince 5(4) tableau.
inline constexpr double A21 = 1.0 / 5;
inline constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
inline constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
inline constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                        A53 = 64448.0 / 6561, A54 = -212.0 / 729;
inline constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33,
                        A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                        A65 = -5103.0 / 18656;
inline constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                        B5 = -2187.0 / 6784, B6 = 11.0 / 84;
inline constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                        E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
inline constexpr double D1 = -12715105075.0 / 11282082432.0,
                        D3 = 87487479700.0 / 32700410799.0,
                        D4 = -10690763975.0 / 1880347072.0,
                        D5 = 701980252875.0 / 199316789632.0,
                        D6 = -1453857185.0 / 822651844.0,
                        D7 = 69997945.0 / 29380423.0;

template <class S, int N>
struct DenseSegment {
  double x0 = 0, h = 0;
  std::array<S, N> r1, r2, r3, r4, r5;

  void eval(double x, std::array<S, N>& out) const {
    double th = (x - x0) / h;
    double th1 = 1.0 - th;
    for (int i = 0; i < N; ++i)
      out[i] = r1[i] + (r2[i] + (r3[i] + (r4[i] + r5[i] * th1) * th) * th1) * th;
  }
};

/// Advance with DOPRI5 from xs.front() to xs.back() (either direction),
/// filling `fill` for every target abscissa passed. fill(j, y) is called
/// exactly once per j = 1..m-1 in order; the state at xs.front() is y0.
template <class S, int N, class F, class Fill>
void dopri5_drive(F& rhs, const std::vector<double>& xs,
                  const std::array<S, N>& y0, const IntegratorConfig& cfg,
                  Fill&& fill) {
  const double span = xs.back() - xs.front();
  const double dir = span > 0 ? 1.0 : -1.0;
  const double eps = std::numeric_limits<double>::epsilon();

  std::array<S, N> y = y0, ynew, yerr, t;
  std::array<S, N> k1, k2, k3, k4, k5, k6, k7;
  double x = xs.front();
  std::size_t next = 1;

  rhs(x, y, k1);
  double h = dir * std::min({cfg.max_step, std::abs(span) / 100.0, 1.0});
  if (h == 0.0) h = dir * std::abs(span) / 100.0;

  std::int64_t steps = 0;
  const std::int64_t step_budget = 20'000'000;

  while (next < xs.size()) {
    if (++steps > step_budget)
      throw StepSizeUnderflow("adaptive integration exceeded step budget");
    double remaining = xs.back() - x;
    bool final_step = std::abs(h) >= std::abs(remaining);
    if (final_step) h = remaining;
    if (std::abs(h) < 4.0 * eps * std::max(1.0, std::abs(x)))
      throw StepSizeUnderflow("adaptive step size underflow at x = " +
                              std::to_string(x));

    for (int i = 0; i < N; ++i) t[i] = y[i] + k1[i] * (A21 * h);
    rhs(x + h / 5.0, t, k2);
    for (int i = 0; i < N; ++i) t[i] = y[i] + k1[i] * (A31 * h) + k2[i] * (A32 * h);
    rhs(x + 3.0 / 10 * h, t, k3);
    for (int i = 0; i < N; ++i)
      t[i] = y[i] + k1[i] * (A41 * h) + k2[i] * (A42 * h) + k3[i] * (A43 * h);
    rhs(x + 4.0 / 5 * h, t, k4);
    for (int i = 0; i < N; ++i)
      t[i] = y[i] + k1[i] * (A51 * h) + k2[i] * (A52 * h) + k3[i] * (A53 * h) +
             k4[i] * (A54 * h);
    rhs(x + 8.0 / 9 * h, t, k5);
    for (int i = 0; i < N; ++i)
      t[i] = y[i] + k1[i] * (A61 * h) + k2[i] * (A62 * h) + k3[i] * (A63 * h) +
             k4[i] * (A64 * h) + k5[i] * (A65 * h);
    rhs(x + h, t, k6);
    for (int i = 0; i < N; ++i)
      ynew[i] = y[i] + k1[i] * (B1 * h) + k3[i] * (B3 * h) + k4[i] * (B4 * h) +
                k5[i] * (B5 * h) + k6[i] * (B6 * h);
    rhs(x + h, ynew, k7);
    for (int i = 0; i < N; ++i)
      yerr[i] = k1[i] * (E1 * h) + k3[i] * (E3 * h) + k4[i] * (E4 * h) +
                k5[i] * (E5 * h) + k6[i] * (E6 * h) + k7[i] * (E7 * h);

    double err = 0.0;
    bool bad = !finite_state<S, N>(ynew);
    if (!bad) {
      for (int i = 0; i < N; ++i) {
        double scale = cfg.abs_tol +
                       cfg.rel_tol * std::max(mag(y[i]), mag(ynew[i]));
        double e = mag(yerr[i]) / scale;
        err += e * e;
      }
      err = std::sqrt(err / N);
      bad = !std::isfinite(err);
    }

    if (bad) {
      h *= 0.25;
      continue;
    }

    if (err <= 1.0) {
      // accepted: fill dense output for targets in (x, x+h]
      DenseSegment<S, N> seg;
      bool seg_ready = false;
      double xnew = final_step ? xs.back() : x + h;
      while (next < xs.size() &&
             (xs[next] - xnew) * dir <= 0.0) {
        if (xs[next] == xnew) {
          fill(next, ynew);
        } else {
          if (!seg_ready) {
            seg.x0 = x;
            seg.h = h;
            for (int i = 0; i < N; ++i) {
              S ydiff = ynew[i] - y[i];
              S bspl = k1[i] * h - ydiff;
              seg.r1[i] = y[i];
              seg.r2[i] = ydiff;
              seg.r3[i] = bspl;
              seg.r4[i] = ydiff - k7[i] * h - bspl;
              seg.r5[i] = (k1[i] * D1 + k3[i] * D3 + k4[i] * D4 + k5[i] * D5 +
                           k6[i] * D6 + k7[i] * D7) * h;
            }
            seg_ready = true;
          }
          seg.eval(xs[next], t);
          fill(next, t);
        }
        ++next;
      }
      x = xnew;
      y = ynew;
      k1 = k7; // FSAL
      double fac = 0.9 * std::pow(err > 1e-30 ? err : 1e-30, -0.2);
      h *= std::min(5.0, std::max(0.2, fac));
      if (std::abs(h) > cfg.max_step) h = dir * cfg.max_step;
    } else {
      double fac = 0.9 * std::pow(err, -0.2);
      h *= std::max(0.2, fac);
    }
  }
}

/// Fixed-step RK4 over the target abscissae; each interval is split into
/// ceil(|interval| / max_step) equal substeps.
template <class S, int N, class F, class Fill>
void rk4_drive(F& rhs, const std::vector<double>& xs,
               const std::array<S, N>& y0, const IntegratorConfig& cfg,
               Fill&& fill) {
  std::array<S, N> y = y0, ynext;
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    double a = xs[j], b = xs[j + 1];
    int nsub = 1;
    if (std::isfinite(cfg.max_step)) {
      double want = std::ceil(std::abs(b - a) / cfg.max_step);
      if (want > 1e6)
        throw InvalidConfig("integrate: max_step asks for over 1e6 substeps "
                            "per grid interval");
      nsub = std::max(1, (int)want);
    }
    double h = (b - a) / nsub;
    for (int s = 0; s < nsub; ++s) {
      rk4_step<S, N>(rhs, a + s * h, h, y, ynext);
      y = ynext;
      if (!finite_state<S, N>(y))
        throw NonFiniteState("non-finite state at x = " +
                             std::to_string(a + (s + 1) * h));
    }
    fill(j + 1, y);
  }
}

template <class S, int N, class F, class Fill>
void drive(F& rhs, const std::vector<double>& xs, const std::array<S, N>& y0,
           const IntegratorConfig& cfg, Fill&& fill) {
  if (cfg.method == Method::FixedRk4)
    rk4_drive<S, N>(rhs, xs, y0, cfg, fill);
  else
    dopri5_drive<S, N>(rhs, xs, y0, cfg, fill);
}

} // namespace ode_detail

/// Integrate y' = rhs(x, y) from x0 = grid.x_start across the grid.
template <class S, int N, class F>
Trajectory<S, N> integrate(F&& rhs, double x0, const std::array<S, N>& y0,
                           const Grid& grid, const IntegratorConfig& cfg = {}) {
  validate(cfg);
  if (x0 != grid.x_start)
    throw InvalidConfig("integrate: x0 must equal grid.x_start");

  Trajectory<S, N> out;
  out.grid = grid;
  out.values.resize(grid.n_points);
  out.derivatives.resize(grid.n_points);
  out.values[0] = y0;

  auto xs = grid.points();
  ode_detail::drive<S, N>(rhs, xs, y0, cfg,
                          [&](std::size_t j, const std::array<S, N>& y) {
                            out.values[j] = y;
                          });

  for (int i = 0; i < grid.n_points; ++i) {
    if (!ode_detail::finite_state<S, N>(out.values[i]))
      throw NonFiniteState("non-finite sample at grid node " + std::to_string(i));
    rhs(grid.x(i), out.values[i], out.derivatives[i]);
  }
  return out;
}

/// Integrate from an interior grid node outward in both directions.
template <class S, int N, class F>
Trajectory<S, N> integrate_from_node(F&& rhs, const Grid& grid, int node,
                                     const std::array<S, N>& y0,
                                     const IntegratorConfig& cfg = {}) {
  validate(cfg);
  if (node < 0 || node >= grid.n_points)
    throw InvalidConfig("integrate_from_node: node out of range");

  Trajectory<S, N> out;
  out.grid = grid;
  out.values.resize(grid.n_points);
  out.derivatives.resize(grid.n_points);
  out.values[node] = y0;

  if (node + 1 < grid.n_points) {
    std::vector<double> xs(grid.n_points - node);
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = grid.x(node + (int)j);
    ode_detail::drive<S, N>(rhs, xs, y0, cfg,
                            [&](std::size_t j, const std::array<S, N>& y) {
                              out.values[node + j] = y;
                            });
  }
  if (node > 0) {
    std::vector<double> xs(node + 1);
    for (int j = 0; j <= node; ++j) xs[j] = grid.x(node - j);
    ode_detail::drive<S, N>(rhs, xs, y0, cfg,
                            [&](std::size_t j, const std::array<S, N>& y) {
                              out.values[node - j] = y;
                            });
  }

  for (int i = 0; i < grid.n_points; ++i) {
    if (!ode_detail::finite_state<S, N>(out.values[i]))
      throw NonFiniteState("non-finite sample at grid node " + std::to_string(i));
    rhs(grid.x(i), out.values[i], out.derivatives[i]);
  }
  return out;
}

} // namespace milne
