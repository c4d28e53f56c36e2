#pragma once

// The linear stationary equation psi'' + k^2(x) psi = 0: solving it as a
// first-order complex system, Wronskians, superpositions, and the
// finite-difference residual used to qualify solutions.

#include <type_traits>
#include <utility>
#include <vector>

#include "milne/complex.hpp"
#include "milne/finite_difference.hpp"
#include "milne/integrate.hpp"
#include "milne/potential.hpp"
#include "milne/report.hpp"

namespace milne {

/// Sampled complex solution: psi and psi' on a grid.
template <class R = double>
struct WaveFunction {
  Grid grid;
  std::vector<cplx<R>> psi;
  std::vector<cplx<R>> psi_prime;
};

namespace schrod_detail {

template <class R>
struct LinearRhs {
  const KSquaredProfile& k2;
  void operator()(double x, const std::array<cplx<R>, 2>& y,
                  std::array<cplx<R>, 2>& dy) const {
    R k2x;
    if constexpr (std::is_same_v<R, ddouble>)
      k2x = k2.eval_dd(x);
    else
      k2x = k2.eval(x);
    dy[0] = y[1];
    dy[1] = -(y[0] * k2x);
  }
};

template <class R>
WaveFunction<R> from_trajectory(const Trajectory<cplx<R>, 2>& tr) {
  WaveFunction<R> w;
  w.grid = tr.grid;
  w.psi.resize(tr.grid.n_points);
  w.psi_prime.resize(tr.grid.n_points);
  for (int i = 0; i < tr.grid.n_points; ++i) {
    w.psi[i] = tr.values[i][0];
    w.psi_prime[i] = tr.values[i][1];
  }
  return w;
}

} // namespace schrod_detail

/// Solve psi'' + k^2 psi = 0 with data (psi0, dpsi0) at grid.x_start.
template <class R = double>
WaveFunction<R> solve_linear(const KSquaredProfile& k2, cplx<R> psi0,
                             cplx<R> dpsi0, const Grid& grid,
                             const IntegratorConfig& cfg = {}) {
  if (mag(psi0) == 0.0 && mag(dpsi0) == 0.0)
    throw InvalidConfig("solve_linear: trivial initial data");
  schrod_detail::LinearRhs<R> rhs{k2};
  auto tr = integrate<cplx<R>, 2>(rhs, grid.x_start, {psi0, dpsi0}, grid, cfg);
  return schrod_detail::from_trajectory<R>(tr);
}

/// Same, with the data imposed at an interior grid node and the solution
/// integrated outward in both directions.
template <class R = double>
WaveFunction<R> solve_linear_at(const KSquaredProfile& k2, int node,
                                cplx<R> psi0, cplx<R> dpsi0, const Grid& grid,
                                const IntegratorConfig& cfg = {}) {
  if (mag(psi0) == 0.0 && mag(dpsi0) == 0.0)
    throw InvalidConfig("solve_linear_at: trivial initial data");
  schrod_detail::LinearRhs<R> rhs{k2};
  auto tr = integrate_from_node<cplx<R>, 2>(rhs, grid, node, {psi0, dpsi0}, cfg);
  return schrod_detail::from_trajectory<R>(tr);
}

template <class R>
struct WronskianStats {
  std::vector<cplx<R>> samples;
  cxd mean{};
  double max_deviation = 0.0; ///< max_i |W_i - mean|
  ResidualReport report;      ///< constancy of W across the grid
};

/// W(x_i) = f g' - f' g with constancy statistics. The products cancel at
/// the scale |f||g'|, so the R = ddouble instantiation is the one to trust
/// on exponentially growing solutions.
template <class R>
WronskianStats<R> wronskian(const WaveFunction<R>& f, const WaveFunction<R>& g,
                            double rel_tol = 1e-7) {
  require_same_grid(f.grid, g.grid, "wronskian");
  const int n = f.grid.n_points;
  WronskianStats<R> out;
  out.samples.resize(n);
  cplx<R> acc{};
  for (int i = 0; i < n; ++i) {
    out.samples[i] = f.psi[i] * g.psi_prime[i] - f.psi_prime[i] * g.psi[i];
    acc += out.samples[i];
  }
  cplx<R> mean = acc * (R(1.0) / R(double(n)));
  out.mean = to_cxd(mean);
  std::vector<double> dev(n);
  for (int i = 0; i < n; ++i) dev[i] = mag(out.samples[i] - mean);
  double tol = rel_tol * (1.0 + mag(mean));
  out.report = make_report("wronskian_constancy", dev, tol);
  out.max_deviation = out.report.max_abs;
  return out;
}

/// Pointwise alpha*f + beta*g for values and derivatives.
template <class R>
WaveFunction<R> superpose(const WaveFunction<R>& f, const WaveFunction<R>& g,
                          cplx<R> alpha, cplx<R> beta) {
  require_same_grid(f.grid, g.grid, "superpose");
  WaveFunction<R> out;
  out.grid = f.grid;
  const int n = f.grid.n_points;
  out.psi.resize(n);
  out.psi_prime.resize(n);
  for (int i = 0; i < n; ++i) {
    out.psi[i] = alpha * f.psi[i] + beta * g.psi[i];
    out.psi_prime[i] = alpha * f.psi_prime[i] + beta * g.psi_prime[i];
  }
  return out;
}

/// Finite-difference residual of psi'' + k^2 psi = 0. max_abs is raw; the
/// tolerance is rel_tol times the largest term magnitude on the grid.
template <class R>
ResidualReport linear_residual(const WaveFunction<R>& w, const KSquaredProfile& k2,
                               double rel_tol = 1e-6) {
  const int n = w.grid.n_points;
  std::vector<cxd> psi_d(n);
  for (int i = 0; i < n; ++i) psi_d[i] = to_cxd(w.psi[i]);
  auto d2 = fd_derivative(w.grid, psi_d, 2);
  std::vector<double> res(n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    double k2x = k2.eval(w.grid.x(i));
    cxd r = d2[i] + psi_d[i] * k2x;
    res[i] = mag(r);
    scale = std::max(scale, mag(d2[i]) + mag(psi_d[i] * k2x));
  }
  return make_report("schrodinger_fd_residual", res,
                     rel_tol * std::max(scale, 1e-300));
}

} // namespace milne
