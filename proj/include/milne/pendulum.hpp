#pragma once

// The nonlinear Milne-type equation psi'' + k^2 psi = c1^2/psi^3 admits
// unit-modulus solutions psi = e^{iS} whenever the phase solves the
// pendulum-type equation
//
//     S'' + c1^2 sin(4S) = 0,
//
// with the coefficient closed as k^2 = S'^2 + c1^2 cos(4S). For such
// solutions the quantity calK = c1^2 (u/psi)^2 = c1^2 e^{-2iS}/N^2 has
// constant modulus but is itself constant only when S is: a nonconstant
// phase is an explicit counterexample to calK being conserved.

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "milne/amplitude_phase.hpp"
#include "milne/complex.hpp"
#include "milne/finite_difference.hpp"
#include "milne/hermite.hpp"
#include "milne/integrate.hpp"
#include "milne/potential.hpp"
#include "milne/report.hpp"
#include "milne/schrodinger.hpp"

namespace milne {

/// Phase solution of S'' + c1^2 sin(4S) = 0. The first integral
/// E_p = S'^2/2 - (c1^2/4) cos(4S) is conserved along solutions.
struct PendulumPhase {
  Grid grid;
  std::vector<double> S;
  std::vector<double> S_prime;
  double c1 = 1.0;
};

inline double pendulum_energy(const PendulumPhase& p, int i) {
  return 0.5 * p.S_prime[i] * p.S_prime[i] -
         0.25 * p.c1 * p.c1 * std::cos(4.0 * p.S[i]);
}

inline PendulumPhase solve_pendulum_phase(double c1, double S0, double dS0,
                                          const Grid& grid,
                                          const IntegratorConfig& cfg = {}) {
  const double c1sq = c1 * c1;
  auto rhs = [c1sq](double, const std::array<double, 2>& y,
                    std::array<double, 2>& dy) {
    dy[0] = y[1];
    dy[1] = -c1sq * std::sin(4.0 * y[0]);
  };
  auto tr = integrate<double, 2>(rhs, grid.x_start, {S0, dS0}, grid, cfg);
  PendulumPhase out;
  out.grid = grid;
  out.c1 = c1;
  out.S.resize(grid.n_points);
  out.S_prime.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    out.S[i] = tr.values[i][0];
    out.S_prime[i] = tr.values[i][1];
  }
  return out;
}

/// Drift of the first integral across the grid, against
/// rel_tol * (1 + |E_p(x_0)|).
inline ResidualReport pendulum_energy_report(const PendulumPhase& p,
                                             double rel_tol = 1e-8) {
  const int n = p.grid.n_points;
  const double e0 = pendulum_energy(p, 0);
  std::vector<double> res(n);
  for (int i = 0; i < n; ++i) res[i] = std::abs(pendulum_energy(p, i) - e0);
  return make_report("pendulum_energy_drift", res,
                     rel_tol * (1.0 + std::abs(e0)));
}

/// Finite-difference residual of S'' + c1^2 sin(4S) = 0.
inline ResidualReport pendulum_residual(const PendulumPhase& p,
                                        double rel_tol = 1e-6) {
  const int n = p.grid.n_points;
  auto d2 = fd_derivative(p.grid, p.S, 2);
  std::vector<double> res(n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    double force = p.c1 * p.c1 * std::sin(4.0 * p.S[i]);
    res[i] = std::abs(d2[i] + force);
    scale = std::max(scale, std::abs(d2[i]) + std::abs(force));
  }
  return make_report("pendulum_eq_residual", res,
                     rel_tol * std::max(scale, 1e-300));
}

/// k^2(x) = S'^2 + c1^2 cos(4S), interpolating the phase samples with
/// cubic Hermite pieces (S'' at the nodes comes from the phase equation)
/// so the profile is callable between grid points.
inline KSquaredProfile k_squared_from_phase(const PendulumPhase& p) {
  const int n = p.grid.n_points;
  std::vector<double> d2(n);
  for (int i = 0; i < n; ++i) d2[i] = -p.c1 * p.c1 * std::sin(4.0 * p.S[i]);
  auto S_h = std::make_shared<CubicHermite<double>>(p.grid, p.S, p.S_prime);
  auto Sp_h = std::make_shared<CubicHermite<double>>(p.grid, p.S_prime, d2);
  const double c1sq = p.c1 * p.c1;

  KSquaredProfile out;
  out.provenance = KSquaredProfile::Provenance::FromPhase;
  out.eval = [S_h, Sp_h, c1sq](double x) {
    double s = (*S_h)(x);
    double sp = (*Sp_h)(x);
    return sp * sp + c1sq * std::cos(4.0 * s);
  };
  return out;
}

/// psi = e^{iS}, psi' = i S' e^{iS}; unit modulus by construction.
inline WaveFunction<double> compose_counterexample_psi(const PendulumPhase& p) {
  const int n = p.grid.n_points;
  WaveFunction<double> out;
  out.grid = p.grid;
  out.psi.resize(n);
  out.psi_prime.resize(n);
  for (int i = 0; i < n; ++i) {
    cxd ph = unit_phasor(p.S[i]);
    out.psi[i] = ph;
    out.psi_prime[i] = cxd{0.0, p.S_prime[i]} * ph;
  }
  return out;
}

/// Finite-difference residual of psi'' + k^2 psi = c1^2/psi^3.
inline ResidualReport nonlinear_milne_residual(const WaveFunction<double>& psi,
                                               const KSquaredProfile& k2,
                                               double c1, double rel_tol = 1e-6) {
  const int n = psi.grid.n_points;
  double max_abs = 0.0, min_abs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double a = mag(psi.psi[i]);
    max_abs = std::max(max_abs, a);
    min_abs = std::min(min_abs, a);
  }
  if (min_abs <= 1e-12 * max_abs)
    throw NodeEncountered("nonlinear_milne_residual: psi reaches zero");

  auto d2 = fd_derivative(psi.grid, psi.psi, 2);
  std::vector<double> res(n);
  double scale = 0.0;
  const double c1sq = c1 * c1;
  for (int i = 0; i < n; ++i) {
    double k2x = k2.eval(psi.grid.x(i));
    cxd cube = psi.psi[i] * psi.psi[i] * psi.psi[i];
    cxd barrier = cxd{c1sq, 0.0} / cube;
    cxd r = d2[i] + psi.psi[i] * k2x - barrier;
    res[i] = mag(r);
    scale = std::max(scale, mag(d2[i]) + mag(psi.psi[i] * k2x) + mag(barrier));
  }
  return make_report("nonlinear_milne_residual", res,
                     rel_tol * std::max(scale, 1e-300));
}

/// Samples of calK = c1^2 (u/psi)^2 with u = |psi|/N, plus constancy
/// reports for |calK| (always passes for unit-modulus psi) and for calK
/// itself (fails precisely when the phase is nonconstant).
struct CalKEvaluation {
  Grid grid;
  std::vector<cxd> values;
  double spread = 0.0; ///< max_i |calK_i - mean|
  ResidualReport modulus_report;
  ResidualReport constancy_report;
};

inline CalKEvaluation evaluate_calK(const WaveFunction<double>& psi, double c1,
                                    double N = 1.0, double rel_tol = 1e-9) {
  if (!(N > 0.0)) throw InvalidConfig("evaluate_calK: N must be positive");
  const int n = psi.grid.n_points;
  double max_abs = 0.0, min_abs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double a = mag(psi.psi[i]);
    max_abs = std::max(max_abs, a);
    min_abs = std::min(min_abs, a);
  }
  if (min_abs <= 1e-12 * max_abs)
    throw NodeEncountered("evaluate_calK: psi reaches zero");

  CalKEvaluation out;
  out.grid = psi.grid;
  out.values.resize(n);
  const double c1sq = c1 * c1;
  const double scale = c1sq / (N * N);
  cxd mean{};
  for (int i = 0; i < n; ++i) {
    double u = mag(psi.psi[i]) / N;
    cxd q = cxd{u, 0.0} / psi.psi[i];
    out.values[i] = q * q * c1sq;
    mean += out.values[i];
  }
  mean = mean * (1.0 / n);

  std::vector<double> mod_dev(n), const_dev(n);
  for (int i = 0; i < n; ++i) {
    mod_dev[i] = std::abs(mag(out.values[i]) - scale);
    const_dev[i] = mag(out.values[i] - mean);
  }
  out.modulus_report = make_report("calK_modulus_constancy", mod_dev,
                                   rel_tol * std::max(scale, 1e-300));
  out.constancy_report = make_report("calK_constancy", const_dev,
                                     rel_tol * std::max(scale, 1e-300));
  out.spread = out.constancy_report.max_abs;
  return out;
}

} // namespace milne
