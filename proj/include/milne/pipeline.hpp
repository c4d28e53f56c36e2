#pragma once

// Case runners behind the CLI and the acceptance suite.
//
// verify-k: draw random complex initial data, build the real pair
// f = Re psi, g = Im psi, derive the Milne amplitude and constant, and
// check that K = c^2(psi/u)^2 + (psi'u - u'psi)^2 cancels to rounding while
// each term stays at full scale. The pair is integrated and the identities
// are evaluated in double-double: on growth domains the products psi'u and
// u'psi reach ~1e12 times their difference, far beyond what double samples
// can cancel.
//
// counterexample: solve the pendulum-type phase equation, close k^2 from
// the phase, and verify that psi = e^{iS} solves the nonlinear Milne-type
// equation while calK = c1^2 e^{-2iS} has constant modulus but is not
// itself constant.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "milne/amplitude_phase.hpp"
#include "milne/pendulum.hpp"
#include "milne/schrodinger.hpp"

namespace milne {

struct IcDraw {
  cxd psi0;
  cxd dpsi0;
};

/// Seeded initial-condition sampler. Moduli are uniform in [0.5, 2], phases
/// uniform in [0, 2pi) with |sin(phase gap)| >= 0.1 enforced by redraw so
/// the real/imaginary pair stays safely nonproportional. The uniform
/// variates are generated from raw mt19937_64 words, so the stream is
/// identical across standard library implementations.
class IcSampler {
public:
  explicit IcSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) {
    const double u = double(rng_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

  IcDraw draw() {
    for (int tries = 0; tries < 1000; ++tries) {
      const double r1 = uniform(0.5, 2.0), r2 = uniform(0.5, 2.0);
      const double p1 = uniform(0.0, 2.0 * M_PI), p2 = uniform(0.0, 2.0 * M_PI);
      if (std::abs(std::sin(p2 - p1)) < 0.1) continue;
      return {cxd{r1 * std::cos(p1), r1 * std::sin(p1)},
              cxd{r2 * std::cos(p2), r2 * std::sin(p2)}};
    }
    throw InvalidConfig("IcSampler: no nondegenerate draw in 1000 tries");
  }

private:
  std::mt19937_64 rng_;
};

struct VerifyKTolerances {
  double k_rel = 1e-7;         ///< max|K| vs c^2 N^2
  double identity_rel = 1e-8;  ///< |psi'u - u'psi - icN e^{iS}| vs |c| N
  double wronskian_rel = 1e-7; ///< W constancy vs 1 + |W|
  double term1_rel = 1e-9;     ///< max|c^2 (psi/u)^2| vs c^2 N^2
  double roundtrip_rel = 1e-9; ///< compose_psi vs the direct solution
  double residual_rel = 1e-6;  ///< finite-difference residual of Eq. psi'' + k^2 psi = 0
  double negative_control_rel = 1e-2;
  double mismatch_factor = 2.0; ///< c multiplier for the negative control
};

struct VerifyKCaseResult {
  IcDraw ic;
  double c = 0.0;
  double term1_max = 0.0;
  double u_min = 0.0, u_max = 0.0;
  bool phase_resolved = false; ///< grid resolves S well enough to quadrature-check
  bool inconsistent = false;
  std::vector<ResidualReport> reports;
  std::vector<std::string> expected_fail; ///< names whose failure is the pass condition
  bool pass = false;
};

namespace pipeline_detail {

inline bool case_passes(const std::vector<ResidualReport>& reports,
                        const std::vector<std::string>& expected_fail) {
  for (const auto& r : reports) {
    bool expect_fail = false;
    for (const auto& name : expected_fail)
      if (r.name == name) expect_fail = true;
    if (r.pass == expect_fail) return false;
  }
  return true;
}

} // namespace pipeline_detail

/// One verify-k case: dd pipeline for the cancellation-critical checks,
/// double for composition and quadrature diagnostics.
inline VerifyKCaseResult run_verify_k_case(const KSquaredProfile& k2,
                                           const Grid& grid, const IcDraw& ic,
                                           const VerifyKTolerances& tol = {},
                                           bool inconsistent = false) {
  VerifyKCaseResult out;
  out.ic = ic;
  out.inconsistent = inconsistent;

  IntegratorConfig cfg;
  cfg.method = Method::FixedRk4;
  cfg.max_step = grid.step() / 2.0;

  // real solution pair in dd; psi = f + i g
  auto f = solve_linear<ddouble>(k2, {ddouble(ic.psi0.re), ddouble(0.0)},
                                 {ddouble(ic.dpsi0.re), ddouble(0.0)}, grid, cfg);
  auto g = solve_linear<ddouble>(k2, {ddouble(ic.psi0.im), ddouble(0.0)},
                                 {ddouble(ic.dpsi0.im), ddouble(0.0)}, grid, cfg);
  auto psi = superpose<ddouble>(f, g, {ddouble(1.0), ddouble(0.0)},
                                {ddouble(0.0), ddouble(1.0)});
  auto amp = amplitude_from_pair<ddouble>(f, g);
  out.c = to_double(amp.c);

  const int n = grid.n_points;
  out.u_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double u = to_double(amp.u[i]);
    out.u_min = std::min(out.u_min, u);
    out.u_max = std::max(out.u_max, u);
  }

  auto W = wronskian<ddouble>(f, g, tol.wronskian_rel);
  out.reports.push_back(W.report);

  auto K = evaluate_K<ddouble>(psi, amp, tol.k_rel);
  out.term1_max = K.term1_max;
  out.reports.push_back(K.report);

  // |term1| must sit exactly at c^2 N^2 (N = 1): the cancellation is of
  // full-scale terms, not of small ones.
  const double c2 = out.c * out.c;
  out.reports.push_back(make_report("term1_scale",
                                    {std::abs(K.term1_max - c2)},
                                    tol.term1_rel * c2));

  // Identity psi'u - u'psi = i c N e^{iS} with e^{iS} taken as psi/(N u).
  {
    std::vector<double> res(n);
    for (int i = 0; i < n; ++i) {
      cplx<ddouble> w =
          psi.psi_prime[i] * amp.u[i] - psi.psi[i] * amp.u_prime[i];
      cplx<ddouble> rhs =
          cplx<ddouble>{ddouble(0.0), ddouble(1.0)} * (psi.psi[i] / amp.u[i]) * amp.c;
      res[i] = mag(w - rhs);
    }
    out.reports.push_back(make_report("wronskian_identity", res,
                                      tol.identity_rel *
                                          std::max(std::abs(out.c), 1e-300)));
  }

  // double-precision legs
  WaveFunction<double> psi_d;
  psi_d.grid = grid;
  psi_d.psi.resize(n);
  psi_d.psi_prime.resize(n);
  MilneSolution<double> amp_d;
  amp_d.grid = grid;
  amp_d.c = out.c;
  amp_d.u.resize(n);
  amp_d.u_prime.resize(n);
  for (int i = 0; i < n; ++i) {
    psi_d.psi[i] = to_cxd(psi.psi[i]);
    psi_d.psi_prime[i] = to_cxd(psi.psi_prime[i]);
    amp_d.u[i] = to_double(amp.u[i]);
    amp_d.u_prime[i] = to_double(amp.u_prime[i]);
  }

  double res_rel = tol.residual_rel;
  if (k2.provenance == KSquaredProfile::Provenance::FromPotential && !k2.eval_dd_fn)
    res_rel *= 10.0; // tabulated coefficient: limited smoothness
  out.reports.push_back(linear_residual(psi_d, k2, res_rel));

  // Recompose N u e^{iS} from the decomposed data and compare with the
  // direct solution. The unwrapped argument may slip by 2 pi across an
  // under-resolved amplitude dip, which e^{iS} does not see, so this check
  // is resolution-independent; phase_resolved records whether the grid
  // also tracks S itself (finite-difference phase diagnostics are only
  // meaningful on such grids and live in their own verification).
  auto S = unwrapped_argument(psi_d.psi, false);
  double max_dphase = 0.0;
  for (int i = 1; i < n; ++i)
    max_dphase = std::max(max_dphase, std::abs(S[i] - S[i - 1]));
  out.phase_resolved = max_dphase < 0.15;

  {
    PhaseFunction ph;
    ph.grid = grid;
    ph.S = S;
    ph.S_prime.resize(n);
    for (int i = 0; i < n; ++i)
      ph.S_prime[i] = out.c / (amp_d.u[i] * amp_d.u[i]);
    auto composed = compose_psi({1.0, amp_d, ph});
    std::vector<double> rel(n);
    for (int i = 0; i < n; ++i)
      rel[i] = mag(composed.psi[i] - psi_d.psi[i]) / mag(psi_d.psi[i]);
    out.reports.push_back(
        make_report("compose_roundtrip", rel, tol.roundtrip_rel));
  }

  if (inconsistent) {
    // Negative control: amplitude re-solved with a mismatched Milne
    // constant. K picks up (c_wrong^2 - c^2) at x_start and must be caught.
    IntegratorConfig mcfg = cfg;
    auto amp_wrong = solve_milne(k2, tol.mismatch_factor * out.c, amp_d.u[0],
                                 amp_d.u_prime[0], grid, mcfg);
    auto K_bad = evaluate_K<double>(psi_d, amp_wrong, tol.negative_control_rel);
    K_bad.report.name = "K_negative_control";
    out.reports.push_back(K_bad.report);
    out.expected_fail.push_back("K_negative_control");
  }

  out.pass = pipeline_detail::case_passes(out.reports, out.expected_fail);
  return out;
}

struct CounterexampleTolerances {
  double closure_rel = 1e-6; ///< nonlinear Milne residual
  double energy_rel = 1e-8;  ///< pendulum first-integral drift
  double calk_rel = 1e-9;    ///< calK modulus / constancy
  double k_noncancel_rel = 1e-2; ///< K must NOT vanish on nonlinear-equation solutions
};

/// Phase spreads below this are treated as held constant (equilibrium
/// runs); genuine librations in the working regimes sit at >= 1e-2.
inline constexpr double constant_phase_spread_floor = 1e-6;

struct CounterexampleCaseResult {
  double c1 = 1.0, S0 = 0.0, dS0 = 0.0;
  PendulumPhase phase;
  std::vector<double> k2_samples;
  std::vector<cxd> calK;
  double s_spread = 0.0;
  double calk_spread = 0.0;
  bool constant_phase = false;
  std::vector<ResidualReport> reports;
  std::vector<std::string> expected_fail;
  bool pass = false;
};

/// One counterexample case. For a nonconstant phase the calK constancy
/// check and the K-vanishing check are both expected to fail: that pair of
/// failures is the verification target.
inline CounterexampleCaseResult run_counterexample_case(
    double c1, double S0, double dS0, const Grid& grid,
    const CounterexampleTolerances& tol = {}) {
  if (c1 == 0.0)
    throw InvalidConfig("counterexample: c1 must be nonzero");

  CounterexampleCaseResult out;
  out.c1 = c1;
  out.S0 = S0;
  out.dS0 = dS0;

  IntegratorConfig cfg;
  cfg.method = Method::FixedRk4;
  cfg.max_step = grid.step() / 2.0;

  out.phase = solve_pendulum_phase(c1, S0, dS0, grid, cfg);
  const int n = grid.n_points;
  for (int i = 0; i < n; ++i)
    out.s_spread = std::max(out.s_spread, std::abs(out.phase.S[i] - out.phase.S[0]));

  // Equilibrium initial data cannot hold S exactly fixed in floating
  // point: S0 = pi/4 is an unstable equilibrium, and its representation
  // error grows like e^{2 c1 x}. Spreads below this floor are equilibrium
  // rounding, orders of magnitude under any genuine libration.
  out.constant_phase = out.s_spread < constant_phase_spread_floor;

  auto k2 = k_squared_from_phase(out.phase);
  out.k2_samples.resize(n);
  for (int i = 0; i < n; ++i) out.k2_samples[i] = k2.eval(grid.x(i));

  auto psi = compose_counterexample_psi(out.phase);
  out.reports.push_back(nonlinear_milne_residual(psi, k2, c1, tol.closure_rel));
  out.reports.push_back(pendulum_energy_report(out.phase, tol.energy_rel));

  auto calk = evaluate_calK(psi, c1, 1.0, tol.calk_rel);
  if (out.constant_phase) {
    // The phase spread bounds the calK spread exactly:
    // |e^{-2iS} - e^{-2iS0}| <= 2|S - S0|. Let the constancy tolerance
    // track that envelope so equilibrium rounding is not misread as a
    // refutation (margin 2.5 on the factor 2).
    double track = std::max(tol.calk_rel, 2.5 * out.s_spread) * c1 * c1;
    calk.constancy_report.tolerance = track;
    calk.constancy_report.pass = calk.constancy_report.max_abs <= track;
  }
  out.calK = std::move(calk.values);
  out.calk_spread = calk.spread;
  out.reports.push_back(calk.modulus_report);
  out.reports.push_back(calk.constancy_report);
  if (!out.constant_phase) out.expected_fail.push_back("calK_constancy");

  // K evaluated on (psi = e^{iS}, u = 1, c = c1) must NOT vanish: psi
  // solves the nonlinear equation, not the linear one, so the K = 0
  // theorem does not apply to it.
  {
    MilneSolution<double> unit_amp;
    unit_amp.grid = grid;
    unit_amp.c = c1;
    unit_amp.u.assign(n, 1.0);
    unit_amp.u_prime.assign(n, 0.0);
    auto K = evaluate_K<double>(psi, unit_amp, tol.k_noncancel_rel);
    K.report.name = "K_nonvanishing_on_nonlinear";
    out.reports.push_back(K.report);
    out.expected_fail.push_back("K_nonvanishing_on_nonlinear");
  }

  out.pass = pipeline_detail::case_passes(out.reports, out.expected_fail);
  return out;
}

} // namespace milne
