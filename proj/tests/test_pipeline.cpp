#include "doctest.h"
#include "milne/pipeline.hpp"
#include "milne/report_io.hpp"

#include <cmath>

using namespace milne;

TEST_SUITE("pipeline") {

TEST_CASE("ic_sampler.deterministic_and_in_range") {
  IcSampler a(42), b(42);
  for (int i = 0; i < 50; ++i) {
    auto da = a.draw();
    auto db = b.draw();
    CHECK(da.psi0.re == db.psi0.re);
    CHECK(da.dpsi0.im == db.dpsi0.im);
    double r1 = mag(da.psi0), r2 = mag(da.dpsi0);
    CHECK(r1 >= 0.5);
    CHECK(r1 <= 2.0);
    CHECK(r2 >= 0.5);
    CHECK(r2 <= 2.0);
    // nondegeneracy guard: |Im(conj(psi0) dpsi0)| = r1 r2 |sin dphi| >= 0.1 r1 r2
    double w = da.psi0.re * da.dpsi0.im - da.dpsi0.re * da.psi0.im;
    CHECK(std::abs(w) >= 0.1 * r1 * r2 * 0.999);
  }
}

TEST_CASE("verify_k_case.free_potential_consistent") {
  auto k2 = k_squared(Potential::free(), {1, 1, 0.5});
  Grid g(-5.0, 5.0, 4001);
  IcSampler s(7);
  auto c = run_verify_k_case(k2, g, s.draw());
  CHECK(c.pass);
  for (const auto& r : c.reports) {
    INFO(r.name);
    CHECK(r.pass);
  }
  const auto* k = find_report(c.reports, "K_vanishing");
  REQUIRE(k != nullptr);
  CHECK(k->max_abs <= 1e-7 * c.term1_max);
  CHECK(c.term1_max == doctest::Approx(c.c * c.c).epsilon(1e-9));
}

TEST_CASE("verify_k_case.negative_control_detects_mismatch") {
  auto k2 = k_squared(Potential::free(), {1, 1, 0.5});
  Grid g(-5.0, 5.0, 4001);
  IcSampler s(11);
  auto c = run_verify_k_case(k2, g, s.draw(), {}, /*inconsistent=*/true);
  CHECK(c.pass); // expected-fail matched
  const auto* bad = find_report(c.reports, "K_negative_control");
  REQUIRE(bad != nullptr);
  CHECK(!bad->pass);
  CHECK(bad->max_abs > bad->tolerance);
  const auto* good = find_report(c.reports, "K_vanishing");
  REQUIRE(good != nullptr);
  CHECK(good->pass);
}

TEST_CASE("verify_k_case.k_property_over_catalog_random_family") {
  // K-vanishing over every catalog potential and a family of random draws
  // (domain kept moderate here; the acceptance suite runs the full one).
  struct Entry {
    Potential pot;
    double energy;
  };
  const Entry catalog[] = {{Potential::free(), 0.5},
                           {Potential::constant(0.3), 0.5},
                           {Potential::harmonic(1.0), 0.5},
                           {Potential::linear(1.0), 0.0}};
  Grid g(-2.0, 2.0, 4097);
  IcSampler s(2026);
  for (const auto& e : catalog) {
    auto k2 = k_squared(e.pot, {1, 1, e.energy});
    for (int i = 0; i < 5; ++i) {
      auto c = run_verify_k_case(k2, g, s.draw());
      INFO("potential case, c = " << c.c);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("counterexample_case.equilibrium_flagged_constant_phase") {
  Grid g(0.0, 10.0, 1001);
  auto c = run_counterexample_case(1.0, 0.0, 0.0, g);
  CHECK(c.constant_phase);
  CHECK(c.pass);
  const auto* cst = find_report(c.reports, "calK_constancy");
  REQUIRE(cst != nullptr);
  CHECK(cst->pass);
}

TEST_CASE("counterexample_case.libration_refutes_constancy") {
  Grid g(0.0, 10.0, 2001);
  auto c = run_counterexample_case(1.0, 0.0, 0.5, g);
  CHECK(!c.constant_phase);
  CHECK(c.pass);
  CHECK(c.calk_spread >= 0.05);
  const auto* cns = find_report(c.reports, "calK_constancy");
  REQUIRE(cns != nullptr);
  CHECK(!cns->pass); // expected failure: the refutation
  const auto* mod = find_report(c.reports, "calK_modulus_constancy");
  REQUIRE(mod != nullptr);
  CHECK(mod->pass);
}

TEST_CASE("counterexample_case.rejects_zero_c1") {
  Grid g(0.0, 10.0, 1001);
  CHECK_THROWS_AS(run_counterexample_case(0.0, 0.0, 0.5, g), InvalidConfig);
}

TEST_CASE("counterexample_sweep.closure_holds_across_cross_product") {
  // every (c1, S0, dS0) combination must close the nonlinear equation;
  // equilibrium rows are flagged constant-phase rather than failed.
  // n = 4001: the c1 = 2 rotation cases carry phase derivatives ~ 3 and
  // need the working grid for the 1e-6 closure tolerance.
  Grid g(0.0, 10.0, 4001);
  int constant_rows = 0;
  for (double c1 : {0.5, 1.0, 2.0})
    for (double s0 : {0.0, 0.1, M_PI / 4.0})
      for (double ds0 : {0.0, 0.4, 3.0}) {
        auto c = run_counterexample_case(c1, s0, ds0, g);
        INFO("c1=" << c1 << " s0=" << s0 << " ds0=" << ds0);
        CHECK(c.pass);
        const auto* cl = find_report(c.reports, "nonlinear_milne_residual");
        REQUIRE(cl != nullptr);
        CHECK(cl->pass);
        if (c.constant_phase) ++constant_rows;
      }
  // (0, 0) and (pi/4, 0) starts are held phases for every c1
  CHECK(constant_rows == 6);
}

TEST_CASE("verify_k_case.tabulated_potential") {
  // sampled coefficient: the dd path falls back to the double evaluator and
  // the fd-residual tolerance is relaxed 10x for the kinked interpolant
  Grid tab_grid(-6.0, 6.0, 1201);
  std::vector<double> v(tab_grid.n_points);
  for (int i = 0; i < tab_grid.n_points; ++i)
    v[i] = 0.05 * tab_grid.x(i) * tab_grid.x(i);
  auto k2 = k_squared(Potential::tabulated(tab_grid, v), {1, 1, 0.5});
  CHECK(!k2.eval_dd_fn);

  Grid g(-5.0, 5.0, 4001);
  IcSampler s(5);
  auto c = run_verify_k_case(k2, g, s.draw());
  CHECK(c.pass);
  const auto* fd = find_report(c.reports, "schrodinger_fd_residual");
  REQUIRE(fd != nullptr);
  CHECK(fd->pass);
}

TEST_CASE("report_io.json_schema_per_report") {
  ResidualReport r{"demo", 1.5e-9, 3.0e-10, 1e-8, true, 4001};
  auto j = to_json(r);
  CHECK(j["name"] == "demo");
  CHECK(j["max_abs"] == 1.5e-9);
  CHECK(j["rms"] == 3.0e-10);
  CHECK(j["tolerance"] == 1e-8);
  CHECK(j["pass"] == true);
  CHECK(j["grid_points"] == 4001);
  // field order is stable for byte-identical reruns
  CHECK(j.dump().rfind("{\"name\"", 0) == 0);
}

TEST_CASE("report_io.case_json_and_csv") {
  auto k2 = k_squared(Potential::free(), {1, 1, 0.5});
  Grid g(-5.0, 5.0, 257);
  IcSampler s(3);
  auto c = run_verify_k_case(k2, g, s.draw());
  auto j = to_json(c, 1.25);
  CHECK(j.contains("reports"));
  CHECK(j["pass"] == c.pass);
  CHECK(j["wall_ms"] == 1.25);
  for (const auto& rep : j["reports"]) {
    CHECK(rep.contains("name"));
    CHECK(rep.contains("max_abs"));
    CHECK(rep.contains("rms"));
    CHECK(rep.contains("tolerance"));
    CHECK(rep.contains("pass"));
    CHECK(rep.contains("grid_points"));
  }

  auto row = verify_k_csv_row(0, "free", 0.5, 99, 0, c);
  int commas = 0;
  for (char ch : row)
    if (ch == ',') ++commas;
  int header_commas = 0;
  for (char ch : verify_k_csv_header())
    if (ch == ',') ++header_commas;
  CHECK(commas == header_commas);
  CHECK(format_sci17(1.0) == "1.0000000000000000e+00");
}

TEST_CASE("report_io.counterexample_samples_csv") {
  Grid g(0.0, 10.0, 101);
  auto c = run_counterexample_case(1.0, 0.0, 0.5, g,
                                   CounterexampleTolerances{1e-2, 1e-6, 1e-9, 1e-2});
  auto text = counterexample_samples_csv(c);
  CHECK(text.rfind("x,S,S_prime,k2,calK_re,calK_im\n", 0) == 0);
  int lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 102); // header + one row per node
}

} // TEST_SUITE
