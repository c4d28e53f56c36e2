#include "doctest.h"
#include "milne/convergence.hpp"
#include "milne/schrodinger.hpp"

#include <cmath>

using namespace milne;

namespace {

const PhysicalParams unit_params{1.0, 1.0, 0.5};

WaveFunction<double> plane_wave_pair(const Grid& g, cxd psi0, cxd dpsi0) {
  auto k2 = k_squared(Potential::free(), unit_params); // k^2 = 1
  return solve_linear<double>(k2, psi0, dpsi0, g, {});
}

} // namespace

TEST_SUITE("schrodinger") {

TEST_CASE("k_squared.catalog_values") {
  auto free_k2 = k_squared(Potential::free(), {1, 1, 0.5});
  CHECK(free_k2.eval(0.0) == doctest::Approx(1.0));
  CHECK(free_k2.eval(7.3) == doctest::Approx(1.0));

  auto harm = k_squared(Potential::harmonic(1.0), {1, 1, 0.5});
  CHECK(harm.eval(0.0) == doctest::Approx(1.0));
  CHECK(harm.eval(1.0) == doctest::Approx(0.0).epsilon(1e-14));

  auto lin = k_squared(Potential::linear(1.0), {1, 1, 0.0});
  CHECK(lin.eval(2.0) == doctest::Approx(-4.0));
  CHECK(lin.eval(-1.5) == doctest::Approx(3.0));

  auto cst = k_squared(Potential::constant(0.3), {1, 1, 0.5});
  CHECK(cst.eval(11.0) == doctest::Approx(0.4));

  // dd evaluator agrees with the double one on the catalog
  CHECK(to_double(harm.eval_dd(1.25)) == doctest::Approx(harm.eval(1.25)));
}

TEST_CASE("k_squared.tabulated_linear_interpolation") {
  Grid g(0.0, 1.0, 41);
  std::vector<double> v(g.n_points);
  for (int i = 0; i < g.n_points; ++i) v[i] = 0.25 * g.x(i);
  auto pot = Potential::tabulated(g, v);
  auto k2 = k_squared(pot, {1, 1, 0.0});
  // a linear table is reproduced exactly between nodes
  CHECK(k2.eval(0.5125) == doctest::Approx(-2.0 * 0.25 * 0.5125).epsilon(1e-12));
  CHECK_THROWS_AS(k2.eval(2.0), InvalidConfig);
}

TEST_CASE("solve_linear.plane_wave") {
  Grid g(0.0, M_PI, 401);
  auto psi = plane_wave_pair(g, {1.0, 0.0}, {0.0, 1.0}); // e^{ix}
  CHECK(std::abs(psi.psi.back().re + 1.0) < 1e-8);
  CHECK(std::abs(psi.psi.back().im) < 1e-8);
  for (int i = 0; i < g.n_points; i += 40) {
    CHECK(psi.psi[i].re == doctest::Approx(std::cos(g.x(i))).epsilon(1e-8));
    CHECK(psi.psi[i].im == doctest::Approx(std::sin(g.x(i))).epsilon(1e-8));
  }
}

TEST_CASE("solve_linear.cosine") {
  Grid g(0.0, M_PI, 401);
  auto psi = plane_wave_pair(g, {1.0, 0.0}, {0.0, 0.0});
  for (int i = 0; i < g.n_points; i += 25) {
    CHECK(psi.psi[i].re == doctest::Approx(std::cos(g.x(i))).epsilon(1e-8));
    CHECK(std::abs(psi.psi[i].im) == 0.0);
  }
}

TEST_CASE("solve_linear.rejects_trivial_data") {
  Grid g(0.0, 1.0, 41);
  auto k2 = k_squared(Potential::free(), unit_params);
  CHECK_THROWS_AS((solve_linear<double>(k2, {0.0, 0.0}, {0.0, 0.0}, g, {})),
                  InvalidConfig);
}

TEST_CASE("solve_linear.harmonic_ground_state_shape") {
  // E = 0.5 with omega = 1: data (1, 0) at x = 0 reproduces the nodeless
  // even solution exp(-x^2/2) up to normalization across [-5, 5]
  auto k2 = k_squared(Potential::harmonic(1.0), {1, 1, 0.5});
  Grid g(-5.0, 5.0, 2001);
  auto psi = solve_linear_at<double>(k2, 1000, {1.0, 0.0}, {0.0, 0.0}, g, {});
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    double x = g.x(i);
    worst = std::max(worst, std::abs(psi.psi[i].re - std::exp(-0.5 * x * x)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("solve_linear.residual_fourth_order") {
  // node-exact fixed-step samples: dense-output interpolation error is not
  // smooth enough to survive a 1/h^2 finite-difference stencil
  auto k2 = k_squared(Potential::harmonic(1.0), {1, 1, 2.5});
  std::vector<double> hs, errs;
  for (int n : {501, 1001, 2001, 4001}) {
    Grid g(-3.0, 3.0, n);
    IntegratorConfig cfg;
    cfg.method = Method::FixedRk4;
    auto psi = solve_linear<double>(k2, {0.7, 0.1}, {0.2, 0.9}, g, cfg);
    auto rep = linear_residual(psi, k2);
    hs.push_back(g.step());
    errs.push_back(rep.max_abs);
  }
  CHECK(fitted_order(hs, errs) >= 3.5);
  CHECK(errs.back() < 1e-6 * 10.0); // scale of the equation terms is O(10)
}

TEST_CASE("wronskian.cos_sin_identity") {
  Grid g(0.0, 2.0 * M_PI, 501);
  auto f = plane_wave_pair(g, {1.0, 0.0}, {0.0, 0.0}); // cos
  auto s = plane_wave_pair(g, {0.0, 0.0}, {1.0, 0.0}); // sin
  auto W = wronskian(f, s);
  CHECK(W.mean.re == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(W.mean.im) < 1e-14);
  CHECK(W.max_deviation < 1e-9);
  CHECK(W.report.pass);
}

TEST_CASE("wronskian.self_is_zero") {
  Grid g(0.0, 1.0, 101);
  auto f = plane_wave_pair(g, {1.0, 0.0}, {0.5, 0.0});
  auto W = wronskian(f, f);
  CHECK(mag(W.mean) == 0.0);
  CHECK(W.max_deviation == 0.0);
}

TEST_CASE("wronskian.harmonic_numeric_pair_constant") {
  auto k2 = k_squared(Potential::harmonic(1.0), {1, 1, 1.5});
  Grid g(-2.0, 2.0, 801);
  auto f = solve_linear<double>(k2, {0.9, 0.0}, {-0.3, 0.0}, g, {});
  auto h = solve_linear<double>(k2, {0.1, 0.0}, {1.2, 0.0}, g, {});
  auto W = wronskian(f, h);
  CHECK(W.max_deviation < 1e-8 * (1.0 + mag(W.mean)));
  CHECK(W.report.pass);
}

TEST_CASE("wronskian.grid_mismatch") {
  Grid a(0.0, 1.0, 101), b(0.0, 1.0, 102);
  auto f = plane_wave_pair(a, {1.0, 0.0}, {0.0, 0.0});
  auto g2 = plane_wave_pair(b, {1.0, 0.0}, {0.0, 0.0});
  CHECK_THROWS_AS(wronskian(f, g2), GridMismatch);
}

TEST_CASE("superpose.builds_plane_wave_and_identity_case") {
  Grid g(0.0, 2.0 * M_PI, 501);
  auto c = plane_wave_pair(g, {1.0, 0.0}, {0.0, 0.0});
  auto s = plane_wave_pair(g, {0.0, 0.0}, {1.0, 0.0});
  auto e = superpose<double>(c, s, {1.0, 0.0}, {0.0, 1.0}); // cos + i sin
  for (int i = 0; i < g.n_points; i += 100) {
    CHECK(e.psi[i].re == doctest::Approx(std::cos(g.x(i))).epsilon(1e-9));
    CHECK(e.psi[i].im == doctest::Approx(std::sin(g.x(i))).epsilon(1e-9));
  }
  // |psi| stays away from zero when W != 0
  double lo = 1e300;
  for (auto& v : e.psi) lo = std::min(lo, mag(v));
  CHECK(lo > 0.99);

  auto same = superpose<double>(c, s, {1.0, 0.0}, {0.0, 0.0});
  for (int i = 0; i < g.n_points; ++i) {
    CHECK(same.psi[i].re == c.psi[i].re);
    CHECK(same.psi[i].im == c.psi[i].im);
  }
}

TEST_CASE("superpose.linearity_of_solver") {
  // solving with combined data equals combining separate solves
  auto k2 = k_squared(Potential::harmonic(1.0), {1, 1, 1.0});
  Grid g(-1.5, 1.5, 601);
  cxd a{0.8, 0.0}, b{0.0, 1.3};
  auto y1 = solve_linear<double>(k2, {1.0, 0.0}, {0.0, 0.0}, g, {});
  auto y2 = solve_linear<double>(k2, {0.0, 0.0}, {1.0, 0.0}, g, {});
  auto direct = solve_linear<double>(k2, a, b, g, {});
  auto combo = superpose<double>(y1, y2, a, b);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    worst = std::max(worst, mag(direct.psi[i] - combo.psi[i]));
  CHECK(worst < 1e-9);
}

} // TEST_SUITE
