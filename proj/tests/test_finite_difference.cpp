#include "doctest.h"
#include "milne/complex.hpp"
#include "milne/convergence.hpp"
#include "milne/finite_difference.hpp"

#include <cmath>

using namespace milne;

TEST_SUITE("finite_difference") {

TEST_CASE("fd.quadratic_second_derivative_exact") {
  Grid g(0.0, 1.0, 101);
  std::vector<double> f(g.n_points);
  for (int i = 0; i < g.n_points; ++i) f[i] = g.x(i) * g.x(i);
  auto d2 = fd_derivative(g, f, 2);
  for (int i = 0; i < g.n_points; ++i)
    CHECK(d2[i] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("fd.quintic_exact_for_first_derivative_boundaries") {
  // one-sided 5-point stencils integrate degree-4 exactly; degree-5 shows
  // the O(h^4) error. Check degree 4 is exact at boundaries too.
  Grid g(0.0, 1.0, 41);
  std::vector<double> f(g.n_points), df(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    double x = g.x(i);
    f[i] = 1 + x * (2 + x * (3 + x * (4 + 5 * x)));
    df[i] = 2 + x * (6 + x * (12 + 20 * x));
  }
  auto d1 = fd_derivative(g, f, 1);
  for (int i = 0; i < g.n_points; ++i)
    CHECK(d1[i] == doctest::Approx(df[i]).epsilon(1e-11));
}

TEST_CASE("fd.sine_first_derivative") {
  Grid g(0.0, M_PI, 201);
  std::vector<double> f(g.n_points);
  for (int i = 0; i < g.n_points; ++i) f[i] = std::sin(g.x(i));
  auto d1 = fd_derivative(g, f, 1);
  for (int i = 2; i < g.n_points - 2; ++i)
    CHECK(std::abs(d1[i] - std::cos(g.x(i))) < 1e-8);
}

TEST_CASE("fd.constant_derivative_zero") {
  Grid g(0.0, 1.0, 33);
  std::vector<double> f(g.n_points, 3.25);
  auto d1 = fd_derivative(g, f, 1);
  auto d2 = fd_derivative(g, f, 2);
  for (int i = 0; i < g.n_points; ++i) {
    CHECK(d1[i] == 0.0);
    CHECK(d2[i] == 0.0);
  }
}

TEST_CASE("fd.fourth_order_convergence_including_boundaries") {
  // max-norm over the whole grid (boundary stencils included) must decay
  // as h^4 for both derivative orders
  for (int order : {1, 2}) {
    std::vector<double> hs, errs;
    for (int n : {51, 101, 201, 401}) {
      Grid g(0.0, 2.0, n);
      std::vector<double> f(n);
      for (int i = 0; i < n; ++i) f[i] = std::exp(std::sin(2.0 * g.x(i)));
      auto d = fd_derivative(g, f, order);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        double x = g.x(i);
        double fx = std::exp(std::sin(2.0 * x));
        double exact = order == 1
                           ? 2.0 * std::cos(2.0 * x) * fx
                           : (4.0 * std::cos(2.0 * x) * std::cos(2.0 * x) -
                              4.0 * std::sin(2.0 * x)) * fx;
        worst = std::max(worst, std::abs(d[i] - exact));
      }
      hs.push_back(g.step());
      errs.push_back(worst);
    }
    CHECK(fitted_order(hs, errs) > 3.7);
  }
}

TEST_CASE("fd.complex_samples") {
  Grid g(0.0, 1.0, 101);
  std::vector<cxd> f(g.n_points);
  for (int i = 0; i < g.n_points; ++i)
    f[i] = {std::cos(g.x(i)), std::sin(g.x(i))};
  auto d2 = fd_derivative(g, f, 2);
  for (int i = 2; i < g.n_points - 2; ++i) {
    CHECK(std::abs(d2[i].re + std::cos(g.x(i))) < 1e-9);
    CHECK(std::abs(d2[i].im + std::sin(g.x(i))) < 1e-9);
  }
}

TEST_CASE("fd.too_small_grid") {
  Grid g4(0.0, 1.0, 4);
  std::vector<double> f4(4, 1.0);
  CHECK_THROWS_AS(fd_derivative(g4, f4, 1), GridTooSmall);
  Grid g5(0.0, 1.0, 5);
  std::vector<double> f5(5, 1.0);
  CHECK_NOTHROW(fd_derivative(g5, f5, 1));
  CHECK_THROWS_AS(fd_derivative(g5, f5, 2), GridTooSmall);
}

} // TEST_SUITE
