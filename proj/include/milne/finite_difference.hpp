#pragma once

// Sampled derivatives by high-order finite differences, kept independent of
// the integrators so that residual checks never reuse the right-hand sides
// that produced the samples.
//
// Interior points use 5-point central stencils, O(h^4). Boundary points use
// one-sided stencils of the same order: 5 points for the first derivative,
// 6 points for the second (a 5-point one-sided second derivative would only
// reach O(h^3) and drag the observed refinement order below 4).

#include <vector>

#include "milne/errors.hpp"
#include "milne/grid.hpp"

namespace milne {

namespace fd_detail {

// first derivative, times 12h
inline constexpr double C1_CENTRAL[5] = {1, -8, 0, 8, -1};
inline constexpr double C1_EDGE0[5] = {-25, 48, -36, 16, -3};
inline constexpr double C1_EDGE1[5] = {-3, -10, 18, -6, 1};

// second derivative, times 12h^2
inline constexpr double C2_CENTRAL[5] = {-1, 16, -30, 16, -1};
inline constexpr double C2_EDGE0[6] = {45, -154, 214, -156, 61, -10};
inline constexpr double C2_EDGE1[6] = {10, -15, -4, 14, -6, 1};

template <class T>
T stencil(const std::vector<T>& f, int start, const double* c, int m) {
  T acc = f[start] * c[0];
  for (int k = 1; k < m; ++k) acc = acc + f[start + k] * c[k];
  return acc;
}

} // namespace fd_detail

/// Derivative of requested order (1 or 2) of samples on the grid,
/// truncation error O(h^4) everywhere including the boundary rows.
template <class T>
std::vector<T> fd_derivative(const Grid& grid, const std::vector<T>& f,
                             int order) {
  using namespace fd_detail;
  const int n = grid.n_points;
  if ((int)f.size() != n)
    throw GridMismatch("fd_derivative: sample count != grid.n_points");
  if (order != 1 && order != 2)
    throw InvalidConfig("fd_derivative: order must be 1 or 2");
  if (order == 1 && n < 5)
    throw GridTooSmall("fd_derivative: need at least 5 points");
  if (order == 2 && n < 6)
    throw GridTooSmall("fd_derivative: need at least 6 points");

  const double h = grid.step();
  std::vector<T> d(n);

  if (order == 1) {
    const double s = 1.0 / (12.0 * h);
    d[0] = stencil(f, 0, C1_EDGE0, 5) * s;
    d[1] = stencil(f, 0, C1_EDGE1, 5) * s;
    for (int i = 2; i < n - 2; ++i) d[i] = stencil(f, i - 2, C1_CENTRAL, 5) * s;
    // right edge: reversed stencils, odd derivative flips sign
    double rev1[5], rev0[5];
    for (int k = 0; k < 5; ++k) {
      rev1[k] = -C1_EDGE1[4 - k];
      rev0[k] = -C1_EDGE0[4 - k];
    }
    d[n - 2] = stencil(f, n - 5, rev1, 5) * s;
    d[n - 1] = stencil(f, n - 5, rev0, 5) * s;
  } else {
    const double s = 1.0 / (12.0 * h * h);
    d[0] = stencil(f, 0, C2_EDGE0, 6) * s;
    d[1] = stencil(f, 0, C2_EDGE1, 6) * s;
    for (int i = 2; i < n - 2; ++i) d[i] = stencil(f, i - 2, C2_CENTRAL, 5) * s;
    double rev1[6], rev0[6];
    for (int k = 0; k < 6; ++k) {
      rev1[k] = C2_EDGE1[5 - k];
      rev0[k] = C2_EDGE0[5 - k];
    }
    d[n - 2] = stencil(f, n - 6, rev1, 6) * s;
    d[n - 1] = stencil(f, n - 6, rev0, 6) * s;
  }
  return d;
}

} // namespace milne
