#pragma once

#include <vector>

#include "milne/errors.hpp"

namespace milne {

/// Uniform 1-D sample domain. Samples are x_i = x_start + i*step(),
/// i = 0 .. n_points-1.
struct Grid {
  double x_start = 0.0;
  double x_end = 1.0;
  int n_points = 2;

  Grid() = default;
  Grid(double a, double b, int n) : x_start(a), x_end(b), n_points(n) {
    if (!(b > a))
      throw InvalidConfig("Grid: x_end must exceed x_start");
    if (n < 2)
      throw InvalidConfig("Grid: need at least 2 points");
  }

  double step() const { return (x_end - x_start) / (n_points - 1); }
  double x(int i) const { return x_start + i * step(); }

  std::vector<double> points() const {
    std::vector<double> xs(n_points);
    for (int i = 0; i < n_points; ++i) xs[i] = x(i);
    return xs;
  }

  bool operator==(const Grid&) const = default;
};

/// Grid with (n-1)/2^levels intervals; requires divisibility.
inline Grid coarsen(const Grid& g, int levels) {
  int intervals = g.n_points - 1;
  for (int l = 0; l < levels; ++l) {
    if (intervals % 2 != 0)
      throw InvalidConfig("coarsen: interval count not divisible by 2^levels");
    intervals /= 2;
  }
  if (intervals < 1) throw InvalidConfig("coarsen: too many levels");
  return Grid(g.x_start, g.x_end, intervals + 1);
}

inline void require_same_grid(const Grid& a, const Grid& b, const char* who) {
  if (!(a == b)) throw GridMismatch(std::string(who) + ": grids differ");
}

} // namespace milne
