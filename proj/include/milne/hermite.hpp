#pragma once

// Piecewise cubic Hermite interpolation from samples of a function and its
// exact derivative on a uniform grid. Node values reproduce bitwise;
// off-node error is O(h^4), matching the integrators, so sampled
// coefficient profiles stay usable as right-hand sides.

#include <cmath>
#include <vector>

#include "milne/errors.hpp"
#include "milne/grid.hpp"

namespace milne {

template <class T>
class CubicHermite {
public:
  CubicHermite() = default;
  CubicHermite(Grid grid, std::vector<T> values, std::vector<T> derivs)
      : grid_(grid), y_(std::move(values)), dy_(std::move(derivs)) {
    if ((int)y_.size() != grid_.n_points || (int)dy_.size() != grid_.n_points)
      throw GridMismatch("CubicHermite: sample count != grid.n_points");
  }

  const Grid& grid() const { return grid_; }

  T operator()(double x) const {
    const double h = grid_.step();
    int i = (int)std::floor((x - grid_.x_start) / h);
    if (i < 0) i = 0;
    if (i > grid_.n_points - 2) i = grid_.n_points - 2;
    const double t = (x - grid_.x(i)) / h;
    if (t == 0.0) return y_[i];
    // factorizations chosen so t=1 returns y_[i+1] exactly
    const double h00 = (2.0 * t - 3.0) * t * t + 1.0;
    const double h10 = ((t - 2.0) * t + 1.0) * t;
    const double h01 = (3.0 - 2.0 * t) * t * t;
    const double h11 = (t - 1.0) * t * t;
    return y_[i] * h00 + dy_[i] * (h10 * h) + y_[i + 1] * h01 +
           dy_[i + 1] * (h11 * h);
  }

private:
  Grid grid_;
  std::vector<T> y_, dy_;
};

} // namespace milne
