#pragma once

// Grid-refinement utilities: observed order of accuracy by least-squares
// regression of log(error) against log(h).

#include <cmath>
#include <vector>

#include "milne/errors.hpp"

namespace milne {

/// Least-squares slope of log(err) vs log(h). Errors of zero (or below
/// 1e-300) are clamped to keep the fit finite.
inline double fitted_order(const std::vector<double>& hs,
                           const std::vector<double>& errs) {
  if (hs.size() != errs.size() || hs.size() < 2)
    throw InvalidConfig("fitted_order: need matching lists of >= 2 levels");
  const int n = (int)hs.size();
  double mx = 0, my = 0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    lx[i] = std::log(hs[i]);
    ly[i] = std::log(std::max(errs[i], 1e-300));
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

} // namespace milne
