#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace milne {

/// Named residual statistics with the tolerance they were checked against.
/// pass <=> max_abs <= tolerance. For equation residuals the tolerance is
/// a relative one multiplied by the magnitude scale of the equation's
/// terms, so max_abs stays in the raw units of the samples.
struct ResidualReport {
  std::string name;
  double max_abs = 0.0;
  double rms = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int grid_points = 0;
};

inline ResidualReport make_report(std::string name,
                                  const std::vector<double>& abs_residuals,
                                  double tolerance) {
  ResidualReport r;
  r.name = std::move(name);
  r.grid_points = (int)abs_residuals.size();
  double ss = 0.0;
  for (double a : abs_residuals) {
    if (a > r.max_abs) r.max_abs = a;
    ss += a * a;
  }
  r.rms = abs_residuals.empty() ? 0.0 : std::sqrt(ss / abs_residuals.size());
  r.tolerance = tolerance;
  r.pass = r.max_abs <= tolerance;
  return r;
}

} // namespace milne
