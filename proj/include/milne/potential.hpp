#pragma once

// Potentials V(x) and the coefficient profile k^2(x) = 2m[E - V(x)]/hbar^2
// of the stationary equation psi'' + k^2 psi = 0. Profiles carry both a
// double evaluator and (for the analytic catalog) a double-double one, so
// the cancellation-critical pipelines can sample the coefficient at full
// precision.

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "milne/ddouble.hpp"
#include "milne/errors.hpp"
#include "milne/grid.hpp"
#include "milne/hermite.hpp"

namespace milne {

struct PhysicalParams {
  double mass = 1.0;
  double hbar = 1.0;
  double energy = 0.0;

  void check() const {
    if (!(mass > 0.0) || !(hbar > 0.0))
      throw InvalidConfig("PhysicalParams: mass and hbar must be positive");
  }
};

class Potential {
public:
  enum class Kind { Free, Constant, Harmonic, Linear, Tabulated };

  static Potential free() { return Potential(Kind::Free, 0.0); }
  static Potential constant(double v0) { return Potential(Kind::Constant, v0); }
  static Potential harmonic(double omega) { return Potential(Kind::Harmonic, omega); }
  static Potential linear(double slope) { return Potential(Kind::Linear, slope); }
  static Potential tabulated(Grid grid, std::vector<double> samples) {
    if ((int)samples.size() != grid.n_points)
      throw GridMismatch("Potential::tabulated: sample count != grid.n_points");
    Potential p(Kind::Tabulated, 0.0);
    p.table_ = std::make_shared<Table>(Table{grid, std::move(samples)});
    return p;
  }

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }

  /// V(x); the harmonic case is V = (1/2) m omega^2 x^2.
  template <class R>
  R value(R x, double mass) const {
    switch (kind_) {
      case Kind::Free: return R(0.0);
      case Kind::Constant: return R(param_);
      case Kind::Harmonic: return x * x * (0.5 * mass * param_ * param_);
      case Kind::Linear: return x * param_;
      case Kind::Tabulated: return R(interp(to_double(x)));
    }
    return R(0.0);
  }

private:
  struct Table {
    Grid grid;
    std::vector<double> v;
  };

  Potential(Kind k, double p) : kind_(k), param_(p) {}

  double interp(double x) const {
    const Grid& g = table_->grid;
    const double h = g.step();
    if (x < g.x_start - h * 1e-9 || x > g.x_end + h * 1e-9)
      throw InvalidConfig("tabulated potential evaluated outside its grid");
    int i = (int)std::floor((x - g.x_start) / h);
    if (i < 0) i = 0;
    if (i > g.n_points - 2) i = g.n_points - 2;
    double t = (x - g.x(i)) / h;
    return table_->v[i] * (1.0 - t) + table_->v[i + 1] * t;
  }

  Kind kind_;
  double param_;
  std::shared_ptr<const Table> table_;
};

/// k^2(x) with its provenance. eval_dd falls back to promoting the double
/// evaluator when no extended-precision form exists (tabulated potentials,
/// phase-derived profiles).
struct KSquaredProfile {
  enum class Provenance { FromPotential, FromPhase, Direct };

  std::function<double(double)> eval;
  std::function<ddouble(double)> eval_dd_fn;
  Provenance provenance = Provenance::Direct;

  double operator()(double x) const { return eval(x); }
  ddouble eval_dd(double x) const {
    return eval_dd_fn ? eval_dd_fn(x) : ddouble(eval(x));
  }

  static KSquaredProfile direct(std::function<double(double)> f) {
    KSquaredProfile p;
    p.eval = std::move(f);
    p.provenance = Provenance::Direct;
    return p;
  }
};

/// k^2(x) = 2m[E - V(x)]/hbar^2.
inline KSquaredProfile k_squared(const Potential& pot, const PhysicalParams& params) {
  params.check();
  KSquaredProfile p;
  p.provenance = KSquaredProfile::Provenance::FromPotential;
  const double m = params.mass, hb = params.hbar, E = params.energy;
  const double pref = 2.0 * m / (hb * hb);
  p.eval = [pot, m, E, pref](double x) {
    return pref * (E - pot.value<double>(x, m));
  };
  if (pot.kind() != Potential::Kind::Tabulated) {
    p.eval_dd_fn = [pot, m, E, pref](double x) {
      return (ddouble(E) - pot.value<ddouble>(ddouble(x), m)) * pref;
    };
  }
  return p;
}

} // namespace milne
