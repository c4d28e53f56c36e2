// milne-verify: batch verification runs for the amplitude-phase identities
// and the nonlinear-Milne counterexample, with machine-readable reports.
//
// Exit codes: 0 all checks matched their expected outcomes, 1 a
// verification check failed, 2 configuration or I/O error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "milne/convergence.hpp"
#include "milne/milne.hpp"
#include "milne/pipeline.hpp"
#include "milne/report_io.hpp"

namespace {

using namespace milne;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct GridOptions {
  double x_start = -5.0;
  double x_end = 5.0;
  int n_points = 4001;

  Grid build() const {
    if (n_points < 33)
      throw InvalidConfig("need n_points >= 33 (5-point stencils plus refinement)");
    if (!std::isfinite(x_start) || !std::isfinite(x_end))
      throw InvalidConfig("grid bounds must be finite");
    return Grid(x_start, x_end, n_points);
  }
};

struct PotentialOptions {
  std::string name = "free";
  double energy = 0.5;
  double v0 = 0.3;
  double omega = 1.0;
  double slope = 1.0;
  std::string table_file;
};

Potential load_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open potential file: " + path);
  std::vector<double> xs, vs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
    std::istringstream row(line);
    double x, v;
    char comma;
    if (!(row >> x >> comma >> v))
      throw InvalidConfig("potential file: expected 'x,V' rows");
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < 2) throw InvalidConfig("potential file: need >= 2 rows");
  Grid g(xs.front(), xs.back(), (int)xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - g.x((int)i)) > 1e-9 * std::max(1.0, g.step()))
      throw InvalidConfig("potential file: x column must be uniformly spaced");
  return Potential::tabulated(g, vs);
}

Potential build_potential(const PotentialOptions& o) {
  if (o.name == "free") return Potential::free();
  if (o.name == "constant") return Potential::constant(o.v0);
  if (o.name == "harmonic") return Potential::harmonic(o.omega);
  if (o.name == "linear") return Potential::linear(o.slope);
  if (o.name == "tabulated") {
    if (o.table_file.empty())
      throw InvalidConfig("tabulated potential needs --potential-file");
    return load_tabulated(o.table_file);
  }
  throw InvalidConfig("unknown potential: " + o.name);
}

ordered_json potential_config_json(const PotentialOptions& o, const GridOptions& g) {
  ordered_json cfg{{"potential", o.name}, {"energy", o.energy}};
  if (o.name == "constant") cfg["v0"] = o.v0;
  if (o.name == "harmonic") cfg["omega"] = o.omega;
  if (o.name == "linear") cfg["slope"] = o.slope;
  if (o.name == "tabulated") cfg["potential_file"] = o.table_file;
  cfg["x_start"] = g.x_start;
  cfg["x_end"] = g.x_end;
  cfg["n_points"] = g.n_points;
  return cfg;
}

void add_grid_options(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--x-start", g.x_start, "left end of the sample domain");
  cmd->add_option("--x-end", g.x_end, "right end of the sample domain");
  cmd->add_option("--n-points", g.n_points, "grid points (>= 33)");
}

void add_potential_options(CLI::App* cmd, PotentialOptions& p) {
  cmd->add_option("--potential", p.name,
                  "free|constant|harmonic|linear|tabulated")
      ->check(CLI::IsMember({"free", "constant", "harmonic", "linear", "tabulated"}));
  cmd->add_option("--energy", p.energy, "energy E in k^2 = 2m(E - V)");
  cmd->add_option("--v0", p.v0, "constant potential level");
  cmd->add_option("--omega", p.omega, "harmonic frequency");
  cmd->add_option("--slope", p.slope, "linear potential slope");
  cmd->add_option("--potential-file", p.table_file, "csv x,V table");
}

// ---------------------------------------------------------------- verify-k

struct VerifyKOptions {
  PotentialOptions pot;
  GridOptions grid;
  int n_ic = 20;
  std::uint64_t seed = 12345;
  double tol = 1e-7;
  bool inconsistent = false;
  int refine = 0;
  std::string format = "json";
  std::string out;
};

int run_verify_k(const VerifyKOptions& o) {
  auto t_total = Clock::now();
  Grid grid = o.grid.build();
  auto k2 = k_squared(build_potential(o.pot), {1.0, 1.0, o.pot.energy});

  VerifyKTolerances tols;
  tols.k_rel = o.tol;

  IcSampler sampler(o.seed);
  std::vector<IcDraw> draws(o.n_ic);
  for (int i = 0; i < o.n_ic; ++i) draws[i] = sampler.draw();

  std::vector<VerifyKCaseResult> cases;
  std::vector<double> wall;
  bool all_pass = true;
  for (int i = 0; i < o.n_ic; ++i) {
    auto t0 = Clock::now();
    cases.push_back(run_verify_k_case(k2, grid, draws[i], tols, o.inconsistent));
    wall.push_back(elapsed_ms(t0));
    all_pass = all_pass && cases.back().pass;
  }

  ordered_json refinement;
  if (o.refine > 0) {
    std::vector<double> hs, fd_res;
    for (int level = o.refine; level >= 0; --level) {
      Grid gl = coarsen(grid, level);
      auto c = run_verify_k_case(k2, gl, draws[0], tols, false);
      const auto* r = find_report(c.reports, "schrodinger_fd_residual");
      hs.push_back(gl.step());
      fd_res.push_back(r ? r->max_abs : 0.0);
    }
    refinement = ordered_json{{"levels", o.refine + 1},
                              {"h", hs},
                              {"fd_residual_max", fd_res},
                              {"observed_order", fitted_order(hs, fd_res)}};
  }

  ordered_json cfg = potential_config_json(o.pot, o.grid);
  cfg["n_ic"] = o.n_ic;
  cfg["seed"] = o.seed;
  cfg["tol"] = o.tol;
  cfg["inconsistent"] = o.inconsistent;
  cfg["refine"] = o.refine;
  cfg["format"] = o.format;

  if (o.format == "csv") {
    std::string text = verify_k_csv_header();
    for (int i = 0; i < o.n_ic; ++i)
      text += verify_k_csv_row(i, o.pot.name, o.pot.energy, o.seed, i, cases[i]);
    write_output(o.out, text);
  } else {
    ordered_json doc{{"version", version}, {"command", "verify-k"}, {"config", cfg}};
    ordered_json jcases = ordered_json::array();
    for (int i = 0; i < o.n_ic; ++i) jcases.push_back(to_json(cases[i], wall[i]));
    doc["cases"] = jcases;
    if (!refinement.is_null()) doc["refinement"] = refinement;
    doc["verdict"] = all_pass ? "pass" : "fail";
    doc["wall_ms_total"] = elapsed_ms(t_total);
    write_output(o.out, doc.dump(2) + "\n");
  }
  return all_pass ? 0 : 1;
}

// ----------------------------------------------------------- counterexample

struct CounterexampleOptions {
  double c1 = 1.0;
  double s0 = 0.0;
  double ds0 = 0.5;
  GridOptions grid{0.0, 10.0, 4001};
  double tol = 1e-6;
  int refine = 0;
  std::string format = "json";
  std::string out;
  std::string samples_out;
};

int run_counterexample(const CounterexampleOptions& o) {
  auto t_total = Clock::now();
  Grid grid = o.grid.build();
  CounterexampleTolerances tols;
  tols.closure_rel = o.tol;

  auto t0 = Clock::now();
  auto c = run_counterexample_case(o.c1, o.s0, o.ds0, grid, tols);
  double wall = elapsed_ms(t0);

  ordered_json refinement;
  if (o.refine > 0) {
    std::vector<double> hs, closure;
    for (int level = o.refine; level >= 0; --level) {
      Grid gl = coarsen(grid, level);
      auto cl = run_counterexample_case(o.c1, o.s0, o.ds0, gl, tols);
      const auto* r = find_report(cl.reports, "nonlinear_milne_residual");
      hs.push_back(gl.step());
      closure.push_back(r ? r->max_abs : 0.0);
    }
    refinement = ordered_json{{"levels", o.refine + 1},
                              {"h", hs},
                              {"closure_residual_max", closure},
                              {"observed_order", fitted_order(hs, closure)}};
  }

  if (!o.samples_out.empty())
    write_output(o.samples_out, counterexample_samples_csv(c));

  ordered_json cfg{{"c1", o.c1},     {"s0", o.s0},
                   {"ds0", o.ds0},   {"x_start", o.grid.x_start},
                   {"x_end", o.grid.x_end}, {"n_points", o.grid.n_points},
                   {"tol", o.tol},   {"refine", o.refine},
                   {"format", o.format}};

  if (o.format == "csv") {
    std::string text = counterexample_csv_header();
    text += counterexample_csv_row(0, c);
    write_output(o.out, text);
  } else {
    ordered_json doc{{"version", version},
                     {"command", "counterexample"},
                     {"config", cfg},
                     {"cases", ordered_json::array({to_json(c, wall)})}};
    if (!refinement.is_null()) doc["refinement"] = refinement;
    doc["verdict"] = c.pass ? "pass" : "fail";
    doc["wall_ms_total"] = elapsed_ms(t_total);
    write_output(o.out, doc.dump(2) + "\n");
  }
  return c.pass ? 0 : 1;
}

// ------------------------------------------------------------------- solve

struct MilneSolveOptions {
  PotentialOptions pot;
  GridOptions grid;
  double c = 1.0;
  double u0 = 1.0;
  double du0 = 0.0;
  std::string method = "adaptive";
  std::string format = "json";
  std::string out;
};

IntegratorConfig method_config(const std::string& method) {
  IntegratorConfig cfg;
  cfg.method = method == "fixed" ? Method::FixedRk4 : Method::Adaptive45;
  return cfg;
}

int run_milne_solve(const MilneSolveOptions& o) {
  Grid grid = o.grid.build();
  auto k2 = k_squared(build_potential(o.pot), {1.0, 1.0, o.pot.energy});
  auto amp = solve_milne(k2, o.c, o.u0, o.du0, grid, method_config(o.method));
  auto report = milne_residual(amp, k2);

  if (o.format == "csv") {
    std::string text = "x,u,u_prime\n";
    for (int i = 0; i < grid.n_points; ++i)
      text += format_sci17(grid.x(i)) + "," + format_sci17(amp.u[i]) + "," +
              format_sci17(amp.u_prime[i]) + "\n";
    write_output(o.out, text);
  } else {
    ordered_json cfg = potential_config_json(o.pot, o.grid);
    cfg["c"] = o.c;
    cfg["u0"] = o.u0;
    cfg["du0"] = o.du0;
    cfg["method"] = o.method;
    ordered_json doc{{"version", version}, {"command", "milne-solve"}, {"config", cfg}};
    doc["samples"] = ordered_json{{"x", grid.points()}, {"u", amp.u}, {"u_prime", amp.u_prime}};
    doc["reports"] = ordered_json::array({to_json(report)});
    doc["verdict"] = report.pass ? "pass" : "fail";
    write_output(o.out, doc.dump(2) + "\n");
  }
  return report.pass ? 0 : 1;
}

struct SchrodingerSolveOptions {
  PotentialOptions pot;
  GridOptions grid;
  double psi0_re = 1.0, psi0_im = 0.0;
  double dpsi0_re = 0.0, dpsi0_im = 1.0;
  std::string method = "adaptive";
  std::string format = "json";
  std::string out;
};

int run_schrodinger_solve(const SchrodingerSolveOptions& o) {
  Grid grid = o.grid.build();
  auto k2 = k_squared(build_potential(o.pot), {1.0, 1.0, o.pot.energy});
  auto psi = solve_linear<double>(k2, {o.psi0_re, o.psi0_im},
                                  {o.dpsi0_re, o.dpsi0_im}, grid,
                                  method_config(o.method));
  auto report = linear_residual(psi, k2);

  if (o.format == "csv") {
    std::string text = "x,psi_re,psi_im,psi_prime_re,psi_prime_im\n";
    for (int i = 0; i < grid.n_points; ++i)
      text += format_sci17(grid.x(i)) + "," + format_sci17(psi.psi[i].re) + "," +
              format_sci17(psi.psi[i].im) + "," +
              format_sci17(psi.psi_prime[i].re) + "," +
              format_sci17(psi.psi_prime[i].im) + "\n";
    write_output(o.out, text);
  } else {
    ordered_json cfg = potential_config_json(o.pot, o.grid);
    cfg["psi0"] = {o.psi0_re, o.psi0_im};
    cfg["dpsi0"] = {o.dpsi0_re, o.dpsi0_im};
    cfg["method"] = o.method;
    std::vector<double> pr(grid.n_points), pi(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
      pr[i] = psi.psi[i].re;
      pi[i] = psi.psi[i].im;
    }
    ordered_json doc{{"version", version},
                     {"command", "schrodinger-solve"},
                     {"config", cfg}};
    doc["samples"] = ordered_json{{"x", grid.points()}, {"psi_re", pr}, {"psi_im", pi}};
    doc["reports"] = ordered_json::array({to_json(report)});
    doc["verdict"] = report.pass ? "pass" : "fail";
    write_output(o.out, doc.dump(2) + "\n");
  }
  return report.pass ? 0 : 1;
}

// ------------------------------------------------------------------- sweep

struct SweepOptions {
  std::string kind = "counterexample";
  std::vector<double> c1{1.0};
  std::vector<double> s0{0.0};
  std::vector<double> ds0{0.5};
  std::vector<std::string> potentials{"free"};
  std::vector<double> energies{0.5};
  PotentialOptions pot; // carries omega/v0/slope defaults for named potentials
  GridOptions grid{0.0, 10.0, 4001};
  int n_ic = 5;
  std::uint64_t seed = 12345;
  double tol = 1e-6;
  std::string format = "csv";
  std::string out;
};

int run_sweep(const SweepOptions& o) {
  auto t_total = Clock::now();
  Grid grid = o.grid.build();
  bool all_pass = true;
  ordered_json jcases = ordered_json::array();
  std::string csv;

  if (o.kind == "counterexample") {
    CounterexampleTolerances tols;
    tols.closure_rel = o.tol;
    csv = counterexample_csv_header();
    int index = 0;
    for (double c1 : o.c1)
      for (double s0 : o.s0)
        for (double ds0 : o.ds0) {
          auto t0 = Clock::now();
          auto c = run_counterexample_case(c1, s0, ds0, grid, tols);
          all_pass = all_pass && c.pass;
          csv += counterexample_csv_row(index, c);
          jcases.push_back(to_json(c, elapsed_ms(t0)));
          ++index;
        }
  } else if (o.kind == "verify-k") {
    VerifyKTolerances tols;
    csv = verify_k_csv_header();
    int index = 0, combo = 0;
    for (const auto& name : o.potentials)
      for (double energy : o.energies) {
        PotentialOptions p = o.pot;
        p.name = name;
        p.energy = energy;
        auto k2 = k_squared(build_potential(p), {1.0, 1.0, energy});
        IcSampler sampler(o.seed + 1000003ull * combo);
        for (int i = 0; i < o.n_ic; ++i) {
          auto t0 = Clock::now();
          auto c = run_verify_k_case(k2, grid, sampler.draw(), tols, false);
          all_pass = all_pass && c.pass;
          csv += verify_k_csv_row(index, name, energy, o.seed, i, c);
          jcases.push_back(to_json(c, elapsed_ms(t0)));
          ++index;
        }
        ++combo;
      }
  } else {
    throw InvalidConfig("sweep kind must be counterexample or verify-k");
  }

  if (o.format == "csv") {
    write_output(o.out, csv);
  } else {
    ordered_json cfg{{"kind", o.kind},
                     {"c1", o.c1},
                     {"s0", o.s0},
                     {"ds0", o.ds0},
                     {"potentials", o.potentials},
                     {"energies", o.energies},
                     {"x_start", o.grid.x_start},
                     {"x_end", o.grid.x_end},
                     {"n_points", o.grid.n_points},
                     {"n_ic", o.n_ic},
                     {"seed", o.seed},
                     {"tol", o.tol},
                     {"format", o.format}};
    ordered_json doc{{"version", version},
                     {"command", "sweep"},
                     {"config", cfg},
                     {"cases", jcases},
                     {"verdict", all_pass ? "pass" : "fail"},
                     {"wall_ms_total", elapsed_ms(t_total)}};
    write_output(o.out, doc.dump(2) + "\n");
  }
  return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of the Milne amplitude-phase "
               "representation of the 1-D stationary Schrodinger equation"};
  app.require_subcommand(1);

  VerifyKOptions vk;
  auto* cmd_vk = app.add_subcommand(
      "verify-k", "check that K = c^2(psi/u)^2 + (psi'u - u'psi)^2 vanishes "
                  "over randomized solutions");
  add_potential_options(cmd_vk, vk.pot);
  add_grid_options(cmd_vk, vk.grid);
  cmd_vk->add_option("--n-ic", vk.n_ic, "number of random initial conditions")
      ->check(CLI::PositiveNumber);
  cmd_vk->add_option("--seed", vk.seed, "random seed");
  cmd_vk->add_option("--tol", vk.tol, "relative tolerance for max|K| vs c^2 N^2");
  cmd_vk->add_flag("--inconsistent", vk.inconsistent,
                   "negative control: amplitude from a mismatched c");
  cmd_vk->add_option("--refine", vk.refine, "grid-halving levels for order study");
  cmd_vk->add_option("--format", vk.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_vk->add_option("--out", vk.out, "output path ('-' = stdout)");

  CounterexampleOptions ce;
  auto* cmd_ce = app.add_subcommand(
      "counterexample", "construct psi = e^{iS} solving the nonlinear "
                        "Milne-type equation and show calK is not constant");
  cmd_ce->add_option("--c1", ce.c1, "coupling constant c1 (nonzero)");
  cmd_ce->add_option("--s0", ce.s0, "initial phase S(x_start)");
  cmd_ce->add_option("--ds0", ce.ds0, "initial phase slope S'(x_start)");
  add_grid_options(cmd_ce, ce.grid);
  cmd_ce->add_option("--tol", ce.tol, "relative tolerance for the closure residual");
  cmd_ce->add_option("--refine", ce.refine, "grid-halving levels for order study");
  cmd_ce->add_option("--format", ce.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_ce->add_option("--out", ce.out, "output path ('-' = stdout)");
  cmd_ce->add_option("--samples-out", ce.samples_out,
                     "write x,S,S',k2,Re calK,Im calK samples (csv)");

  MilneSolveOptions ms;
  auto* cmd_ms = app.add_subcommand("milne-solve",
                                    "integrate u'' + k^2 u = c^2/u^3");
  add_potential_options(cmd_ms, ms.pot);
  add_grid_options(cmd_ms, ms.grid);
  cmd_ms->add_option("--c", ms.c, "Milne constant");
  cmd_ms->add_option("--u0", ms.u0, "initial amplitude (> 0)");
  cmd_ms->add_option("--du0", ms.du0, "initial amplitude slope");
  cmd_ms->add_option("--method", ms.method, "fixed|adaptive")
      ->check(CLI::IsMember({"fixed", "adaptive"}));
  cmd_ms->add_option("--format", ms.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_ms->add_option("--out", ms.out, "output path ('-' = stdout)");

  SchrodingerSolveOptions ss;
  auto* cmd_ss = app.add_subcommand("schrodinger-solve",
                                    "integrate psi'' + k^2 psi = 0");
  add_potential_options(cmd_ss, ss.pot);
  add_grid_options(cmd_ss, ss.grid);
  cmd_ss->add_option("--psi0-re", ss.psi0_re, "Re psi(x_start)");
  cmd_ss->add_option("--psi0-im", ss.psi0_im, "Im psi(x_start)");
  cmd_ss->add_option("--dpsi0-re", ss.dpsi0_re, "Re psi'(x_start)");
  cmd_ss->add_option("--dpsi0-im", ss.dpsi0_im, "Im psi'(x_start)");
  cmd_ss->add_option("--method", ss.method, "fixed|adaptive")
      ->check(CLI::IsMember({"fixed", "adaptive"}));
  cmd_ss->add_option("--format", ss.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_ss->add_option("--out", ss.out, "output path ('-' = stdout)");

  SweepOptions sw;
  auto* cmd_sw = app.add_subcommand("sweep", "cross-product parameter sweep");
  cmd_sw->add_option("--kind", sw.kind, "counterexample|verify-k")
      ->check(CLI::IsMember({"counterexample", "verify-k"}));
  cmd_sw->add_option("--c1", sw.c1, "c1 values")->delimiter(',');
  cmd_sw->add_option("--s0", sw.s0, "S0 values")->delimiter(',');
  cmd_sw->add_option("--ds0", sw.ds0, "S'0 values")->delimiter(',');
  cmd_sw->add_option("--potentials", sw.potentials, "potential names")->delimiter(',');
  cmd_sw->add_option("--energies", sw.energies, "energy values")->delimiter(',');
  cmd_sw->add_option("--omega", sw.pot.omega, "harmonic frequency");
  cmd_sw->add_option("--v0", sw.pot.v0, "constant potential level");
  cmd_sw->add_option("--slope", sw.pot.slope, "linear potential slope");
  add_grid_options(cmd_sw, sw.grid);
  cmd_sw->add_option("--n-ic", sw.n_ic, "random draws per verify-k combo");
  cmd_sw->add_option("--seed", sw.seed, "random seed");
  cmd_sw->add_option("--tol", sw.tol, "relative residual tolerance");
  cmd_sw->add_option("--format", sw.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_sw->add_option("--out", sw.out, "output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_vk->parsed()) return run_verify_k(vk);
    if (cmd_ce->parsed()) return run_counterexample(ce);
    if (cmd_ms->parsed()) return run_milne_solve(ms);
    if (cmd_ss->parsed()) return run_schrodinger_solve(ss);
    if (cmd_sw->parsed()) return run_sweep(sw);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
