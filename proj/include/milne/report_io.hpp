#pragma once

// JSON / CSV serialization for suite reports. JSON uses nlohmann with
// insertion order preserved so identical runs serialize byte-identically
// (wall-time fields aside). CSV cells are '.'-decimal scientific with 17
// significant digits for bit-faithful re-analysis.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "milne/errors.hpp"
#include "milne/pipeline.hpp"
#include "milne/report.hpp"

namespace milne {

using ordered_json = nlohmann::ordered_json;

inline std::string format_sci17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline ordered_json to_json(const ResidualReport& r) {
  return ordered_json{{"name", r.name},
                      {"max_abs", r.max_abs},
                      {"rms", r.rms},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass},
                      {"grid_points", r.grid_points}};
}

inline ordered_json to_json(const VerifyKCaseResult& c, double wall_ms) {
  ordered_json reports = ordered_json::array();
  for (const auto& r : c.reports) reports.push_back(to_json(r));
  return ordered_json{{"psi0", {c.ic.psi0.re, c.ic.psi0.im}},
                      {"dpsi0", {c.ic.dpsi0.re, c.ic.dpsi0.im}},
                      {"c", c.c},
                      {"term1_max", c.term1_max},
                      {"u_min", c.u_min},
                      {"u_max", c.u_max},
                      {"phase_resolved", c.phase_resolved},
                      {"inconsistent", c.inconsistent},
                      {"expected_fail", c.expected_fail},
                      {"reports", reports},
                      {"pass", c.pass},
                      {"wall_ms", wall_ms}};
}

inline ordered_json to_json(const CounterexampleCaseResult& c, double wall_ms) {
  ordered_json reports = ordered_json::array();
  for (const auto& r : c.reports) reports.push_back(to_json(r));
  return ordered_json{{"c1", c.c1},
                      {"s0", c.S0},
                      {"ds0", c.dS0},
                      {"phase_class", c.constant_phase ? "constant-phase" : "variable-phase"},
                      {"s_spread", c.s_spread},
                      {"calk_spread", c.calk_spread},
                      {"expected_fail", c.expected_fail},
                      {"reports", reports},
                      {"pass", c.pass},
                      {"wall_ms", wall_ms}};
}

inline std::string verify_k_csv_header() {
  return "case,potential,energy,seed,ic_index,c,n_points,k_max_abs,"
         "k_tolerance,term1_max,identity_max_abs,identity_tolerance,"
         "wronskian_max_dev,phase_resolved,pass\n";
}

inline const ResidualReport* find_report(const std::vector<ResidualReport>& rs,
                                         const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return &r;
  return nullptr;
}

inline std::string verify_k_csv_row(int case_index, const std::string& potential,
                                    double energy, std::uint64_t seed,
                                    int ic_index, const VerifyKCaseResult& c) {
  const auto* k = find_report(c.reports, "K_vanishing");
  const auto* id = find_report(c.reports, "wronskian_identity");
  const auto* w = find_report(c.reports, "wronskian_constancy");
  std::string row = std::to_string(case_index) + "," + potential + "," +
                    format_sci17(energy) + "," + std::to_string(seed) + "," +
                    std::to_string(ic_index) + "," + format_sci17(c.c) + "," +
                    std::to_string(k ? k->grid_points : 0) + "," +
                    format_sci17(k ? k->max_abs : 0.0) + "," +
                    format_sci17(k ? k->tolerance : 0.0) + "," +
                    format_sci17(c.term1_max) + "," +
                    format_sci17(id ? id->max_abs : 0.0) + "," +
                    format_sci17(id ? id->tolerance : 0.0) + "," +
                    format_sci17(w ? w->max_abs : 0.0) + "," +
                    (c.phase_resolved ? "1" : "0") + "," +
                    (c.pass ? "1" : "0") + "\n";
  return row;
}

inline std::string counterexample_csv_header() {
  return "case,c1,s0,ds0,n_points,closure_max_abs,closure_tolerance,"
         "energy_drift,energy_tolerance,calk_modulus_dev,calk_spread,"
         "phase_class,pass\n";
}

inline std::string counterexample_csv_row(int case_index,
                                          const CounterexampleCaseResult& c) {
  const auto* cl = find_report(c.reports, "nonlinear_milne_residual");
  const auto* en = find_report(c.reports, "pendulum_energy_drift");
  const auto* mo = find_report(c.reports, "calK_modulus_constancy");
  std::string row = std::to_string(case_index) + "," + format_sci17(c.c1) + "," +
                    format_sci17(c.S0) + "," + format_sci17(c.dS0) + "," +
                    std::to_string(cl ? cl->grid_points : 0) + "," +
                    format_sci17(cl ? cl->max_abs : 0.0) + "," +
                    format_sci17(cl ? cl->tolerance : 0.0) + "," +
                    format_sci17(en ? en->max_abs : 0.0) + "," +
                    format_sci17(en ? en->tolerance : 0.0) + "," +
                    format_sci17(mo ? mo->max_abs : 0.0) + "," +
                    format_sci17(c.calk_spread) + "," +
                    (c.constant_phase ? "constant-phase" : "variable-phase") +
                    "," + (c.pass ? "1" : "0") + "\n";
  return row;
}

/// Columns for plotting one counterexample case.
inline std::string counterexample_samples_csv(const CounterexampleCaseResult& c) {
  std::string text = "x,S,S_prime,k2,calK_re,calK_im\n";
  const Grid& g = c.phase.grid;
  for (int i = 0; i < g.n_points; ++i) {
    text += format_sci17(g.x(i)) + "," + format_sci17(c.phase.S[i]) + "," +
            format_sci17(c.phase.S_prime[i]) + "," +
            format_sci17(c.k2_samples[i]) + "," + format_sci17(c.calK[i].re) +
            "," + format_sci17(c.calK[i].im) + "\n";
  }
  return text;
}

/// Write to a file, or to stdout when path is empty or "-".
inline void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << text;
  if (!out) throw IoError("failed writing output file: " + path);
}

} // namespace milne
