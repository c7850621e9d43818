#include <map>

#include "scenario.hpp"

namespace bridge::cli {

namespace {

// Builtin scenarios, keyed by name. Figure runs pin tolerances at 1e-10.
const std::map<std::string, std::string>& table() {
  static const std::map<std::string, std::string> t = {
      {"figure12", R"({
  "name": "figure12", "model": "ode4",
  "parameters": {"family": "canonical", "k": 3,
                 "nonlinearity": {"kind": "cubic", "params": {"epsilon": 1}},
                 "initial": [1, 0, 0, 0],
                 "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-10, "max_step": 0.5, "blowup_threshold": 1e6, "t_end": 20}},
  "outputs": [{"csv_path": "figure12.csv", "svg_path": "figure12.svg", "y_clip": 30}],
  "report_path": "figure12_report.json"})"},
      {"figure13", R"({
  "name": "figure13", "model": "ode4",
  "parameters": {"family": "canonical", "k": 3.6,
                 "nonlinearity": {"kind": "cubic", "params": {"epsilon": 1}},
                 "initial": [0.9, 0, 0, 0],
                 "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-10, "max_step": 0.5, "blowup_threshold": 1e6, "t_end": 120}},
  "outputs": [{"csv_path": "figure13.csv", "svg_path": "figure13.svg", "y_clip": 30}],
  "report_path": "figure13_report.json"})"},
      {"figure16-eps0.1", R"({
  "name": "figure16-eps0.1", "model": "miosyst",
  "parameters": {"beta": -1, "delta": 1,
                 "nonlinearity": {"kind": "cubic", "params": {"epsilon": 0.1}},
                 "initial": {"x": 1, "y": 0, "xd": 1, "yd": -1},
                 "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-10, "max_step": 0.5, "blowup_threshold": 1e6, "t_end": 10}},
  "outputs": [{"csv_path": "figure16.csv", "svg_path": "figure16.svg", "y_clip": 100},
              {"csv_path": "figure16_w.csv", "svg_path": "figure16_w.svg", "y_clip": 100}],
  "report_path": "figure16_report.json"})"},
      {"tacoma-eigen-625", R"({
  "name": "tacoma-eigen-625", "model": "modes",
  "parameters": {"geom": {"L": 3.141592653589793, "l": 1.5707963267948966, "sigma": 0.2},
                 "m_max": 4, "navier_S": [625], "grid": 64,
                 "field": {"family": "navier_square", "m": 24, "n": 7, "grid": 96}},
  "outputs": [{"csv_path": "tacoma_modes.csv", "svg_path": "tacoma_modes.svg"},
              {"csv_path": "tacoma_field_24_7.csv"}],
  "report_path": "tacoma_modes_report.json"})"},
      {"flutter-doubling", R"({
  "name": "flutter-doubling", "model": "flutter",
  "parameters": {"l": 6, "omega_B": 0.8, "omega_T": 1.3, "alpha": 0.02, "scales": [1, 2]},
  "outputs": [{"csv_path": "flutter_doubling.csv", "svg_path": "flutter_doubling.svg"}],
  "report_path": "flutter_doubling_report.json"})"},
      {"scanlan-growth", R"({
  "name": "scanlan-growth", "model": "scanlan",
  "parameters": {"inertia_I": 1, "zeta": 0.01, "omega_n": 1, "A_lift": 0.1, "B_lift": 0,
                 "theta0": 0.01, "thetad0": 0, "t_end": 100, "samples": 4001},
  "outputs": [{"csv_path": "scanlan.csv", "svg_path": "scanlan.svg"}],
  "report_path": "scanlan_report.json"})"},
      {"truebeam-gust", R"({
  "name": "truebeam-gust", "model": "truebeam",
  "parameters": {"geom": {"L": 3.141592653589793, "l": 0.5, "sigma": 0.2},
                 "delta": 0.05, "M": 4, "kappa": 100, "Ebar": 1,
                 "nonlinearity": {"kind": "cubic", "params": {"epsilon": 0.5}},
                 "gust": {"knots": [[0, 0], [2, 2], [4, 0]], "p": [1, 0.3], "q": [0, 0.5]},
                 "integrator": {"rel_tol": 1e-9, "abs_tol": 1e-9, "max_step": 0.05, "t_end": 12}},
  "outputs": [{"csv_path": "truebeam_gust.csv", "svg_path": "truebeam_gust.svg"}],
  "report_path": "truebeam_gust_events.json"})"},
      {"truebeam-torsion-decay", R"({
  "name": "truebeam-torsion-decay", "model": "truebeam",
  "parameters": {"geom": {"L": 3.141592653589793, "l": 0.5, "sigma": 0.2},
                 "delta": 0, "M": 3, "kappa": 100, "Ebar": 1, "frozen_switch": 1,
                 "nonlinearity": {"kind": "linear"},
                 "initial": {"b": [1]},
                 "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-10, "max_step": 0.05, "t_end": 5}},
  "outputs": [{"csv_path": "truebeam_decay.csv", "svg_path": "truebeam_decay.svg"}],
  "report_path": "truebeam_decay_events.json"})"},
      {"piecewise-global", R"({
  "name": "piecewise-global", "model": "ode4",
  "parameters": {"family": "canonical", "k": 2,
                 "nonlinearity": {"kind": "piecewise"},
                 "initial": [3, -2, 1, 4],
                 "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-10, "max_step": 0.5, "blowup_threshold": 1e6, "t_end": 500}},
  "outputs": [{"csv_path": "piecewise.csv", "svg_path": "piecewise.svg"}],
  "report_path": "piecewise_report.json"})"},
      {"coupled-small-angle", R"({
  "name": "coupled-small-angle", "model": "coupled",
  "parameters": {"mass_m": 1, "half_width_l": 1,
                 "nonlinearity": {"kind": "cubic", "params": {"epsilon": 1}},
                 "initial": {"x": 0.001, "xd": 0, "y": 0.5, "yd": 0},
                 "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-10, "t_end": 10}},
  "outputs": [{"csv_path": "coupled.csv", "svg_path": "coupled.svg"}]})"},
      {"energy-ledger", R"({
  "name": "energy-ledger", "model": "energy",
  "parameters": {"geom": {"L": 3.141592653589793, "l": 0.5},
                 "Ebar": 1, "schedule": [0.25, 0.5, 1],
                 "gust": {"knots": [[0, 0], [2, 2], [4, 0]], "p": [1, 0.3], "q": [0, 0.5]},
                 "times": [0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2, 2.5, 3, 3.5, 4]},
  "outputs": [{"csv_path": "energy_ledger.csv", "svg_path": "energy_ledger.svg"}],
  "report_path": "energy_ledger_report.json"})"},
  };
  return t;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : table()) names.push_back(k);
  return names;
}

std::optional<std::string> builtin_config(const std::string& name) {
  const auto it = table().find(name);
  if (it == table().end()) return std::nullopt;
  return it->second;
}

}  // namespace bridge::cli
